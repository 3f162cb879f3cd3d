// Incremental CDCL solver: two watched literals, first-UIP learning with
// local minimization, VSIDS with phase saving, Luby restarts and
// activity-based learnt clause reduction.

#include <algorithm>
#include <cstdint>
#include <ostream>

#include "mapf/sat.hpp"

namespace mapf::sat {

namespace {

constexpr std::uint32_t kNoReason = UINT32_MAX;

double luby(double y, int x) {
  int size = 1, seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  double r = 1;
  for (int i = 0; i < seq; ++i) r *= y;
  return r;
}

// Max-heap of variable indices keyed by an external activity array.
class VarHeap {
 public:
  explicit VarHeap(const std::vector<double>& activity) : activity_(&activity) {}

  void grow(int n) { pos_.resize(n, -1); }
  bool contains(int v) const { return pos_[v] >= 0; }
  bool empty() const { return heap_.empty(); }

  void insert(int v) {
    if (contains(v)) return;
    pos_[v] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    up(pos_[v]);
  }
  void increased(int v) {
    if (contains(v)) up(pos_[v]);
  }
  int pop() {
    int top = heap_.front();
    heap_.front() = heap_.back();
    pos_[heap_.front()] = 0;
    heap_.pop_back();
    pos_[top] = -1;
    if (!heap_.empty()) down(0);
    return top;
  }

 private:
  bool less(int a, int b) const { return (*activity_)[a] > (*activity_)[b] || ((*activity_)[a] == (*activity_)[b] && a < b); }
  void up(int i) {
    int v = heap_[i];
    while (i > 0) {
      int p = (i - 1) / 2;
      if (!less(v, heap_[p])) break;
      heap_[i] = heap_[p];
      pos_[heap_[i]] = i;
      i = p;
    }
    heap_[i] = v;
    pos_[v] = i;
  }
  void down(int i) {
    int v = heap_[i];
    const int n = static_cast<int>(heap_.size());
    while (2 * i + 1 < n) {
      int c = 2 * i + 1;
      if (c + 1 < n && less(heap_[c + 1], heap_[c])) ++c;
      if (!less(heap_[c], v)) break;
      heap_[i] = heap_[c];
      pos_[heap_[i]] = i;
      i = c;
    }
    heap_[i] = v;
    pos_[v] = i;
  }

  const std::vector<double>* activity_;
  std::vector<int> heap_;
  std::vector<int> pos_;
};

class CdclSolver final : public SatSolver {
 public:
  CdclSolver() : order_(activity_) {}

  Var new_var() override {
    const int v = num_vars_++;
    assigns_.push_back(kUndef);
    level_.push_back(0);
    reason_.push_back(kNoReason);
    activity_.push_back(0.0);
    polarity_.push_back(true);  // prefer false first
    seen_.push_back(0);
    watches_.resize(2 * static_cast<std::size_t>(num_vars_));
    order_.grow(num_vars_);
    order_.insert(v);
    return Var{v + 1};
  }

  int num_vars() const override { return num_vars_; }

  void add_clause(std::span<const Lit> input) override {
    if (input.empty()) throw ContractViolation("empty clause");
    std::vector<Lit> lits(input.begin(), input.end());
    for (Lit l : lits)
      if (l.var().id < 1 || l.var().id > num_vars_)
        throw ContractViolation("clause uses unallocated variable " + std::to_string(l.var().id));
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    for (std::size_t i = 1; i < lits.size(); ++i)
      if (lits[i] == ~lits[i - 1]) return;  // tautology
    originals_.push_back(lits);
    model_valid_ = false;
    if (!ok_) return;

    // Simplify against level-0 facts.
    std::vector<Lit> kept;
    for (Lit l : lits) {
      int v = value_of(l);
      if (v == kTrue) return;
      if (v == kUndef) kept.push_back(l);
    }
    if (kept.empty()) {
      ok_ = false;
      return;
    }
    if (kept.size() == 1) {
      enqueue(kept[0], kNoReason);
      if (propagate() != kNoReason) ok_ = false;
      return;
    }
    attach(store(std::move(kept), false));
  }

  SatResult solve() override {
    ++stats_.solves;
    model_valid_ = false;
    if (!ok_) return SatResult::Unsat;
    if (propagate() != kNoReason) {
      ok_ = false;
      return SatResult::Unsat;
    }

    int restart_index = 0;
    std::uint64_t budget = static_cast<std::uint64_t>(luby(2.0, restart_index) * kRestartBase);
    std::uint64_t conflicts_here = 0;
    std::uint64_t tick = 0;
    std::vector<Lit> learnt;

    for (;;) {
      std::uint32_t conflict = propagate();
      if (conflict != kNoReason) {
        ++stats_.conflicts;
        ++conflicts_here;
        if (decision_level() == 0) {
          ok_ = false;
          return SatResult::Unsat;
        }
        int back_level = 0;
        analyze(conflict, learnt, back_level);
        backtrack(back_level);
        if (learnt.size() == 1) {
          enqueue(learnt[0], kNoReason);
        } else {
          std::uint32_t cref = store(learnt, true);
          attach(cref);
          bump_clause(cref);
          enqueue(learnt[0], cref);
        }
        decay_activities();
        continue;
      }

      if ((++tick & 0xff) == 0 && should_stop_ && should_stop_()) {
        backtrack(0);
        return SatResult::Interrupted;
      }
      if (conflicts_here >= budget) {
        ++stats_.restarts;
        backtrack(0);
        conflicts_here = 0;
        budget = static_cast<std::uint64_t>(luby(2.0, ++restart_index) * kRestartBase);
      }
      if (num_learnts_ >= max_learnts_ + trail_.size()) {
        reduce_learnts();
        max_learnts_ = max_learnts_ * 11 / 10;
      }

      Lit next = pick_branch();
      if (next == kNoLit) {
        model_.assign(num_vars_, false);
        for (int v = 0; v < num_vars_; ++v) model_[v] = assigns_[v] == kTrue;
        model_valid_ = true;
        backtrack(0);
        return SatResult::Sat;
      }
      ++stats_.decisions;
      trail_lim_.push_back(static_cast<int>(trail_.size()));
      enqueue(next, kNoReason);
    }
  }

  bool value(Var v) const override {
    if (!model_valid_) throw ContractViolation("no model available");
    if (v.id < 1 || v.id > num_vars_) throw ContractViolation("model query for unallocated variable");
    return model_[v.id - 1];
  }

  void set_interrupt(std::function<bool()> should_stop) override { should_stop_ = std::move(should_stop); }
  const std::vector<std::vector<Lit>>& clauses() const override { return originals_; }
  const SolverStats& stats() const override { return stats_; }

 private:
  static constexpr std::int8_t kTrue = 1, kFalse = -1, kUndef = 0;
  static constexpr double kRestartBase = 100;
  static inline const Lit kNoLit = ~Lit::pos(Var{0});

  struct Clause {
    std::vector<Lit> lits;
    bool learnt = false;
    bool deleted = false;
    double activity = 0;
  };
  struct Watcher {
    std::uint32_t cref;
    Lit blocker;
  };

  int value_of(Lit l) const {
    std::int8_t a = assigns_[l.var().id - 1];
    return l.negative() ? -a : a;
  }
  int var_index(Lit l) const { return l.var().id - 1; }
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  std::uint32_t store(std::vector<Lit> lits, bool learnt) {
    clauses_.push_back({std::move(lits), learnt, false, 0.0});
    if (learnt) ++num_learnts_;
    return static_cast<std::uint32_t>(clauses_.size() - 1);
  }

  void attach(std::uint32_t cref) {
    const auto& c = clauses_[cref].lits;
    watches_[(~c[0]).code()].push_back({cref, c[1]});
    watches_[(~c[1]).code()].push_back({cref, c[0]});
  }

  void enqueue(Lit l, std::uint32_t reason) {
    const int v = var_index(l);
    assigns_[v] = l.negative() ? kFalse : kTrue;
    level_[v] = decision_level();
    reason_[v] = reason;
    trail_.push_back(l);
  }

  // Watchers of literal p are visited when p becomes true, i.e. ~p became false.
  std::uint32_t propagate() {
    std::uint32_t conflict = kNoReason;
    while (qhead_ < trail_.size()) {
      const Lit p = trail_[qhead_++];
      ++stats_.propagations;
      auto& ws = watches_[p.code()];
      std::size_t i = 0, j = 0;
      const Lit false_lit = ~p;
      while (i < ws.size()) {
        Watcher w = ws[i++];
        Clause& c = clauses_[w.cref];
        if (c.deleted) continue;
        if (value_of(w.blocker) == kTrue) {
          ws[j++] = w;
          continue;
        }
        auto& lits = c.lits;
        if (lits[0] == false_lit) std::swap(lits[0], lits[1]);
        const Lit first = lits[0];
        if (first != w.blocker && value_of(first) == kTrue) {
          ws[j++] = {w.cref, first};
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < lits.size(); ++k) {
          if (value_of(lits[k]) != kFalse) {
            std::swap(lits[1], lits[k]);
            watches_[(~lits[1]).code()].push_back({w.cref, first});
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = {w.cref, first};
        if (value_of(first) == kFalse) {
          conflict = w.cref;
          qhead_ = trail_.size();
          while (i < ws.size()) ws[j++] = ws[i++];
        } else {
          enqueue(first, w.cref);
        }
      }
      ws.resize(j);
      if (conflict != kNoReason) break;
    }
    return conflict;
  }

  void analyze(std::uint32_t conflict, std::vector<Lit>& out, int& back_level) {
    out.clear();
    out.push_back(kNoLit);
    int pending = 0;
    Lit p = kNoLit;
    std::size_t index = trail_.size();
    std::vector<int> touched;

    do {
      Clause& c = clauses_[conflict];
      if (c.learnt) bump_clause(conflict);
      for (std::size_t k = (p == kNoLit ? 0 : 1); k < c.lits.size(); ++k) {
        const Lit q = c.lits[k];
        const int v = var_index(q);
        if (seen_[v] || level_[v] == 0) continue;
        seen_[v] = 1;
        touched.push_back(v);
        bump_var(v);
        if (level_[v] >= decision_level())
          ++pending;
        else
          out.push_back(q);
      }
      while (!seen_[var_index(trail_[--index])]) {
      }
      p = trail_[index];
      conflict = reason_[var_index(p)];
      seen_[var_index(p)] = 0;
      --pending;
    } while (pending > 0);
    out[0] = ~p;

    // Drop literals implied by others already in the clause.
    std::size_t keep = 1;
    for (std::size_t k = 1; k < out.size(); ++k) {
      const std::uint32_t r = reason_[var_index(out[k])];
      bool redundant = r != kNoReason;
      if (redundant) {
        for (Lit q : clauses_[r].lits) {
          const int v = var_index(q);
          if (v != var_index(out[k]) && !seen_[v] && level_[v] > 0) {
            redundant = false;
            break;
          }
        }
      }
      if (!redundant) out[keep++] = out[k];
    }
    out.resize(keep);
    for (int v : touched) seen_[v] = 0;

    back_level = 0;
    if (out.size() > 1) {
      std::size_t max_i = 1;
      for (std::size_t k = 2; k < out.size(); ++k)
        if (level_[var_index(out[k])] > level_[var_index(out[max_i])]) max_i = k;
      std::swap(out[1], out[max_i]);
      back_level = level_[var_index(out[1])];
    }
  }

  void backtrack(int target) {
    if (decision_level() <= target) return;
    for (std::size_t i = trail_.size(); i-- > static_cast<std::size_t>(trail_lim_[target]);) {
      const int v = var_index(trail_[i]);
      polarity_[v] = trail_[i].negative();
      assigns_[v] = kUndef;
      reason_[v] = kNoReason;
      order_.insert(v);
    }
    trail_.resize(trail_lim_[target]);
    trail_lim_.resize(target);
    qhead_ = trail_.size();
  }

  Lit pick_branch() {
    while (!order_.empty()) {
      const int v = order_.pop();
      if (assigns_[v] == kUndef) return polarity_[v] ? Lit::neg(Var{v + 1}) : Lit::pos(Var{v + 1});
    }
    return kNoLit;
  }

  void bump_var(int v) {
    if ((activity_[v] += var_inc_) > 1e100) {
      for (double& a : activity_) a *= 1e-100;
      var_inc_ *= 1e-100;
    }
    order_.increased(v);
  }

  void bump_clause(std::uint32_t cref) {
    if ((clauses_[cref].activity += clause_inc_) > 1e20) {
      for (auto& c : clauses_)
        if (c.learnt) c.activity *= 1e-20;
      clause_inc_ *= 1e-20;
    }
  }

  void decay_activities() {
    var_inc_ /= 0.95;
    clause_inc_ /= 0.999;
  }

  bool locked(std::uint32_t cref) const {
    const Lit first = clauses_[cref].lits[0];
    const int v = var_index(first);
    return value_of(first) == kTrue && reason_[v] == cref;
  }

  void reduce_learnts() {
    std::vector<std::uint32_t> learnts;
    for (std::uint32_t i = 0; i < clauses_.size(); ++i)
      if (clauses_[i].learnt && !clauses_[i].deleted && clauses_[i].lits.size() > 2) learnts.push_back(i);
    std::sort(learnts.begin(), learnts.end(), [&](std::uint32_t a, std::uint32_t b) {
      return clauses_[a].activity < clauses_[b].activity;
    });
    for (std::size_t k = 0; k < learnts.size() / 2; ++k) {
      const std::uint32_t cref = learnts[k];
      if (locked(cref)) continue;
      clauses_[cref].deleted = true;
      clauses_[cref].lits.shrink_to_fit();
      --num_learnts_;
    }
  }

  int num_vars_ = 0;
  bool ok_ = true;
  std::vector<std::int8_t> assigns_;
  std::vector<int> level_;
  std::vector<std::uint32_t> reason_;
  std::vector<double> activity_;
  std::vector<bool> polarity_;
  std::vector<char> seen_;
  std::vector<std::vector<Watcher>> watches_;
  std::vector<Clause> clauses_;
  std::vector<std::vector<Lit>> originals_;
  std::vector<Lit> trail_;
  std::vector<int> trail_lim_;
  std::size_t qhead_ = 0;
  VarHeap order_;
  double var_inc_ = 1.0;
  double clause_inc_ = 1.0;
  std::size_t num_learnts_ = 0;
  std::size_t max_learnts_ = 2000;
  std::vector<bool> model_;
  bool model_valid_ = false;
  std::function<bool()> should_stop_;
  SolverStats stats_;
};

}  // namespace

std::unique_ptr<SatSolver> make_solver() { return std::make_unique<CdclSolver>(); }

bool model_satisfies_all(const SatSolver& solver) {
  for (const auto& clause : solver.clauses())
    if (std::none_of(clause.begin(), clause.end(), [&](Lit l) { return solver.value(l); })) return false;
  return true;
}

void write_dimacs(std::ostream& out, const SatSolver& solver) {
  out << "p cnf " << solver.num_vars() << ' ' << solver.clauses().size() << '\n';
  for (const auto& clause : solver.clauses()) {
    for (Lit l : clause) out << l.dimacs() << ' ';
    out << "0\n";
  }
}

}  // namespace mapf::sat
