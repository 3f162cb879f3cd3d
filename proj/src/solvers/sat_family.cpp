// SAT-based solvers sharing one high-level loop: sum-of-costs and horizon grow
// together from the shortest-path lower bound, with a fresh solver instance
// per bound.

#include <algorithm>
#include <numeric>

#include "common.hpp"
#include "mapf/diagrams.hpp"

namespace mapf {

namespace {

using detail::Deadline;

class SatRun {
 public:
  SatRun(const MapfInstance& instance, const SolverConfig& config, SolveStats& stats, const Deadline& deadline)
      : instance_(instance), config_(config), stats_(stats), deadline_(deadline), planner_(instance) {
    for (const auto& a : instance.agents()) {
      auto c = planner_.shortest_cost(a.id);
      if (!c) {
        feasible_ = false;
        c = 0;
      }
      shortest_.push_back(*c);
    }
    sum_shortest_ = std::accumulate(shortest_.begin(), shortest_.end(), 0);
    max_shortest_ = shortest_.empty() ? 0 : *std::max_element(shortest_.begin(), shortest_.end());
  }

  bool feasible() const { return feasible_; }
  int sum_shortest() const { return sum_shortest_; }
  int max_shortest() const { return max_shortest_; }
  const PathPlanner& planner() const { return planner_; }

  FixedOutcome complete(Timestep horizon, int soc);
  FixedOutcome lazy_full(ConflictSet& conflicts, Timestep horizon, int soc);
  FixedOutcome lazy_sparse(CandidateSets& candidates, ConflictSet& conflicts, Timestep horizon, int soc);

 private:
  int agent_bound(AgentId a, int soc) const { return shortest_[a] + (soc - sum_shortest_); }
  AgentId agents() const { return static_cast<AgentId>(instance_.agent_count()); }

  std::vector<Mdd> full_diagrams(Timestep horizon, int soc) const {
    std::vector<Mdd> out;
    for (AgentId a = 0; a < agents(); ++a) out.push_back(build_mdd(planner_, a, horizon, agent_bound(a, soc)));
    return out;
  }

  BooleanModel encode(std::vector<Mdd> diagrams, const ConflictSet& conflicts, int soc, ModelMode mode) {
    Deadline clock(0);
    std::size_t nodes = 0;
    for (const auto& d : diagrams) nodes += d.node_count();
    stats_.smdd_nodes_per_iter.push_back(nodes);
    BooleanModel model(std::move(diagrams), shortest_, conflicts, soc, mode);
    model.solver().set_interrupt([this] { return deadline_.expired(); });
    stats_.encoding_s += clock.elapsed();
    return model;
  }

  void trace(const BooleanModel& model, const CandidateSets* candidates, bool fresh,
             std::vector<std::size_t>& full_nodes_cache) {
    if (!config_.on_iteration) return;
    IterationTrace tr;
    tr.algorithm = config_.algorithm;
    tr.sum_of_costs = model.sum_of_costs_bound();
    tr.horizon = model.horizon();
    tr.fresh_model = fresh;
    if (full_nodes_cache.empty())
      for (const auto& d : full_diagrams(model.horizon(), model.sum_of_costs_bound()))
        full_nodes_cache.push_back(d.node_count());
    tr.full_mdd_nodes = full_nodes_cache;
    for (AgentId a = 0; a < agents(); ++a) {
      tr.diagram_nodes.push_back(model.diagrams()[a].node_count());
      tr.full_diagram.push_back(!candidates || candidates->full[a]);
      tr.candidate_paths.push_back(candidates ? candidates->paths[a].size() : 0);
    }
    tr.decision_vars = model.stats().decision_vars();
    tr.conflicts = model.conflicts().size();
    for (const auto& c : model.conflicts().collisions())
      if (!model.conflict_enforced(c)) tr.conflicts_enforced = false;
    config_.on_iteration(tr);
  }

  sat::SatResult call_sat(BooleanModel& model) {
    ++stats_.sat_calls;
    return model.solve();
  }

  // Adds candidate paths after a round of collisions. Returns true if any
  // agent's candidate set or diagram mode changed.
  bool extend(CandidateSets& cand, const ConflictSet& conflicts, const std::vector<Collision>& fresh,
              Timestep horizon, int soc);
  bool extend_and(CandidateSets& cand, const ConflictSet& conflicts, Timestep horizon, int soc, bool promote);
  bool add_path(CandidateSets& cand, AgentId a, Path p) {
    for (const auto& q : cand.paths[a])
      if (same_route(q, p)) return false;
    cand.paths[a].push_back(std::move(p));
    return true;
  }

  const MapfInstance& instance_;
  const SolverConfig& config_;
  SolveStats& stats_;
  const Deadline& deadline_;
  PathPlanner planner_;
  std::vector<int> shortest_;
  int sum_shortest_ = 0;
  int max_shortest_ = 0;
  bool feasible_ = true;
};

FixedOutcome SatRun::complete(Timestep horizon, int soc) {
  if (deadline_.expired()) return {FixedStatus::Timeout, {}};
  BooleanModel model = encode(full_diagrams(horizon, soc), ConflictSet{}, soc, ModelMode::Complete);
  std::vector<std::size_t> cache;
  trace(model, nullptr, true, cache);
  auto r = call_sat(model);
  if (r == sat::SatResult::Interrupted) return {FixedStatus::Timeout, {}};
  if (r == sat::SatResult::Unsat) return {FixedStatus::Unsat, {}};
  Solution sol = model.extract_solution();
  if (!validate_solution(instance_, sol).empty()) throw EncodingFault("complete model admitted a collision");
  return {FixedStatus::Solved, std::move(sol)};
}

FixedOutcome SatRun::lazy_full(ConflictSet& conflicts, Timestep horizon, int soc) {
  if (deadline_.expired()) return {FixedStatus::Timeout, {}};
  BooleanModel model = encode(full_diagrams(horizon, soc), conflicts, soc, ModelMode::Incomplete);
  std::vector<std::size_t> cache;
  for (bool fresh = true;; fresh = false) {
    if (deadline_.expired()) return {FixedStatus::Timeout, {}};
    trace(model, nullptr, fresh, cache);
    auto r = call_sat(model);
    if (r == sat::SatResult::Interrupted) return {FixedStatus::Timeout, {}};
    if (r == sat::SatResult::Unsat) return {FixedStatus::Unsat, {}};
    Solution sol = model.extract_solution();
    auto collisions = validate_solution(instance_, sol);
    if (collisions.empty()) return {FixedStatus::Solved, std::move(sol)};
    for (const auto& c : collisions) conflicts.add(c);
    model.add_conflict_clauses(collisions);
  }
}

bool SatRun::extend_and(CandidateSets& cand, const ConflictSet& conflicts, Timestep horizon, int soc,
                        bool promote) {
  bool changed = false;
  for (AgentId a = 0; a < agents(); ++a) {
    if (cand.full[a]) continue;
    const AgentConflicts& mine = conflicts.for_agent(a);
    auto r = new_and_path(planner_, a, cand.paths[a], mine, horizon, agent_bound(a, soc));
    if (r.status == AndPathStatus::Added) {
      if (!mine.admits(r.path)) throw EncodingFault("AND-path violates a recorded conflict");
      changed |= add_path(cand, a, std::move(r.path));
    } else if (r.status == AndPathStatus::NotFound && promote) {
      cand.full[a] = true;
      changed = true;
    }
  }
  return changed;
}

bool SatRun::extend(CandidateSets& cand, const ConflictSet& conflicts, const std::vector<Collision>& fresh,
                    Timestep horizon, int soc) {
  if (config_.algorithm != Algorithm::SparseSmtCbs) return extend_and(cand, conflicts, horizon, soc, true);

  std::vector<AgentId> colliding;
  for (const auto& c : fresh) {
    colliding.push_back(c.agent_i);
    colliding.push_back(c.agent_j);
  }
  std::sort(colliding.begin(), colliding.end());
  colliding.erase(std::unique(colliding.begin(), colliding.end()), colliding.end());

  bool changed = false;
  for (AgentId a : colliding) {
    if (cand.full[a]) continue;
    AgentConflicts scope;
    if (config_.or_paths_all_conflicts) {
      scope = conflicts.for_agent(a);
    } else {
      ConflictSet latest;
      for (const auto& c : fresh) latest.add(c);
      scope = latest.for_agent(a);
    }
    auto paths = new_or_paths(planner_, a, scope, horizon, agent_bound(a, soc), config_.or_subset_cap);
    if (paths.empty()) {
      cand.full[a] = true;
      changed = true;
      continue;
    }
    for (auto& p : paths) changed |= add_path(cand, a, std::move(p));
  }
  return changed;
}

FixedOutcome SatRun::lazy_sparse(CandidateSets& cand, ConflictSet& conflicts, Timestep horizon, int soc) {
  for (;;) {
    if (deadline_.expired()) return {FixedStatus::Timeout, {}};
    std::vector<Mdd> diagrams;
    for (AgentId a = 0; a < agents(); ++a) {
      diagrams.push_back(cand.full[a] ? build_mdd(planner_, a, horizon, agent_bound(a, soc))
                                      : build_smdd(instance_, a, cand.paths[a], horizon));
    }
    BooleanModel model = encode(std::move(diagrams), conflicts, soc, ModelMode::Incomplete);
    std::vector<std::size_t> cache;

    bool rebuild = false;
    for (bool fresh = true; !rebuild; fresh = false) {
      if (deadline_.expired()) return {FixedStatus::Timeout, {}};
      trace(model, &cand, fresh, cache);
      auto r = call_sat(model);
      if (r == sat::SatResult::Interrupted) return {FixedStatus::Timeout, {}};
      if (r == sat::SatResult::Unsat) {
        const bool sparse = std::find(cand.full.begin(), cand.full.end(), false) != cand.full.end();
        if (!config_.sparse_unsat_fallback || !sparse) return {FixedStatus::Unsat, {}};
        // Fresh AND-paths at the current bounds first, full diagrams last.
        if (!extend_and(cand, conflicts, horizon, soc, false)) std::fill(cand.full.begin(), cand.full.end(), true);
        rebuild = true;
        continue;
      }
      Solution sol = model.extract_solution();
      auto collisions = validate_solution(instance_, sol);
      if (collisions.empty()) return {FixedStatus::Solved, std::move(sol)};
      std::vector<Collision> fresh_collisions;
      for (const auto& c : collisions)
        if (conflicts.add(c)) fresh_collisions.push_back(c);
      model.add_conflict_clauses(collisions);
      rebuild = extend(cand, conflicts, fresh_collisions, horizon, soc);
    }
  }
}

SolveOutcome run(const MapfInstance& instance, const SolverConfig& config) {
  if (!(config.timeout_s > 0)) throw ContractViolation("timeout must be positive");
  Deadline deadline(config.timeout_s);
  SolveStats stats;
  SatRun sat_run(instance, config, stats, deadline);
  auto finish = [&](SolveStatus s) {
    stats.runtime_s = deadline.elapsed();
    return detail::finish_unsolved(s, stats);
  };
  if (!sat_run.feasible()) return finish(SolveStatus::InfeasibleAtCap);

  const int cap = config.cost_cap.value_or(default_cost_cap(instance));
  ConflictSet conflicts;
  std::optional<CandidateSets> candidates;
  if (config.algorithm == Algorithm::SparseSmtCbs || config.algorithm == Algorithm::HeuristicSmtCbs)
    candidates = initial_candidates(instance);

  for (int slack = 0; sat_run.sum_shortest() + slack <= cap; ++slack) {
    const int soc = sat_run.sum_shortest() + slack;
    const Timestep horizon = sat_run.max_shortest() + slack;
    ++stats.cost_iterations;
    FixedOutcome fixed;
    switch (config.algorithm) {
      case Algorithm::MddSat:
        fixed = sat_run.complete(horizon, soc);
        break;
      case Algorithm::SmtCbs:
        fixed = sat_run.lazy_full(conflicts, horizon, soc);
        break;
      default:
        // Full-diagram mode is tied to the bounds it was chosen under.
        std::fill(candidates->full.begin(), candidates->full.end(), false);
        fixed = sat_run.lazy_sparse(*candidates, conflicts, horizon, soc);
        break;
    }
    stats.conflicts = conflicts.size();
    if (fixed.status == FixedStatus::Timeout) return finish(SolveStatus::Timeout);
    if (fixed.status == FixedStatus::Solved) {
      stats.runtime_s = deadline.elapsed();
      return detail::finish_solved(instance, std::move(fixed.solution), stats);
    }
  }
  return finish(SolveStatus::InfeasibleAtCap);
}

SolverConfig with_algorithm(SolverConfig config, Algorithm a) {
  config.algorithm = a;
  return config;
}

}  // namespace

std::optional<CandidateSets> initial_candidates(const MapfInstance& instance) {
  PathPlanner planner(instance);
  CandidateSets out;
  for (const auto& a : instance.agents()) {
    auto cost = planner.shortest_cost(a.id);
    if (!cost) return std::nullopt;
    auto p = planner.shortest_path(a.id, {}, *cost, *cost);
    if (!p) return std::nullopt;
    out.paths.push_back({std::move(*p)});
  }
  out.full.assign(instance.agent_count(), false);
  return out;
}

FixedOutcome heuristic_fixed(const MapfInstance& instance, CandidateSets& candidates, ConflictSet& conflicts,
                             Timestep horizon, int sum_of_costs, const SolverConfig& config, SolveStats* stats) {
  Deadline deadline(config.timeout_s);
  SolveStats local;
  SatRun sat_run(instance, config, stats ? *stats : local, deadline);
  if (!sat_run.feasible()) return {FixedStatus::Unsat, {}};
  return sat_run.lazy_sparse(candidates, conflicts, horizon, sum_of_costs);
}

SolveOutcome solve_mdd_sat(const MapfInstance& instance, const SolverConfig& config) {
  return run(instance, with_algorithm(config, Algorithm::MddSat));
}

SolveOutcome solve_smt_cbs(const MapfInstance& instance, const SolverConfig& config) {
  return run(instance, with_algorithm(config, Algorithm::SmtCbs));
}

SolveOutcome solve_sparse_smt_cbs(const MapfInstance& instance, const SolverConfig& config) {
  return run(instance, with_algorithm(config, Algorithm::SparseSmtCbs));
}

SolveOutcome solve_heuristic_smt_cbs(const MapfInstance& instance, const SolverConfig& config) {
  return run(instance, with_algorithm(config, Algorithm::HeuristicSmtCbs));
}

}  // namespace mapf
