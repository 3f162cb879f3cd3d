#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "mapf/errors.hpp"

namespace mapf::sat {

// Variable index, dense from 1 (DIMACS numbering).
struct Var {
  int id = 0;
  friend auto operator<=>(const Var&, const Var&) = default;
};

class Lit {
 public:
  constexpr Lit() = default;
  static constexpr Lit pos(Var v) { return Lit(2 * (v.id - 1)); }
  static constexpr Lit neg(Var v) { return Lit(2 * (v.id - 1) + 1); }

  constexpr Var var() const { return Var{(code_ >> 1) + 1}; }
  constexpr bool negative() const { return code_ & 1; }
  constexpr Lit operator~() const { return Lit(code_ ^ 1); }
  // 0-based dense code: 2 * (var - 1) + sign.
  constexpr int code() const { return code_; }
  constexpr int dimacs() const { return negative() ? -var().id : var().id; }

  friend constexpr auto operator<=>(const Lit&, const Lit&) = default;

 private:
  constexpr explicit Lit(int code) : code_(code) {}
  int code_ = 0;
};

enum class SatResult { Sat, Unsat, Interrupted };

struct SolverStats {
  std::uint64_t solves = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t restarts = 0;
};

// Incremental SAT backend. Clauses may be added between solve() calls and the
// solver keeps what it learned. Adding an empty clause or one that mentions an
// unallocated variable throws ContractViolation.
class SatSolver {
 public:
  virtual ~SatSolver() = default;

  virtual Var new_var() = 0;
  virtual int num_vars() const = 0;
  virtual void add_clause(std::span<const Lit> clause) = 0;
  void add_clause(std::initializer_list<Lit> clause) { add_clause(std::span<const Lit>(clause.begin(), clause.size())); }
  virtual SatResult solve() = 0;
  // Valid after solve() returned Sat, until the next add_clause/solve.
  virtual bool value(Var v) const = 0;
  bool value(Lit l) const { return value(l.var()) != l.negative(); }

  // Polled during search; returning true aborts with SatResult::Interrupted.
  virtual void set_interrupt(std::function<bool()> should_stop) = 0;

  // Every clause added so far, after duplicate-literal removal. Tautologies are
  // dropped.
  virtual const std::vector<std::vector<Lit>>& clauses() const = 0;
  virtual const SolverStats& stats() const = 0;
};

std::unique_ptr<SatSolver> make_solver();

// True if the last model satisfies every added clause.
bool model_satisfies_all(const SatSolver& solver);

// `p cnf V C` followed by one 0-terminated clause per line.
void write_dimacs(std::ostream& out, const SatSolver& solver);

}  // namespace mapf::sat
