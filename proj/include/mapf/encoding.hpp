#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mapf/diagrams.hpp"
#include "mapf/instance.hpp"
#include "mapf/pathing.hpp"
#include "mapf/sat.hpp"

namespace mapf {

enum class ModelMode { Complete, Incomplete };

// Bijection between diagram elements and SAT variables.
//   node(a, v, t): agent a occupies v at t
//   edge(a, u, v, t): agent a moves u -> v (or waits if u == v) between t and t+1
//   cost(a, t): agent a is away from its goal at some step >= t; t in [shortest_a, horizon)
class VariableMap {
 public:
  enum class Kind { Node, Edge, Cost, Aux };
  struct Entry {
    Kind kind = Kind::Aux;
    AgentId agent = -1;
    VertexId from = kNoVertex;
    VertexId to = kNoVertex;
    Timestep t = -1;
  };

  VariableMap() = default;
  VariableMap(std::shared_ptr<const std::vector<Mdd>> diagrams, std::span<const int> shortest_costs,
              sat::SatSolver& solver);

  std::optional<sat::Var> node(AgentId a, VertexId v, Timestep t) const;
  std::optional<sat::Var> edge(AgentId a, VertexId u, VertexId v, Timestep t) const;
  std::optional<sat::Var> cost(AgentId a, Timestep t) const;
  std::span<const sat::Var> cost_vars(AgentId a) const { return cost_.at(a); }
  void register_aux(sat::Var v);

  // Indexed by variable id - 1.
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t node_vars() const { return count_[0]; }
  std::size_t edge_vars() const { return count_[1]; }
  std::size_t cost_var_count() const { return count_[2]; }
  std::size_t aux_vars() const { return count_[3]; }

  std::string to_json() const;

 private:
  void record(sat::Var v, Entry e);

  std::shared_ptr<const std::vector<Mdd>> diagrams_;
  std::vector<std::vector<int>> node_base_;  // [agent][t] -> first var id of the level
  std::vector<std::vector<int>> edge_base_;
  std::vector<int> cost_first_t_;
  std::vector<std::vector<sat::Var>> cost_;
  std::vector<Entry> entries_;
  std::size_t count_[4] = {0, 0, 0, 0};
};

struct ModelStats {
  std::size_t node_vars = 0;
  std::size_t edge_vars = 0;
  std::size_t cost_vars = 0;
  std::size_t aux_vars = 0;
  std::size_t clauses = 0;
  std::size_t conflict_clauses = 0;

  std::size_t decision_vars() const { return node_vars + edge_vars; }
};

// At most k of `lits` true, via a sequential counter. Emits unit negations for
// k == 0 and nothing for k >= n. Returns the auxiliary variables it created.
std::vector<sat::Var> cardinality_le(sat::SatSolver& solver, std::span<const sat::Lit> lits, int k);

// Pairwise for groups of up to five literals, sequential counter beyond.
std::vector<sat::Var> at_most_one(sat::SatSolver& solver, std::span<const sat::Lit> lits);

// Propositional model of one (sum-of-costs, horizon) question over per-agent
// diagrams. Owns its solver instance; clauses only ever grow.
class BooleanModel {
 public:
  // `diagrams[i]` belongs to agent i and all share one horizon.
  // `shortest_costs[i]` is agent i's unconstrained shortest-path cost.
  BooleanModel(std::vector<Mdd> diagrams, std::span<const int> shortest_costs, const ConflictSet& conflicts,
               int sum_of_costs, ModelMode mode, std::unique_ptr<sat::SatSolver> solver = sat::make_solver());

  ModelMode mode() const { return mode_; }
  Timestep horizon() const { return horizon_; }
  int sum_of_costs_bound() const { return soc_; }
  int slack() const { return slack_; }
  const std::vector<Mdd>& diagrams() const { return *diagrams_; }
  const VariableMap& variables() const { return vars_; }
  const ConflictSet& conflicts() const { return conflicts_; }
  sat::SatSolver& solver() { return *solver_; }
  const sat::SatSolver& solver() const { return *solver_; }
  ModelStats stats() const;

  // Records each collision and emits its forbidding clause when both sides
  // exist in the diagrams. Returns the number of clauses emitted.
  std::size_t add_conflict_clauses(std::span<const Collision> collisions);
  // True if a recorded conflict's clause is in the model or vacuous.
  bool conflict_enforced(const Collision& c) const;

  std::vector<sat::Var> cardinality_le(std::span<const sat::Lit> lits, int k);

  sat::SatResult solve() { return solver_->solve(); }
  // Reads one true node per level per agent. Throws EncodingFault otherwise.
  Solution extract_solution() const;

  void write_dimacs(std::ostream& out) const { sat::write_dimacs(out, *solver_); }

 private:
  void add(std::initializer_list<sat::Lit> clause) { solver_->add_clause(clause); }
  void add(std::span<const sat::Lit> clause) { solver_->add_clause(clause); }
  void register_aux(const std::vector<sat::Var>& aux);
  void encode_agent(AgentId a, int shortest);
  void encode_collision_constraints();
  bool emit_conflict(const Collision& c);

  std::unique_ptr<sat::SatSolver> solver_;
  std::shared_ptr<const std::vector<Mdd>> diagrams_;
  VariableMap vars_;
  ModelMode mode_;
  Timestep horizon_ = 0;
  int soc_ = 0;
  int slack_ = 0;
  ConflictSet conflicts_;
  std::size_t conflict_clauses_ = 0;
};

}  // namespace mapf
