#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mapf/encoding.hpp"
#include "mapf/instance.hpp"
#include "mapf/pathing.hpp"

namespace mapf {

enum class Algorithm { Cbs, MddSat, SmtCbs, SparseSmtCbs, HeuristicSmtCbs };

inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::Cbs, Algorithm::MddSat, Algorithm::SmtCbs,
                                              Algorithm::SparseSmtCbs, Algorithm::HeuristicSmtCbs};

// cbs | mddsat | smtcbs | sparse | heuristic
std::string_view algorithm_name(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view name);

enum class SolveStatus { Solved, Timeout, InfeasibleAtCap };
std::string_view status_name(SolveStatus s);

// One encode-and-solve round of a SAT-based solver, reported to
// SolverConfig::on_iteration. Full-diagram sizes are computed for the trace
// only when an observer is installed.
struct IterationTrace {
  Algorithm algorithm = Algorithm::HeuristicSmtCbs;
  int sum_of_costs = 0;
  Timestep horizon = 0;
  bool fresh_model = true;  // false: re-solve of the same instance after conflict clauses
  std::vector<bool> full_diagram;            // per agent
  std::vector<std::size_t> diagram_nodes;    // per agent, as encoded
  std::vector<std::size_t> full_mdd_nodes;   // per agent, full diagram at the same bounds
  std::vector<std::size_t> candidate_paths;  // per agent, |Pi| (sparse solvers)
  std::size_t decision_vars = 0;
  std::size_t conflicts = 0;
  bool conflicts_enforced = true;
};

struct SolverConfig {
  Algorithm algorithm = Algorithm::HeuristicSmtCbs;
  double timeout_s = 128.0;
  // Highest sum-of-costs tried; default is sum of shortest costs + |V| * k.
  std::optional<int> cost_cap;
  std::size_t or_subset_cap = kDefaultOrSubsetCap;
  // OR-paths range over all accumulated conflicts of an agent (true) or only
  // the ones discovered in the latest round (false).
  bool or_paths_all_conflicts = true;
  // Promote sparse candidate sets to full diagrams before accepting UNSAT.
  bool sparse_unsat_fallback = true;
  std::function<void(const IterationTrace&)> on_iteration;
};

struct SolveStats {
  std::size_t sat_calls = 0;
  std::size_t conflicts = 0;
  std::size_t cbs_expansions = 0;
  std::size_t cost_iterations = 0;
  std::vector<std::size_t> smdd_nodes_per_iter;  // total diagram nodes per encoded model
  double runtime_s = 0.0;
  double encoding_s = 0.0;
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::Timeout;
  Solution solution;  // padded to the makespan when solved
  int sum_of_costs = 0;
  Timestep makespan = 0;
  SolveStats stats;
};

int default_cost_cap(const MapfInstance& instance);

SolveOutcome solve(const MapfInstance& instance, const SolverConfig& config);
SolveOutcome solve_cbs(const MapfInstance& instance, const SolverConfig& config);
SolveOutcome solve_mdd_sat(const MapfInstance& instance, const SolverConfig& config);
SolveOutcome solve_smt_cbs(const MapfInstance& instance, const SolverConfig& config);
SolveOutcome solve_sparse_smt_cbs(const MapfInstance& instance, const SolverConfig& config);
SolveOutcome solve_heuristic_smt_cbs(const MapfInstance& instance, const SolverConfig& config);

// Candidate path sets for the sparse solvers; `full[i]` switches agent i to
// its full diagram.
struct CandidateSets {
  std::vector<std::vector<Path>> paths;
  std::vector<bool> full;
};

// One shortest path per agent; nullopt if some goal is unreachable.
std::optional<CandidateSets> initial_candidates(const MapfInstance& instance);

enum class FixedStatus { Solved, Unsat, Timeout };

struct FixedOutcome {
  FixedStatus status = FixedStatus::Unsat;
  Solution solution;
};

// Low level of the heuristic solver at fixed (sum_of_costs, horizon). Grows
// `candidates` and `conflicts` in place. config.algorithm selects AND-path
// (HeuristicSmtCbs) or OR-path (SparseSmtCbs) extension.
FixedOutcome heuristic_fixed(const MapfInstance& instance, CandidateSets& candidates, ConflictSet& conflicts,
                             Timestep horizon, int sum_of_costs, const SolverConfig& config,
                             SolveStats* stats = nullptr);

struct OracleResult {
  std::optional<int> sum_of_costs;  // nullopt: infeasible within the cap
  Solution witness;
};

// Exhaustive uniform-cost search over joint configurations. Each agent either
// keeps moving or commits to resting at its goal for good; every step costs
// one per uncommitted agent. Exact, but exponential in the agent count.
OracleResult brute_force_oracle(const MapfInstance& instance, int cost_cap);

}  // namespace mapf
