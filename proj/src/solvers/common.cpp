#include "common.hpp"

#include <algorithm>

namespace mapf {

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::Cbs: return "cbs";
    case Algorithm::MddSat: return "mddsat";
    case Algorithm::SmtCbs: return "smtcbs";
    case Algorithm::SparseSmtCbs: return "sparse";
    case Algorithm::HeuristicSmtCbs: return "heuristic";
  }
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (Algorithm a : kAllAlgorithms)
    if (algorithm_name(a) == name) return a;
  return std::nullopt;
}

std::string_view status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Solved: return "solved";
    case SolveStatus::Timeout: return "timeout";
    case SolveStatus::InfeasibleAtCap: return "infeasible";
  }
  return "unknown";
}

int default_cost_cap(const MapfInstance& instance) {
  PathPlanner planner(instance);
  int sum = 0;
  for (const auto& a : instance.agents()) sum += planner.shortest_cost(a.id).value_or(0);
  return sum + static_cast<int>(instance.graph().vertex_count() * instance.agent_count());
}

SolveOutcome solve(const MapfInstance& instance, const SolverConfig& config) {
  switch (config.algorithm) {
    case Algorithm::Cbs: return solve_cbs(instance, config);
    case Algorithm::MddSat: return solve_mdd_sat(instance, config);
    case Algorithm::SmtCbs: return solve_smt_cbs(instance, config);
    case Algorithm::SparseSmtCbs: return solve_sparse_smt_cbs(instance, config);
    case Algorithm::HeuristicSmtCbs: return solve_heuristic_smt_cbs(instance, config);
  }
  throw ContractViolation("unknown algorithm");
}

namespace detail {

SolveOutcome finish_solved(const MapfInstance& instance, Solution solution, SolveStats stats) {
  for (auto& p : solution) p = trim_path(std::move(p));
  solution = pad_solution(std::move(solution));
  if (!validate_solution(instance, solution).empty())
    throw EncodingFault("solver returned a colliding solution");
  for (const auto& p : solution) {
    const Agent& a = instance.agent(p.agent);
    if (p.positions.front() != a.start || p.positions.back() != a.goal)
      throw EncodingFault("solver returned a path with wrong endpoints");
    for (std::size_t t = 0; t + 1 < p.positions.size(); ++t)
      if (p.positions[t] != p.positions[t + 1] && !instance.graph().adjacent(p.positions[t], p.positions[t + 1]))
        throw EncodingFault("solver returned a path that jumps between non-adjacent vertices");
  }
  SolveOutcome out;
  out.status = SolveStatus::Solved;
  out.sum_of_costs = sum_of_costs(instance, solution);
  out.makespan = solution.empty() ? 0 : static_cast<Timestep>(solution.front().length());
  out.solution = std::move(solution);
  out.stats = std::move(stats);
  return out;
}

SolveOutcome finish_unsolved(SolveStatus status, SolveStats stats) {
  SolveOutcome out;
  out.status = status;
  out.stats = std::move(stats);
  return out;
}

}  // namespace detail
}  // namespace mapf
