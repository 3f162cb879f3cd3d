// Vanilla conflict-based search: best-first over a binary constraint tree,
// space-time A* at the low level, no grid-specific reasoning.

#include <numeric>
#include <queue>
#include <tuple>

#include "common.hpp"

namespace mapf {

namespace {

struct CbsNode {
  int parent = -1;
  AgentId agent = -1;
  std::optional<VertexConflict> vertex;
  std::optional<EdgeConflict> edge;
  Solution paths;  // trimmed
  int soc = 0;
};

AgentConflicts constraints_for(const std::vector<CbsNode>& tree, int node, AgentId agent) {
  AgentConflicts out;
  for (int n = node; n >= 0; n = tree[n].parent) {
    if (tree[n].agent != agent) continue;
    if (tree[n].vertex) out.vertices.insert(*tree[n].vertex);
    if (tree[n].edge) out.edges.insert(*tree[n].edge);
  }
  return out;
}

}  // namespace

SolveOutcome solve_cbs(const MapfInstance& instance, const SolverConfig& config) {
  if (!(config.timeout_s > 0)) throw ContractViolation("timeout must be positive");
  detail::Deadline deadline(config.timeout_s);
  SolveStats stats;
  auto finish = [&](SolveStatus s) {
    stats.runtime_s = deadline.elapsed();
    return detail::finish_unsolved(s, stats);
  };

  PathPlanner planner(instance);
  const auto k = static_cast<AgentId>(instance.agent_count());
  std::vector<int> shortest;
  for (AgentId a = 0; a < k; ++a) {
    auto c = planner.shortest_cost(a);
    if (!c) return finish(SolveStatus::InfeasibleAtCap);
    shortest.push_back(*c);
  }
  const int lower = std::accumulate(shortest.begin(), shortest.end(), 0);
  const int cap = config.cost_cap.value_or(default_cost_cap(instance));
  // Other agents cost at least their shortest paths.
  auto bound = [&](AgentId a) { return cap - (lower - shortest[a]); };

  std::vector<CbsNode> tree;
  CbsNode root;
  for (AgentId a = 0; a < k; ++a) {
    auto p = planner.shortest_path(a, {}, shortest[a], shortest[a]);
    root.paths.push_back(std::move(*p));
  }
  root.soc = lower;
  if (root.soc > cap) return finish(SolveStatus::InfeasibleAtCap);
  tree.push_back(std::move(root));

  using Entry = std::tuple<int, int>;  // (soc, node id)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  open.emplace(tree[0].soc, 0);

  while (!open.empty()) {
    if (deadline.expired()) return finish(SolveStatus::Timeout);
    const int id = std::get<1>(open.top());
    open.pop();
    ++stats.cbs_expansions;

    auto collisions = validate_solution(instance, tree[id].paths);
    if (collisions.empty()) {
      stats.runtime_s = deadline.elapsed();
      return detail::finish_solved(instance, tree[id].paths, stats);
    }
    const Collision c = collisions.front();
    ++stats.conflicts;

    for (int side = 0; side < 2; ++side) {
      CbsNode child;
      child.parent = id;
      child.agent = side == 0 ? c.agent_i : c.agent_j;
      if (c.kind == CollisionKind::Vertex)
        child.vertex = VertexConflict{c.to, c.t};
      else
        child.edge = side == 0 ? EdgeConflict{c.from, c.to, c.t} : EdgeConflict{c.to, c.from, c.t};

      AgentConflicts avoid = constraints_for(tree, id, child.agent);
      if (child.vertex) avoid.vertices.insert(*child.vertex);
      if (child.edge) avoid.edges.insert(*child.edge);
      auto p = planner.shortest_path(child.agent, avoid, bound(child.agent), bound(child.agent));
      if (!p) continue;

      const Agent& a = instance.agent(child.agent);
      child.paths = tree[id].paths;
      child.soc = tree[id].soc - path_cost(child.paths[child.agent], a.goal) + path_cost(*p, a.goal);
      if (child.soc > cap) continue;
      child.paths[child.agent] = std::move(*p);
      tree.push_back(std::move(child));
      open.emplace(tree.back().soc, static_cast<int>(tree.size() - 1));
    }
  }
  return finish(SolveStatus::InfeasibleAtCap);
}

}  // namespace mapf
