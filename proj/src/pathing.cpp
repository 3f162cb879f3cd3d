#include "mapf/pathing.hpp"

#include <algorithm>
#include <deque>
#include <queue>
#include <tuple>
#include <variant>

namespace mapf {

bool AgentConflicts::admits(const Path& path) const {
  for (const auto& c : vertices)
    if (path.at(c.t) == c.v) return false;
  for (const auto& c : edges)
    if (path.at(c.t) == c.from && path.at(c.t + 1) == c.to) return false;
  return true;
}

Collision normalized(Collision c) {
  if (c.agent_i > c.agent_j) {
    std::swap(c.agent_i, c.agent_j);
    if (c.kind == CollisionKind::Edge) std::swap(c.from, c.to);
  }
  return c;
}

bool ConflictSet::add(Collision c) {
  c = normalized(c);
  if (c.agent_i == c.agent_j) throw ContractViolation("collision needs two distinct agents");
  if (!collisions_.insert(c).second) return false;
  const auto top = static_cast<std::size_t>(std::max(c.agent_i, c.agent_j));
  if (per_agent_.size() <= top) per_agent_.resize(top + 1);
  if (c.kind == CollisionKind::Vertex) {
    per_agent_[c.agent_i].vertices.insert({c.to, c.t});
    per_agent_[c.agent_j].vertices.insert({c.to, c.t});
  } else {
    per_agent_[c.agent_i].edges.insert({c.from, c.to, c.t});
    per_agent_[c.agent_j].edges.insert({c.to, c.from, c.t});
  }
  return true;
}

bool ConflictSet::contains(const Collision& c) const { return collisions_.contains(normalized(c)); }

const AgentConflicts& ConflictSet::for_agent(AgentId a) const {
  static const AgentConflicts kEmpty;
  if (a < 0 || static_cast<std::size_t>(a) >= per_agent_.size()) return kEmpty;
  return per_agent_[a];
}

std::optional<int> DistanceTable::at(VertexId v) const {
  if (v < 0 || static_cast<std::size_t>(v) >= dist_.size() || dist_[v] < 0) return std::nullopt;
  return dist_[v];
}

DistanceTable bfs_distances(const Graph& graph, VertexId source) {
  if (!graph.contains(source)) throw ContractViolation("bfs source is not a vertex");
  std::vector<int> dist(graph.vertex_count(), -1);
  std::deque<VertexId> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    VertexId u = queue.front();
    queue.pop_front();
    for (VertexId v : graph.neighbors(u)) {
      if (dist[v] >= 0) continue;
      dist[v] = dist[u] + 1;
      queue.push_back(v);
    }
  }
  return DistanceTable(source, std::move(dist));
}

PathPlanner::PathPlanner(const MapfInstance& instance) : instance_(&instance) {
  for (const auto& a : instance.agents()) {
    from_start_.push_back(bfs_distances(instance.graph(), a.start));
    to_goal_.push_back(bfs_distances(instance.graph(), a.goal));
  }
}

std::optional<Path> PathPlanner::shortest_path(AgentId a, const AgentConflicts& avoid, Timestep horizon,
                                               int cost_bound) const {
  const Graph& graph = instance_->graph();
  const Agent& agent = instance_->agent(a);
  const DistanceTable& h = to_goal_.at(a);
  const Timestep limit = std::min<Timestep>(horizon, cost_bound);
  if (limit < 0 || !h.reachable(agent.start)) return std::nullopt;

  // Arrival at the goal must be later than any vertex conflict on the goal.
  Timestep last_goal_block = -1;
  for (const auto& c : avoid.vertices)
    if (c.v == agent.goal) last_goal_block = std::max(last_goal_block, c.t);

  const std::size_t n = graph.vertex_count();
  auto index = [n](VertexId v, Timestep t) { return static_cast<std::size_t>(t) * n + v; };
  constexpr std::size_t kUnseen = static_cast<std::size_t>(-1);
  std::vector<std::size_t> parent(n * (static_cast<std::size_t>(limit) + 1), kUnseen);
  std::vector<bool> closed(parent.size(), false);

  using Entry = std::tuple<int, Timestep, VertexId>;  // (f, t, v), smallest first
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;

  if (avoid.blocks(agent.start, 0)) return std::nullopt;
  parent[index(agent.start, 0)] = index(agent.start, 0);
  open.emplace(h.raw(agent.start), 0, agent.start);

  while (!open.empty()) {
    auto [f, t, v] = open.top();
    open.pop();
    const std::size_t here = index(v, t);
    if (closed[here]) continue;
    closed[here] = true;

    if (v == agent.goal && t > last_goal_block) {
      Path path{a, std::vector<VertexId>(static_cast<std::size_t>(t) + 1)};
      std::size_t cur = here;
      for (Timestep s = t; s >= 0; --s) {
        path.positions[s] = static_cast<VertexId>(cur % n);
        cur = parent[cur];
      }
      return path;
    }
    if (t == limit) continue;

    auto relax = [&](VertexId next) {
      const int hn = h.raw(next);
      if (hn < 0 || t + 1 + hn > limit) return;
      if (avoid.blocks(next, t + 1) || avoid.blocks_move(v, next, t)) return;
      const std::size_t there = index(next, t + 1);
      if (parent[there] != kUnseen) return;
      parent[there] = here;
      open.emplace(t + 1 + hn, t + 1, next);
    };
    // Neighbors are sorted; the wait slots in by vertex id.
    bool waited = false;
    for (VertexId next : graph.neighbors(v)) {
      if (!waited && v < next) {
        relax(v);
        waited = true;
      }
      relax(next);
    }
    if (!waited) relax(v);
  }
  return std::nullopt;
}

std::optional<Path> constrained_shortest_path(const MapfInstance& instance, AgentId agent,
                                              const AgentConflicts& avoid, Timestep horizon,
                                              int cost_bound) {
  return PathPlanner(instance).shortest_path(agent, avoid, horizon, cost_bound);
}

bool same_route(const Path& a, const Path& b) {
  return trim_path(a).positions == trim_path(b).positions;
}

AndPathResult new_and_path(const PathPlanner& planner, AgentId agent, std::span<const Path> candidates,
                           const AgentConflicts& conflicts, Timestep horizon, int cost_bound) {
  auto path = planner.shortest_path(agent, conflicts, horizon, cost_bound);
  if (!path) return {AndPathStatus::NotFound, {}};
  for (const auto& c : candidates)
    if (same_route(c, *path)) return {AndPathStatus::AlreadyPresent, std::move(*path)};
  return {AndPathStatus::Added, std::move(*path)};
}

std::vector<Path> new_or_paths(const PathPlanner& planner, AgentId agent, const AgentConflicts& conflicts,
                               Timestep horizon, int cost_bound, std::size_t subset_cap) {
  if (subset_cap < 1) throw ContractViolation("subset_cap must be at least 1");
  std::vector<std::variant<VertexConflict, EdgeConflict>> items;
  for (const auto& c : conflicts.vertices) items.emplace_back(c);
  for (const auto& c : conflicts.edges) items.emplace_back(c);

  std::vector<Path> out;
  std::size_t tried = 0;
  const std::size_t n = items.size();
  for (std::size_t k = 1; k <= n && tried < subset_cap; ++k) {
    // Lexicographic k-combinations of [0, n).
    std::vector<std::size_t> pick(k);
    for (std::size_t i = 0; i < k; ++i) pick[i] = i;
    while (tried < subset_cap) {
      AgentConflicts subset;
      for (std::size_t i : pick) {
        if (auto* vc = std::get_if<VertexConflict>(&items[i]))
          subset.vertices.insert(*vc);
        else
          subset.edges.insert(std::get<EdgeConflict>(items[i]));
      }
      ++tried;
      if (auto p = planner.shortest_path(agent, subset, horizon, cost_bound)) {
        bool dup = std::any_of(out.begin(), out.end(), [&](const Path& q) { return same_route(q, *p); });
        if (!dup) out.push_back(std::move(*p));
      }

      std::size_t i = k;
      while (i > 0 && pick[i - 1] == n - k + (i - 1)) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return out;
}

}  // namespace mapf
