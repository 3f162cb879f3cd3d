#pragma once

#include <compare>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "mapf/instance.hpp"

namespace mapf {

struct VertexConflict {
  VertexId v = kNoVertex;
  Timestep t = 0;
  friend auto operator<=>(const VertexConflict&, const VertexConflict&) = default;
};

// Forbids moving from -> to between t and t+1.
struct EdgeConflict {
  VertexId from = kNoVertex;
  VertexId to = kNoVertex;
  Timestep t = 0;
  friend auto operator<=>(const EdgeConflict&, const EdgeConflict&) = default;
};

// What a single agent must avoid.
struct AgentConflicts {
  std::set<VertexConflict> vertices;
  std::set<EdgeConflict> edges;

  bool empty() const { return vertices.empty() && edges.empty(); }
  std::size_t size() const { return vertices.size() + edges.size(); }
  bool blocks(VertexId v, Timestep t) const { return vertices.contains({v, t}); }
  bool blocks_move(VertexId from, VertexId to, Timestep t) const { return edges.contains({from, to, t}); }
  bool admits(const Path& path) const;
};

// Accumulated pairwise collisions plus their per-agent projection.
class ConflictSet {
 public:
  // Returns false when the collision was already recorded.
  bool add(Collision c);
  bool contains(const Collision& c) const;

  const std::set<Collision>& collisions() const { return collisions_; }
  const AgentConflicts& for_agent(AgentId a) const;
  std::size_t size() const { return collisions_.size(); }
  bool empty() const { return collisions_.empty(); }

 private:
  std::set<Collision> collisions_;
  std::vector<AgentConflicts> per_agent_;
};

// Orders i < j; edge collisions flip direction along with the agents.
Collision normalized(Collision c);

class DistanceTable {
 public:
  DistanceTable() = default;
  DistanceTable(VertexId source, std::vector<int> dist) : source_(source), dist_(std::move(dist)) {}

  VertexId source() const { return source_; }
  std::optional<int> at(VertexId v) const;
  bool reachable(VertexId v) const { return at(v).has_value(); }
  // -1 for unreachable
  int raw(VertexId v) const { return dist_[v]; }

 private:
  VertexId source_ = kNoVertex;
  std::vector<int> dist_;
};

DistanceTable bfs_distances(const Graph& graph, VertexId source);

// Space-time A* for one agent. Caches start/goal distance tables per agent.
class PathPlanner {
 public:
  explicit PathPlanner(const MapfInstance& instance);
  explicit PathPlanner(MapfInstance&&) = delete;

  const MapfInstance& instance() const { return *instance_; }
  const DistanceTable& from_start(AgentId a) const { return from_start_.at(a); }
  const DistanceTable& to_goal(AgentId a) const { return to_goal_.at(a); }
  // Shortest-path cost ignoring other agents; nullopt if the goal is unreachable.
  std::optional<int> shortest_cost(AgentId a) const { return to_goal_.at(a).at(instance_->agent(a).start); }

  // Minimum path_cost path of length <= horizon and cost <= cost_bound that
  // respects `avoid`. The agent must be able to wait at its goal through every
  // later timestep. The returned path ends at its final arrival.
  std::optional<Path> shortest_path(AgentId a, const AgentConflicts& avoid, Timestep horizon,
                                    int cost_bound) const;

 private:
  const MapfInstance* instance_;
  std::vector<DistanceTable> from_start_;
  std::vector<DistanceTable> to_goal_;
};

std::optional<Path> constrained_shortest_path(const MapfInstance& instance, AgentId agent,
                                              const AgentConflicts& avoid, Timestep horizon,
                                              int cost_bound);

enum class AndPathStatus { Added, AlreadyPresent, NotFound };

struct AndPathResult {
  AndPathStatus status = AndPathStatus::NotFound;
  Path path;
};

// One shortest path avoiding every conflict at once. NotFound asks the caller
// to fall back to the full diagram for this agent.
AndPathResult new_and_path(const PathPlanner& planner, AgentId agent, std::span<const Path> candidates,
                           const AgentConflicts& conflicts, Timestep horizon, int cost_bound);

inline constexpr std::size_t kDefaultOrSubsetCap = 64;

// A shortest path for each nonempty subset of `conflicts`, smallest subsets
// first, stopping after `subset_cap` subsets. Duplicates are dropped.
std::vector<Path> new_or_paths(const PathPlanner& planner, AgentId agent, const AgentConflicts& conflicts,
                               Timestep horizon, int cost_bound, std::size_t subset_cap = kDefaultOrSubsetCap);

// Equal once trailing goal waits are stripped.
bool same_route(const Path& a, const Path& b);

}  // namespace mapf
