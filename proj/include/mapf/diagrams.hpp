#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mapf/instance.hpp"
#include "mapf/pathing.hpp"

namespace mapf {

using MddEdge = std::pair<VertexId, VertexId>;

// Leveled DAG over time-expanded nodes v^t, t = 0..horizon. Used both for the
// full diagram (every bounded path) and the sparse one built from a path set.
class Mdd {
 public:
  Mdd() = default;
  // Builds from raw per-level nodes/edges and drops nodes that are not on a
  // start^0 -> goal^horizon path.
  Mdd(AgentId agent, VertexId start, VertexId goal, Timestep horizon,
      std::vector<std::vector<VertexId>> levels, std::vector<std::vector<MddEdge>> edges);

  AgentId agent() const { return agent_; }
  VertexId start() const { return start_; }
  VertexId goal() const { return goal_; }
  Timestep horizon() const { return horizon_; }
  bool empty() const { return levels_.empty() || levels_[0].empty(); }

  // Sorted ascending.
  std::span<const VertexId> level(Timestep t) const { return levels_.at(t); }
  // Edges (u^t, v^{t+1}); sorted ascending.
  std::span<const MddEdge> edges(Timestep t) const { return edges_.at(t); }

  bool has_node(VertexId v, Timestep t) const;
  bool has_edge(VertexId u, VertexId v, Timestep t) const;
  std::size_t node_count() const;
  std::size_t edge_count() const;

  // True when the path, padded with goal waits to the horizon, is a directed path here.
  bool represents(const Path& path) const;

  // Text dump: one line per level, then one line per edge.
  std::string dump() const;

 private:
  AgentId agent_ = 0;
  VertexId start_ = kNoVertex;
  VertexId goal_ = kNoVertex;
  Timestep horizon_ = 0;
  std::vector<std::vector<VertexId>> levels_;
  std::vector<std::vector<MddEdge>> edges_;
};

// All paths of cost <= cost_bound and length <= horizon. Goal nodes persist at
// every level from the earliest arrival.
// Throws Infeasible if no such path exists.
Mdd build_mdd(const PathPlanner& planner, AgentId agent, Timestep horizon, int cost_bound);
Mdd build_mdd(const MapfInstance& instance, AgentId agent, Timestep horizon, int cost_bound);

// Union of the given paths, each padded to the horizon with goal waits.
Mdd build_smdd(const MapfInstance& instance, AgentId agent, std::span<const Path> paths, Timestep horizon);

// Number of start -> sink paths; saturates at UINT64_MAX.
std::uint64_t count_represented_paths(const Mdd& mdd);

}  // namespace mapf
