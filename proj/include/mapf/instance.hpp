#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mapf/errors.hpp"

namespace mapf {

using VertexId = std::int32_t;
using AgentId = std::int32_t;
using Timestep = std::int32_t;

inline constexpr VertexId kNoVertex = -1;

struct Cell {
  int x = 0;
  int y = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

struct GridInfo {
  int width = 0;
  int height = 0;
  // Row-major, width * height entries; kNoVertex for blocked cells.
  std::vector<VertexId> cell_to_vertex;
  std::vector<Cell> vertex_to_cell;

  VertexId vertex_at(Cell c) const;
  bool passable(Cell c) const { return vertex_at(c) != kNoVertex; }
};

// Undirected simple graph over dense vertex ids 0..n-1.
class Graph {
 public:
  Graph() = default;
  // Throws ContractViolation on self-loops or endpoints outside [0, n).
  Graph(std::size_t vertex_count, std::span<const std::pair<VertexId, VertexId>> edges);

  std::size_t vertex_count() const { return adjacency_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  bool contains(VertexId v) const { return v >= 0 && static_cast<std::size_t>(v) < adjacency_.size(); }
  bool adjacent(VertexId u, VertexId v) const;
  // Sorted ascending.
  std::span<const VertexId> neighbors(VertexId v) const { return adjacency_.at(v); }
  std::vector<std::pair<VertexId, VertexId>> edges() const;

  const std::optional<GridInfo>& grid() const { return grid_; }
  void set_grid(GridInfo grid) { grid_ = std::move(grid); }

 private:
  std::vector<std::vector<VertexId>> adjacency_;
  std::size_t edge_count_ = 0;
  std::optional<GridInfo> grid_;
};

struct Agent {
  AgentId id = 0;
  VertexId start = kNoVertex;
  VertexId goal = kNoVertex;
};

class MapfInstance {
 public:
  MapfInstance() = default;
  // Throws ContractViolation when starts or goals repeat or leave the graph.
  MapfInstance(Graph graph, std::vector<Agent> agents);

  const Graph& graph() const { return graph_; }
  const std::vector<Agent>& agents() const { return agents_; }
  std::size_t agent_count() const { return agents_.size(); }
  const Agent& agent(AgentId a) const { return agents_.at(a); }

 private:
  Graph graph_;
  std::vector<Agent> agents_;
};

struct Path {
  AgentId agent = 0;
  std::vector<VertexId> positions;

  std::size_t length() const { return positions.empty() ? 0 : positions.size() - 1; }
  VertexId at(Timestep t) const;  // stays at the last vertex past the end
  friend bool operator==(const Path&, const Path&) = default;
};

using Solution = std::vector<Path>;

enum class CollisionKind { Vertex, Edge };

// For edge collisions, agent_i moves from -> to and agent_j moves to -> from
// between t and t+1. For vertex collisions only `to` is meaningful.
struct Collision {
  CollisionKind kind = CollisionKind::Vertex;
  AgentId agent_i = 0;
  AgentId agent_j = 0;
  VertexId from = kNoVertex;
  VertexId to = kNoVertex;
  Timestep t = 0;

  static Collision vertex(AgentId i, AgentId j, VertexId v, Timestep t) {
    return {CollisionKind::Vertex, i, j, kNoVertex, v, t};
  }
  static Collision edge(AgentId i, AgentId j, VertexId u, VertexId v, Timestep t) {
    return {CollisionKind::Edge, i, j, u, v, t};
  }

  friend auto operator<=>(const Collision&, const Collision&) = default;
};

// One parsed .scen line.
struct ScenEntry {
  int bucket = 0;
  std::string map_name;
  int map_width = 0;
  int map_height = 0;
  Cell start;
  Cell goal;
  double optimal_length = 0.0;  // advisory only
};

Graph parse_map(std::string_view text);
std::string render_map(const Graph& graph);
std::vector<ScenEntry> parse_scen(std::string_view text);

// Uses the first `count` entries. Requires a grid graph.
MapfInstance build_instance(const Graph& graph, std::span<const ScenEntry> specs, std::size_t count);

// 1 + last timestep not at the goal; 0 if the path never leaves the goal.
int path_cost(const Path& path, VertexId goal);
int sum_of_costs(const MapfInstance& instance, const Solution& solution);

// Extends every path with trailing waits to a common length.
Solution pad_solution(Solution solution);
Path pad_path(Path path, Timestep horizon);
// Drops trailing repeats of the final vertex.
Path trim_path(Path path);

// Returns every vertex and edge collision, sorted by (t, agent_i, agent_j).
std::vector<Collision> validate_solution(const MapfInstance& instance, const Solution& solution);

}  // namespace mapf
