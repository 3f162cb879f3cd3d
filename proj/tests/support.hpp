#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "mapf/instance.hpp"

namespace mapf::testing {

inline Graph make_graph(std::size_t n, std::vector<std::pair<VertexId, VertexId>> edges) {
  return Graph(n, edges);
}

// v1-v2-v3 as 0-1-2; a1: v1 -> v3.
inline MapfInstance fix_a() { return MapfInstance(make_graph(3, {{0, 1}, {1, 2}}), {{0, 0, 2}}); }

// 2x2 grid: v00=0, v01=1, v10=2, v11=3.
inline MapfInstance fix_b() {
  return MapfInstance(make_graph(4, {{0, 1}, {1, 3}, {3, 2}, {2, 0}}), {{0, 0, 3}, {1, 3, 0}});
}

// v1..v4 as 0..3, spur v5 = 4 hanging off v2.
inline MapfInstance fix_c() {
  return MapfInstance(make_graph(5, {{0, 1}, {1, 2}, {2, 3}, {1, 4}}), {{0, 0, 3}, {1, 3, 0}});
}

// v1..v7 as 0..6 with both routes of the two-path example.
inline Graph fix_d_graph() {
  return make_graph(7, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 5}, {5, 2}, {2, 6}, {6, 4}});
}
inline std::vector<Path> fix_d_paths() { return {{0, {0, 1, 2, 3, 4}}, {0, {0, 5, 2, 6, 4}}}; }

inline std::string grid_map_text(int width, int height, const std::vector<bool>& blocked) {
  std::string out = "type octile\nheight " + std::to_string(height) + "\nwidth " + std::to_string(width) + "\nmap\n";
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) out += blocked[static_cast<std::size_t>(y * width + x)] ? '@' : '.';
    out += '\n';
  }
  return out;
}

inline bool connected(const Graph& g) {
  if (g.vertex_count() == 0) return false;
  std::vector<bool> seen(g.vertex_count());
  std::vector<VertexId> stack{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    for (VertexId w : g.neighbors(v))
      if (!seen[w]) {
        seen[w] = true;
        ++count;
        stack.push_back(w);
      }
  }
  return count == g.vertex_count();
}

// Connected grid of at most 4x4 with at most 30% obstacles and 2-3 agents.
inline MapfInstance random_grid_instance(std::mt19937& rng) {
  for (;;) {
    std::uniform_int_distribution<int> side(2, 4);
    const int w = side(rng), h = side(rng);
    const int cells = w * h;
    const int max_blocked = cells * 3 / 10;
    const int blocked_count = std::uniform_int_distribution<int>(0, max_blocked)(rng);
    std::vector<bool> blocked(static_cast<std::size_t>(cells), false);
    std::vector<int> order(static_cast<std::size_t>(cells));
    for (int i = 0; i < cells; ++i) order[static_cast<std::size_t>(i)] = i;
    std::shuffle(order.begin(), order.end(), rng);
    for (int i = 0; i < blocked_count; ++i) blocked[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = true;
    Graph g = parse_map(grid_map_text(w, h, blocked));
    if (!connected(g)) continue;
    const int k = std::uniform_int_distribution<int>(2, 3)(rng);
    if (static_cast<int>(g.vertex_count()) <= k) continue;
    std::vector<VertexId> vs(g.vertex_count());
    for (std::size_t i = 0; i < vs.size(); ++i) vs[i] = static_cast<VertexId>(i);
    std::vector<VertexId> starts = vs, goals = vs;
    std::shuffle(starts.begin(), starts.end(), rng);
    std::shuffle(goals.begin(), goals.end(), rng);
    std::vector<Agent> agents;
    for (int i = 0; i < k; ++i) agents.push_back({i, starts[static_cast<std::size_t>(i)], goals[static_cast<std::size_t>(i)]});
    return MapfInstance(std::move(g), std::move(agents));
  }
}

// Random connected simple graph on n vertices.
inline Graph random_connected_graph(std::mt19937& rng, std::size_t n, double extra_edge_p) {
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (std::size_t v = 1; v < n; ++v) {
    auto u = std::uniform_int_distribution<std::size_t>(0, v - 1)(rng);
    edges.emplace_back(static_cast<VertexId>(u), static_cast<VertexId>(v));
  }
  std::bernoulli_distribution extra(extra_edge_p);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) {
      bool present = std::any_of(edges.begin(), edges.end(), [&](auto e) {
        return e == std::pair<VertexId, VertexId>(static_cast<VertexId>(u), static_cast<VertexId>(v));
      });
      if (!present && extra(rng)) edges.emplace_back(static_cast<VertexId>(u), static_cast<VertexId>(v));
    }
  return Graph(n, edges);
}

// Independent check: no shared vertex at any t, no head-on swap.
inline bool collision_free(const Solution& s) {
  std::size_t horizon = 0;
  for (const auto& p : s) horizon = std::max(horizon, p.positions.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      for (std::size_t t = 0; t < horizon; ++t) {
        const auto T = static_cast<Timestep>(t);
        if (s[i].at(T) == s[j].at(T)) return false;
        if (s[i].at(T) == s[j].at(T + 1) && s[i].at(T + 1) == s[j].at(T) && s[i].at(T) != s[i].at(T + 1))
          return false;
      }
  return true;
}

inline bool well_formed(const MapfInstance& inst, const Solution& s) {
  if (s.size() != inst.agent_count()) return false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& p = s[i].positions;
    if (p.empty() || p.front() != inst.agent(static_cast<AgentId>(i)).start ||
        p.back() != inst.agent(static_cast<AgentId>(i)).goal)
      return false;
    for (std::size_t t = 1; t < p.size(); ++t)
      if (p[t] != p[t - 1] && !inst.graph().adjacent(p[t - 1], p[t])) return false;
  }
  return true;
}

inline int independent_soc(const MapfInstance& inst, const Solution& s) {
  int total = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto goal = inst.agent(static_cast<AgentId>(i)).goal;
    const auto& p = s[i].positions;
    int last = -1;
    for (std::size_t t = 0; t < p.size(); ++t)
      if (p[t] != goal) last = static_cast<int>(t);
    total += last + 1;
  }
  return total;
}

}  // namespace mapf::testing
