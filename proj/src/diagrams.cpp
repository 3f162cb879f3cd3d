#include "mapf/diagrams.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace mapf {

namespace {

bool sorted_contains(std::span<const VertexId> xs, VertexId v) {
  return std::binary_search(xs.begin(), xs.end(), v);
}

void sort_unique(auto& xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
}

}  // namespace

Mdd::Mdd(AgentId agent, VertexId start, VertexId goal, Timestep horizon,
         std::vector<std::vector<VertexId>> levels, std::vector<std::vector<MddEdge>> edges)
    : agent_(agent), start_(start), goal_(goal), horizon_(horizon) {
  if (horizon < 0 || levels.size() != static_cast<std::size_t>(horizon) + 1 ||
      edges.size() != static_cast<std::size_t>(horizon))
    throw ContractViolation("diagram level count does not match horizon");
  for (auto& l : levels) sort_unique(l);
  for (auto& e : edges) sort_unique(e);

  // Forward reachability from start^0, then backward from goal^horizon.
  std::vector<std::vector<VertexId>> fwd(levels.size());
  if (sorted_contains(levels[0], start)) fwd[0] = {start};
  for (Timestep t = 0; t < horizon; ++t) {
    for (auto [u, v] : edges[t])
      if (sorted_contains(fwd[t], u) && sorted_contains(levels[t + 1], v)) fwd[t + 1].push_back(v);
    sort_unique(fwd[t + 1]);
  }
  levels_.assign(levels.size(), {});
  edges_.assign(edges.size(), {});
  if (sorted_contains(fwd[horizon], goal)) levels_[horizon] = {goal};
  for (Timestep t = horizon; t-- > 0;) {
    for (auto [u, v] : edges[t]) {
      if (sorted_contains(fwd[t], u) && sorted_contains(levels_[t + 1], v)) {
        edges_[t].emplace_back(u, v);
        levels_[t].push_back(u);
      }
    }
    sort_unique(levels_[t]);
  }
}

bool Mdd::has_node(VertexId v, Timestep t) const {
  if (t < 0 || t > horizon_ || levels_.empty()) return false;
  return sorted_contains(levels_[t], v);
}

bool Mdd::has_edge(VertexId u, VertexId v, Timestep t) const {
  if (t < 0 || t >= horizon_) return false;
  const auto& e = edges_[t];
  return std::binary_search(e.begin(), e.end(), MddEdge{u, v});
}

std::size_t Mdd::node_count() const {
  std::size_t n = 0;
  for (const auto& l : levels_) n += l.size();
  return n;
}

std::size_t Mdd::edge_count() const {
  std::size_t n = 0;
  for (const auto& e : edges_) n += e.size();
  return n;
}

bool Mdd::represents(const Path& path) const {
  if (path.positions.empty() || path.length() > static_cast<std::size_t>(horizon_)) return false;
  for (Timestep t = 0; t < horizon_; ++t)
    if (!has_edge(path.at(t), path.at(t + 1), t)) return false;
  return has_node(path.at(horizon_), horizon_) && has_node(path.at(0), 0);
}

std::string Mdd::dump() const {
  std::ostringstream os;
  os << "mdd agent=" << agent_ << " horizon=" << horizon_ << '\n';
  for (std::size_t t = 0; t < levels_.size(); ++t) {
    os << 't' << t << ':';
    for (VertexId v : levels_[t]) os << ' ' << v;
    os << '\n';
  }
  for (std::size_t t = 0; t < edges_.size(); ++t)
    for (auto [u, v] : edges_[t]) os << 'e' << t << ": " << u << " -> " << v << '\n';
  return os.str();
}

Mdd build_mdd(const PathPlanner& planner, AgentId agent, Timestep horizon, int cost_bound) {
  const MapfInstance& instance = planner.instance();
  const Graph& graph = instance.graph();
  const Agent& a = instance.agent(agent);
  const DistanceTable& ds = planner.from_start(agent);
  const DistanceTable& dg = planner.to_goal(agent);
  if (!ds.reachable(a.goal))
    throw Infeasible("agent " + std::to_string(agent) + " cannot reach its goal");
  if (horizon < 0) throw ContractViolation("negative horizon");

  std::vector<std::vector<VertexId>> levels(static_cast<std::size_t>(horizon) + 1);
  for (Timestep t = 0; t <= horizon; ++t) {
    for (VertexId v = 0; v < static_cast<VertexId>(graph.vertex_count()); ++v) {
      const int from = ds.raw(v), to = dg.raw(v);
      if (from < 0 || to < 0 || from > t) continue;
      if (v == a.goal || t + to <= cost_bound) levels[t].push_back(v);
    }
  }
  std::vector<std::vector<MddEdge>> edges(static_cast<std::size_t>(horizon));
  for (Timestep t = 0; t < horizon; ++t) {
    for (VertexId u : levels[t]) {
      if (sorted_contains(levels[t + 1], u)) edges[t].emplace_back(u, u);
      for (VertexId v : graph.neighbors(u))
        if (sorted_contains(levels[t + 1], v)) edges[t].emplace_back(u, v);
    }
  }
  Mdd mdd(agent, a.start, a.goal, horizon, std::move(levels), std::move(edges));
  if (mdd.empty())
    throw Infeasible("agent " + std::to_string(agent) + " has no path within horizon " +
                     std::to_string(horizon) + " and cost " + std::to_string(cost_bound));
  return mdd;
}

Mdd build_mdd(const MapfInstance& instance, AgentId agent, Timestep horizon, int cost_bound) {
  return build_mdd(PathPlanner(instance), agent, horizon, cost_bound);
}

Mdd build_smdd(const MapfInstance& instance, AgentId agent, std::span<const Path> paths, Timestep horizon) {
  const Agent& a = instance.agent(agent);
  if (horizon < 0) throw ContractViolation("negative horizon");
  std::vector<std::vector<VertexId>> levels(static_cast<std::size_t>(horizon) + 1);
  std::vector<std::vector<MddEdge>> edges(static_cast<std::size_t>(horizon));
  for (const Path& p : paths) {
    if (p.positions.empty() || p.positions.back() != a.goal)
      throw ContractViolation("candidate path does not end at the goal");
    if (p.positions.front() != a.start) throw ContractViolation("candidate path does not begin at the start");
    if (p.length() > static_cast<std::size_t>(horizon))
      throw ContractViolation("candidate path is longer than the horizon");
    for (Timestep t = 0; t <= horizon; ++t) {
      levels[t].push_back(p.at(t));
      if (t < horizon) edges[t].emplace_back(p.at(t), p.at(t + 1));
    }
  }
  return Mdd(agent, a.start, a.goal, horizon, std::move(levels), std::move(edges));
}

std::uint64_t count_represented_paths(const Mdd& mdd) {
  if (mdd.empty()) return 0;
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  auto level = mdd.level(0);
  std::vector<std::uint64_t> ways(level.size(), 1);
  for (Timestep t = 0; t < mdd.horizon(); ++t) {
    auto cur = mdd.level(t);
    auto next = mdd.level(t + 1);
    std::vector<std::uint64_t> acc(next.size(), 0);
    for (auto [u, v] : mdd.edges(t)) {
      auto iu = std::lower_bound(cur.begin(), cur.end(), u) - cur.begin();
      auto iv = std::lower_bound(next.begin(), next.end(), v) - next.begin();
      acc[iv] = (kMax - acc[iv] < ways[iu]) ? kMax : acc[iv] + ways[iu];
    }
    ways = std::move(acc);
  }
  std::uint64_t total = 0;
  for (auto w : ways) total = (kMax - total < w) ? kMax : total + w;
  return total;
}

}  // namespace mapf
