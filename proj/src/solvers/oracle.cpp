// Reference optimum by uniform-cost search over joint configurations. Shares
// nothing with the planners, diagrams or encoders it is used to check.

#include <deque>
#include <queue>
#include <unordered_map>

#include "common.hpp"

namespace mapf {

namespace {

struct JointState {
  std::vector<VertexId> at;
  std::uint32_t resting = 0;  // bit i: agent i stays at its goal from now on
};

class StateCodec {
 public:
  StateCodec(std::size_t vertices, std::size_t agents) : base_(vertices), agents_(agents) {
    if (agents > 16) throw ContractViolation("oracle supports at most 16 agents");
  }

  std::uint64_t encode(const JointState& s) const {
    std::uint64_t key = 0;
    for (std::size_t i = agents_; i-- > 0;) key = key * base_ + static_cast<std::uint64_t>(s.at[i]);
    return (key << agents_) | s.resting;
  }
  JointState decode(std::uint64_t key) const {
    JointState s;
    s.resting = static_cast<std::uint32_t>(key & ((1u << agents_) - 1));
    key >>= agents_;
    s.at.resize(agents_);
    for (std::size_t i = 0; i < agents_; ++i) {
      s.at[i] = static_cast<VertexId>(key % base_);
      key /= base_;
    }
    return s;
  }

 private:
  std::uint64_t base_;
  std::size_t agents_;
};

}  // namespace

OracleResult brute_force_oracle(const MapfInstance& instance, int cost_cap) {
  const Graph& graph = instance.graph();
  const std::size_t k = instance.agent_count();
  const std::uint32_t all = k == 0 ? 0 : static_cast<std::uint32_t>((1ull << k) - 1);
  StateCodec codec(graph.vertex_count(), k);

  struct Visit {
    int cost;
    std::uint64_t parent;
    bool root;
  };
  std::unordered_map<std::uint64_t, Visit> best;
  using Entry = std::pair<int, std::uint64_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;

  auto push = [&](const JointState& s, int cost, std::uint64_t parent, bool root) {
    const std::uint64_t key = codec.encode(s);
    auto it = best.find(key);
    if (it != best.end() && it->second.cost <= cost) return;
    best[key] = {cost, parent, root};
    open.emplace(cost, key);
  };

  // Agents that start on their goal may rest immediately.
  {
    std::uint32_t can_rest = 0;
    JointState s;
    for (const auto& a : instance.agents()) {
      s.at.push_back(a.start);
      if (a.start == a.goal) can_rest |= 1u << a.id;
    }
    for (std::uint32_t sub = can_rest;; sub = (sub - 1) & can_rest) {
      s.resting = sub;
      push(s, 0, 0, true);
      if (sub == 0) break;
    }
  }

  std::optional<std::uint64_t> goal_key;
  while (!open.empty()) {
    auto [cost, key] = open.top();
    open.pop();
    if (best[key].cost != cost) continue;
    if (cost > cost_cap) break;
    const JointState s = codec.decode(key);
    if (s.resting == all) {
      goal_key = key;
      break;
    }
    const int step = static_cast<int>(k) - std::popcount(s.resting);

    // Assign a move to each agent in turn; resting agents stay put.
    JointState next = s;
    auto expand = [&](auto&& self, std::size_t i) -> void {
      if (i == k) {
        push(next, cost + step, key, false);
        return;
      }
      const Agent& a = instance.agent(static_cast<AgentId>(i));
      const VertexId from = s.at[i];
      auto consider = [&](VertexId to) {
        for (std::size_t j = 0; j < i; ++j) {
          if (next.at[j] == to) return;
          if (s.at[j] == to && next.at[j] == from && from != to) return;
        }
        // Agents after i have not moved yet; a resting one will stay where it is.
        for (std::size_t j = i + 1; j < k; ++j)
          if ((s.resting >> j & 1u) && s.at[j] == to) return;
        next.at[i] = to;
        const std::uint32_t bit = 1u << i;
        next.resting = (next.resting & ~bit) | (s.resting & bit);
        self(self, i + 1);
        if (!(s.resting & bit) && to == a.goal) {
          next.resting |= bit;
          self(self, i + 1);
          next.resting &= ~bit;
        }
      };
      if (s.resting >> i & 1u) {
        consider(from);
        return;
      }
      consider(from);
      for (VertexId v : graph.neighbors(from)) consider(v);
    };
    expand(expand, 0);
  }

  OracleResult result;
  if (!goal_key) return result;
  result.sum_of_costs = best[*goal_key].cost;

  std::deque<JointState> trace;
  for (std::uint64_t key = *goal_key;;) {
    trace.push_front(codec.decode(key));
    const Visit& v = best[key];
    if (v.root) break;
    key = v.parent;
  }
  for (std::size_t i = 0; i < k; ++i) {
    Path p{static_cast<AgentId>(i), {}};
    for (const auto& s : trace) p.positions.push_back(s.at[i]);
    result.witness.push_back(trim_path(std::move(p)));
  }
  return result;
}

}  // namespace mapf
