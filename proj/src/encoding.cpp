#include "mapf/encoding.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "json.hpp"

namespace mapf {

using sat::Lit;
using sat::Var;

VariableMap::VariableMap(std::shared_ptr<const std::vector<Mdd>> diagrams, std::span<const int> shortest_costs,
                         sat::SatSolver& solver)
    : diagrams_(std::move(diagrams)) {
  const auto& ds = *diagrams_;
  node_base_.resize(ds.size());
  edge_base_.resize(ds.size());
  cost_first_t_.resize(ds.size());
  cost_.resize(ds.size());
  for (std::size_t a = 0; a < ds.size(); ++a) {
    const Mdd& d = ds[a];
    const auto agent = static_cast<AgentId>(a);
    for (Timestep t = 0; t <= d.horizon(); ++t) {
      node_base_[a].push_back(solver.num_vars() + 1);
      for (VertexId v : d.level(t)) record(solver.new_var(), {Kind::Node, agent, kNoVertex, v, t});
    }
    for (Timestep t = 0; t < d.horizon(); ++t) {
      edge_base_[a].push_back(solver.num_vars() + 1);
      for (auto [u, v] : d.edges(t)) record(solver.new_var(), {Kind::Edge, agent, u, v, t});
    }
    cost_first_t_[a] = shortest_costs[a];
    for (Timestep t = shortest_costs[a]; t < d.horizon(); ++t) {
      Var c = solver.new_var();
      record(c, {Kind::Cost, agent, kNoVertex, kNoVertex, t});
      cost_[a].push_back(c);
    }
  }
}

void VariableMap::record(Var v, Entry e) {
  if (static_cast<std::size_t>(v.id) != entries_.size() + 1)
    throw ContractViolation("variable map must own every solver variable");
  ++count_[static_cast<int>(e.kind)];
  entries_.push_back(e);
}

void VariableMap::register_aux(Var v) { record(v, {Kind::Aux, -1, kNoVertex, kNoVertex, -1}); }

std::optional<Var> VariableMap::node(AgentId a, VertexId v, Timestep t) const {
  if (!diagrams_ || a < 0 || static_cast<std::size_t>(a) >= diagrams_->size()) return std::nullopt;
  const Mdd& d = (*diagrams_)[a];
  if (t < 0 || t > d.horizon()) return std::nullopt;
  auto level = d.level(t);
  auto it = std::lower_bound(level.begin(), level.end(), v);
  if (it == level.end() || *it != v) return std::nullopt;
  return Var{node_base_[a][t] + static_cast<int>(it - level.begin())};
}

std::optional<Var> VariableMap::edge(AgentId a, VertexId u, VertexId v, Timestep t) const {
  if (!diagrams_ || a < 0 || static_cast<std::size_t>(a) >= diagrams_->size()) return std::nullopt;
  const Mdd& d = (*diagrams_)[a];
  if (t < 0 || t >= d.horizon()) return std::nullopt;
  auto edges = d.edges(t);
  auto it = std::lower_bound(edges.begin(), edges.end(), MddEdge{u, v});
  if (it == edges.end() || *it != MddEdge{u, v}) return std::nullopt;
  return Var{edge_base_[a][t] + static_cast<int>(it - edges.begin())};
}

std::optional<Var> VariableMap::cost(AgentId a, Timestep t) const {
  if (a < 0 || static_cast<std::size_t>(a) >= cost_.size()) return std::nullopt;
  const int i = t - cost_first_t_[a];
  if (i < 0 || i >= static_cast<int>(cost_[a].size())) return std::nullopt;
  return cost_[a][i];
}

std::string VariableMap::to_json() const {
  static constexpr const char* kNames[] = {"node", "edge", "cost", "aux"};
  nlohmann::json vars = nlohmann::json::array();
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const Entry& e = entries_[i];
    nlohmann::json j = {{"id", i + 1}, {"kind", kNames[static_cast<int>(e.kind)]}};
    if (e.kind != Kind::Aux) j["agent"] = e.agent;
    if (e.kind == Kind::Node) j["vertex"] = e.to;
    if (e.kind == Kind::Edge) j["edge"] = {e.from, e.to};
    if (e.kind != Kind::Aux) j["t"] = e.t;
    vars.push_back(std::move(j));
  }
  return nlohmann::json{{"variables", std::move(vars)}}.dump(1);
}

std::vector<Var> cardinality_le(sat::SatSolver& solver, std::span<const Lit> lits, int k) {
  if (k < 0) throw ContractViolation("cardinality bound must be nonnegative");
  const int n = static_cast<int>(lits.size());
  std::vector<Var> aux;
  if (k >= n) return aux;
  if (k == 0) {
    for (Lit x : lits) solver.add_clause({~x});
    return aux;
  }
  // s[i][j]: at least j+1 of x_0..x_i are true.
  std::vector<std::vector<Lit>> s(n - 1, std::vector<Lit>(k));
  for (int i = 0; i < n - 1; ++i)
    for (int j = 0; j < k; ++j) {
      Var v = solver.new_var();
      aux.push_back(v);
      s[i][j] = Lit::pos(v);
    }
  solver.add_clause({~lits[0], s[0][0]});
  for (int j = 1; j < k; ++j) solver.add_clause({~s[0][j]});
  for (int i = 1; i < n - 1; ++i) {
    solver.add_clause({~lits[i], s[i][0]});
    solver.add_clause({~s[i - 1][0], s[i][0]});
    for (int j = 1; j < k; ++j) {
      solver.add_clause({~lits[i], ~s[i - 1][j - 1], s[i][j]});
      solver.add_clause({~s[i - 1][j], s[i][j]});
    }
    solver.add_clause({~lits[i], ~s[i - 1][k - 1]});
  }
  solver.add_clause({~lits[n - 1], ~s[n - 2][k - 1]});
  return aux;
}

std::vector<Var> at_most_one(sat::SatSolver& solver, std::span<const Lit> lits) {
  if (lits.size() > 5) return cardinality_le(solver, lits, 1);
  for (std::size_t i = 0; i < lits.size(); ++i)
    for (std::size_t j = i + 1; j < lits.size(); ++j) solver.add_clause({~lits[i], ~lits[j]});
  return {};
}

BooleanModel::BooleanModel(std::vector<Mdd> diagrams, std::span<const int> shortest_costs,
                           const ConflictSet& conflicts, int sum_of_costs, ModelMode mode,
                           std::unique_ptr<sat::SatSolver> solver)
    : solver_(std::move(solver)), mode_(mode), soc_(sum_of_costs) {
  if (!solver_) throw ContractViolation("null SAT solver");
  if (solver_->num_vars() != 0) throw ContractViolation("model needs a fresh solver instance");
  if (diagrams.size() != shortest_costs.size()) throw ContractViolation("one shortest cost per diagram");
  for (std::size_t a = 0; a < diagrams.size(); ++a) {
    if (diagrams[a].agent() != static_cast<AgentId>(a)) throw ContractViolation("diagram order must follow agents");
    if (diagrams[a].empty()) throw ContractViolation("empty diagram for agent " + std::to_string(a));
    if (diagrams[a].horizon() != diagrams[0].horizon()) throw ContractViolation("diagram horizon mismatch");
  }
  horizon_ = diagrams.empty() ? 0 : diagrams[0].horizon();
  slack_ = soc_ - std::accumulate(shortest_costs.begin(), shortest_costs.end(), 0);
  if (slack_ < 0) throw ContractViolation("sum-of-costs bound below the shortest-path lower bound");

  diagrams_ = std::make_shared<const std::vector<Mdd>>(std::move(diagrams));
  vars_ = VariableMap(diagrams_, shortest_costs, *solver_);

  for (std::size_t a = 0; a < diagrams_->size(); ++a) encode_agent(static_cast<AgentId>(a), shortest_costs[a]);

  std::vector<Lit> cost_lits;
  for (std::size_t a = 0; a < diagrams_->size(); ++a)
    for (Var c : vars_.cost_vars(static_cast<AgentId>(a))) cost_lits.push_back(Lit::pos(c));
  cardinality_le(cost_lits, slack_);

  if (mode_ == ModelMode::Complete) encode_collision_constraints();
  for (const Collision& c : conflicts.collisions()) {
    conflicts_.add(c);
    emit_conflict(c);
  }
}

void BooleanModel::register_aux(const std::vector<Var>& aux) {
  for (Var v : aux) vars_.register_aux(v);
}

std::vector<Var> BooleanModel::cardinality_le(std::span<const Lit> lits, int k) {
  // Aux variables are allocated lazily inside the counter; register them in order.
  auto aux = mapf::cardinality_le(*solver_, lits, k);
  register_aux(aux);
  return aux;
}

void BooleanModel::encode_agent(AgentId a, int shortest) {
  const Mdd& d = (*diagrams_)[a];
  const Timestep mu = d.horizon();
  auto X = [&](VertexId v, Timestep t) { return Lit::pos(*vars_.node(a, v, t)); };
  auto E = [&](VertexId u, VertexId v, Timestep t) { return Lit::pos(*vars_.edge(a, u, v, t)); };

  add({X(d.start(), 0)});
  add({X(d.goal(), mu)});

  for (Timestep t = 0; t <= mu; ++t) {
    std::vector<Lit> level;
    for (VertexId v : d.level(t)) level.push_back(X(v, t));
    register_aux(at_most_one(*solver_, level));
  }

  for (Timestep t = 0; t < mu; ++t) {
    auto edges = d.edges(t);
    for (std::size_t i = 0; i < edges.size();) {
      const VertexId u = edges[i].first;
      std::vector<Lit> out;
      for (; i < edges.size() && edges[i].first == u; ++i) out.push_back(E(u, edges[i].second, t));
      // Occupying u^t means leaving through exactly one outgoing edge.
      std::vector<Lit> leave{~X(u, t)};
      leave.insert(leave.end(), out.begin(), out.end());
      add(leave);
      register_aux(at_most_one(*solver_, out));
    }
    for (auto [u, v] : edges) {
      add({~E(u, v, t), X(u, t)});
      add({~E(u, v, t), X(v, t + 1)});
    }
  }

  // Away-from-goal indicators, monotone in t; their count equals cost - shortest.
  for (Timestep t = shortest; t < mu; ++t) {
    const Lit c = Lit::pos(*vars_.cost(a, t));
    for (VertexId v : d.level(t))
      if (v != d.goal()) add({~X(v, t), c});
    std::vector<Lit> justify{~c};
    if (t + 1 < mu) {
      const Lit next = Lit::pos(*vars_.cost(a, t + 1));
      add({~next, c});
      justify.push_back(next);
    }
    // Without a goal node at t the agent is away and c is forced anyway.
    if (d.has_node(d.goal(), t)) {
      justify.push_back(~X(d.goal(), t));
      add(justify);
    }
  }
}

void BooleanModel::encode_collision_constraints() {
  const auto& ds = *diagrams_;
  for (Timestep t = 0; t <= horizon_; ++t) {
    std::map<VertexId, std::vector<Lit>> occupants;
    for (std::size_t a = 0; a < ds.size(); ++a)
      for (VertexId v : ds[a].level(t))
        occupants[v].push_back(Lit::pos(*vars_.node(static_cast<AgentId>(a), v, t)));
    for (auto& [v, lits] : occupants)
      if (lits.size() > 1) register_aux(at_most_one(*solver_, lits));
  }
  for (std::size_t i = 0; i < ds.size(); ++i)
    for (std::size_t j = i + 1; j < ds.size(); ++j)
      for (Timestep t = 0; t < horizon_; ++t)
        for (auto [u, v] : ds[i].edges(t)) {
          if (u == v) continue;
          auto opposite = vars_.edge(static_cast<AgentId>(j), v, u, t);
          if (opposite)
            add({~Lit::pos(*vars_.edge(static_cast<AgentId>(i), u, v, t)), ~Lit::pos(*opposite)});
        }
}

bool BooleanModel::emit_conflict(const Collision& c) {
  std::optional<Var> vi, vj;
  if (c.kind == CollisionKind::Vertex) {
    vi = vars_.node(c.agent_i, c.to, c.t);
    vj = vars_.node(c.agent_j, c.to, c.t);
  } else {
    vi = vars_.edge(c.agent_i, c.from, c.to, c.t);
    vj = vars_.edge(c.agent_j, c.to, c.from, c.t);
  }
  if (!vi || !vj) return false;
  add({~Lit::pos(*vi), ~Lit::pos(*vj)});
  ++conflict_clauses_;
  return true;
}

std::size_t BooleanModel::add_conflict_clauses(std::span<const Collision> collisions) {
  std::size_t emitted = 0;
  for (const Collision& c : collisions) {
    const Collision n = normalized(c);
    if (!conflicts_.add(n)) continue;
    if (emit_conflict(n)) ++emitted;
  }
  return emitted;
}

bool BooleanModel::conflict_enforced(const Collision& c) const {
  const Collision n = normalized(c);
  std::optional<Var> vi, vj;
  if (n.kind == CollisionKind::Vertex) {
    vi = vars_.node(n.agent_i, n.to, n.t);
    vj = vars_.node(n.agent_j, n.to, n.t);
  } else {
    vi = vars_.edge(n.agent_i, n.from, n.to, n.t);
    vj = vars_.edge(n.agent_j, n.to, n.from, n.t);
  }
  if (!vi || !vj) return true;
  std::vector<Lit> want{~Lit::pos(*vi), ~Lit::pos(*vj)};
  std::sort(want.begin(), want.end());
  const auto& all = solver_->clauses();
  return std::find(all.begin(), all.end(), want) != all.end();
}

ModelStats BooleanModel::stats() const {
  ModelStats s;
  s.node_vars = vars_.node_vars();
  s.edge_vars = vars_.edge_vars();
  s.cost_vars = vars_.cost_var_count();
  s.aux_vars = vars_.aux_vars();
  s.clauses = solver_->clauses().size();
  s.conflict_clauses = conflict_clauses_;
  return s;
}

Solution BooleanModel::extract_solution() const {
  Solution out;
  for (std::size_t a = 0; a < diagrams_->size(); ++a) {
    const Mdd& d = (*diagrams_)[a];
    const auto agent = static_cast<AgentId>(a);
    Path path{agent, {}};
    for (Timestep t = 0; t <= d.horizon(); ++t) {
      VertexId at = kNoVertex;
      for (VertexId v : d.level(t)) {
        if (!solver_->value(*vars_.node(agent, v, t))) continue;
        if (at != kNoVertex)
          throw EncodingFault("agent " + std::to_string(a) + " occupies two vertices at t=" + std::to_string(t));
        at = v;
      }
      if (at == kNoVertex)
        throw EncodingFault("agent " + std::to_string(a) + " occupies no vertex at t=" + std::to_string(t));
      path.positions.push_back(at);
    }
    out.push_back(std::move(path));
  }
  return out;
}

}  // namespace mapf
