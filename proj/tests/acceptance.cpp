// Prints one PASS/FAIL line per acceptance criterion; exits nonzero on any FAIL.

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "mapf/bench.hpp"
#include "mapf/diagrams.hpp"
#include "mapf/encoding.hpp"
#include "mapf/solvers.hpp"
#include "support.hpp"

using namespace mapf;
using namespace mapf::testing;

namespace {

constexpr std::size_t kOracleInstances = 120;
constexpr std::uint32_t kSeed = 20240611;

struct Verdict {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

std::vector<MapfInstance> random_suite() {
  std::mt19937 rng(kSeed);
  std::vector<MapfInstance> out;
  while (out.size() < kOracleInstances) {
    auto inst = random_grid_instance(rng);
    // Solvable instances only.
    if (brute_force_oracle(inst, default_cost_cap(inst)).sum_of_costs) out.push_back(std::move(inst));
  }
  return out;
}

int oracle_cap(const MapfInstance& inst) { return default_cost_cap(inst); }

Verdict oracle_equivalence(const std::vector<MapfInstance>& suite) {
  Verdict v;
  int checked = 0;
  for (std::size_t n = 0; n < suite.size(); ++n) {
    const auto& inst = suite[n];
    auto oracle = brute_force_oracle(inst, oracle_cap(inst));
    for (Algorithm a : kAllAlgorithms) {
      SolverConfig cfg;
      cfg.algorithm = a;
      cfg.timeout_s = 60;
      auto out = solve(inst, cfg);
      ++checked;
      const std::string tag = "instance " + std::to_string(n) + " " + std::string(algorithm_name(a));
      if (!oracle.sum_of_costs) {
        if (out.status != SolveStatus::InfeasibleAtCap) v.fail(tag + ": oracle infeasible, solver did not agree");
        continue;
      }
      if (out.status != SolveStatus::Solved) {
        v.fail(tag + ": not solved (" + std::string(status_name(out.status)) + ")");
        continue;
      }
      if (out.sum_of_costs != *oracle.sum_of_costs || independent_soc(inst, out.solution) != *oracle.sum_of_costs)
        v.fail(tag + ": soc " + std::to_string(out.sum_of_costs) + " vs oracle " +
               std::to_string(*oracle.sum_of_costs));
      if (!well_formed(inst, out.solution) || !collision_free(out.solution)) v.fail(tag + ": invalid solution");
    }
  }
  if (v.ok) v.detail = std::to_string(suite.size()) + " instances, " + std::to_string(checked) + " solver runs";
  return v;
}

Verdict example_smdd() {
  Verdict v;
  MapfInstance inst(fix_d_graph(), {{0, 0, 4}});
  auto paths = fix_d_paths();
  Mdd m = build_smdd(inst, 0, paths, 4);
  const auto nodes = m.node_count(), edges = m.edge_count();
  const auto count = count_represented_paths(m);
  if (nodes != 7 || edges != 8 || count != 4)
    v.fail("nodes " + std::to_string(nodes) + ", edges " + std::to_string(edges) + ", paths " + std::to_string(count));
  else
    v.detail = "7 nodes, 8 edges, 4 paths";
  return v;
}

Verdict fixture_optima() {
  Verdict v;
  const std::array<std::pair<const char*, MapfInstance>, 3> fixtures{
      {{"A", fix_a()}, {"B", fix_b()}, {"C", fix_c()}}};
  const std::array<int, 3> expected{2, 4, 8};
  for (std::size_t f = 0; f < fixtures.size(); ++f) {
    const auto& [name, inst] = fixtures[f];
    auto oracle = brute_force_oracle(inst, oracle_cap(inst));
    if (!oracle.sum_of_costs || *oracle.sum_of_costs != expected[f])
      v.fail(std::string("oracle disagrees on ") + name);
    for (Algorithm a : kAllAlgorithms) {
      SolverConfig cfg;
      cfg.algorithm = a;
      auto out = solve(inst, cfg);
      if (out.status != SolveStatus::Solved || out.sum_of_costs != expected[f])
        v.fail(std::string(name) + " " + std::string(algorithm_name(a)) + " -> " +
               std::to_string(out.sum_of_costs));
    }
  }
  if (v.ok) v.detail = "A=2 B=4 C=8 for all solvers and the oracle";
  return v;
}

Verdict sparsification(const std::vector<MapfInstance>& suite) {
  Verdict v;
  std::size_t iterations = 0;
  for (std::size_t n = 0; n < suite.size(); ++n) {
    const auto& inst = suite[n];
    std::vector<IterationTrace> heur, smt;
    SolverConfig cfg;
    cfg.algorithm = Algorithm::HeuristicSmtCbs;
    cfg.on_iteration = [&](const IterationTrace& t) { heur.push_back(t); };
    solve(inst, cfg);
    cfg.algorithm = Algorithm::SmtCbs;
    cfg.on_iteration = [&](const IterationTrace& t) { smt.push_back(t); };
    solve(inst, cfg);
    const std::string tag = "instance " + std::to_string(n);
    for (const auto& t : heur) {
      ++iterations;
      for (std::size_t a = 0; a < t.diagram_nodes.size(); ++a)
        if (!t.full_diagram[a] && t.diagram_nodes[a] > t.full_mdd_nodes[a])
          v.fail(tag + ": agent " + std::to_string(a) + " sparse diagram larger than full");
    }
    if (heur.empty() || smt.empty()) {
      if (heur.size() != smt.size()) v.fail(tag + ": only one solver encoded a model");
      continue;
    }
    if (heur.front().sum_of_costs != smt.front().sum_of_costs || heur.front().horizon != smt.front().horizon)
      v.fail(tag + ": first iterations use different bounds");
    else if (heur.front().decision_vars > smt.front().decision_vars)
      v.fail(tag + ": first incomplete model has more decision variables (" +
             std::to_string(heur.front().decision_vars) + " > " + std::to_string(smt.front().decision_vars) + ")");
  }
  if (v.ok) v.detail = std::to_string(iterations) + " traced iterations";
  return v;
}

// Connected graphs on n vertices up to relabelling, as edge lists.
std::vector<std::vector<std::pair<VertexId, VertexId>>> connected_graphs(int n) {
  std::vector<std::pair<int, int>> slots;
  for (int u = 0; u < n; ++u)
    for (int w = u + 1; w < n; ++w) slots.emplace_back(u, w);
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::vector<std::vector<int>> perms;
  std::iota(perm.begin(), perm.end(), 0);
  do perms.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));
  std::vector<std::vector<int>> slot_of(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
  for (std::size_t s = 0; s < slots.size(); ++s) {
    slot_of[slots[s].first][slots[s].second] = static_cast<int>(s);
    slot_of[slots[s].second][slots[s].first] = static_cast<int>(s);
  }
  std::set<std::uint32_t> seen;
  std::vector<std::vector<std::pair<VertexId, VertexId>>> out;
  for (std::uint32_t mask = 0; mask < (1u << slots.size()); ++mask) {
    std::uint32_t canon = mask;
    for (const auto& p : perms) {
      std::uint32_t m = 0;
      for (std::size_t s = 0; s < slots.size(); ++s)
        if (mask >> s & 1u) m |= 1u << slot_of[p[slots[s].first]][p[slots[s].second]];
      canon = std::min(canon, m);
    }
    if (!seen.insert(canon).second) continue;
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (std::size_t s = 0; s < slots.size(); ++s)
      if (canon >> s & 1u) edges.emplace_back(slots[s].first, slots[s].second);
    if (connected(Graph(static_cast<std::size_t>(n), edges))) out.push_back(std::move(edges));
  }
  return out;
}

Verdict model_definition() {
  Verdict v;
  std::size_t models = 0;
  for (int n = 2; n <= 6; ++n) {
    for (const auto& edges : connected_graphs(n)) {
      Graph g(static_cast<std::size_t>(n), edges);
      for (VertexId s1 = 0; s1 < n; ++s1)
        for (VertexId g1 = 0; g1 < n; ++g1)
          for (VertexId s2 = 0; s2 < n; ++s2)
            for (VertexId g2 = 0; g2 < n; ++g2) {
              if (s1 == s2 || g1 == g2) continue;
              MapfInstance inst(g, {{0, s1, g1}, {1, s2, g2}});
              PathPlanner planner(inst);
              const std::vector<int> xi{*planner.shortest_cost(0), *planner.shortest_cost(1)};
              const int base = xi[0] + xi[1];
              auto oracle = brute_force_oracle(inst, base + 2);
              for (int delta = 0; delta <= 2; ++delta) {
                const int soc = base + delta;
                const bool solvable = oracle.sum_of_costs && *oracle.sum_of_costs <= soc;
                const Timestep mu = std::max(xi[0], xi[1]) + delta;
                std::vector<Mdd> diagrams{build_mdd(planner, 0, mu, xi[0] + delta),
                                          build_mdd(planner, 1, mu, xi[1] + delta)};
                for (ModelMode mode : {ModelMode::Complete, ModelMode::Incomplete}) {
                  BooleanModel model(diagrams, xi, ConflictSet{}, soc, mode);
                  const bool sat = model.solve() == sat::SatResult::Sat;
                  ++models;
                  const bool bad = mode == ModelMode::Complete ? sat != solvable : (solvable && !sat);
                  if (bad) {
                    std::ostringstream os;
                    os << (mode == ModelMode::Complete ? "complete" : "incomplete") << " model wrong on n=" << n
                       << " starts " << s1 << "," << s2 << " goals " << g1 << "," << g2 << " delta " << delta;
                    v.fail(os.str());
                  }
                  if (sat && mode == ModelMode::Complete) {
                    auto sol = model.extract_solution();
                    if (!well_formed(inst, sol) || !collision_free(sol) || independent_soc(inst, sol) > soc)
                      v.fail("complete model produced an invalid plan");
                  }
                }
              }
            }
    }
  }
  if (v.ok) v.detail = std::to_string(models) + " models checked";
  return v;
}

Verdict swap_infeasibility() {
  Verdict v;
  MapfInstance inst(make_graph(3, {{0, 1}, {1, 2}}), {{0, 0, 2}, {1, 2, 0}});
  for (Algorithm a : kAllAlgorithms) {
    SolverConfig cfg;
    cfg.algorithm = a;
    cfg.timeout_s = 1.0;
    const auto t0 = std::chrono::steady_clock::now();
    auto out = solve(inst, cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (out.status != SolveStatus::InfeasibleAtCap || secs > 1.0)
      v.fail(std::string(algorithm_name(a)) + ": " + std::string(status_name(out.status)) + " after " +
             std::to_string(secs) + " s");
  }
  if (v.ok) v.detail = "all five report infeasible within 1 s";
  return v;
}

Verdict harness_smoke(const std::filesystem::path& suite) {
  Verdict v;
  BenchConfig cfg;
  cfg.suite = suite;
  cfg.agent_counts = {4};
  cfg.per_count = 10;
  cfg.timeout_s = 128;
  auto records = run_benchmark(cfg);
  if (records.size() != 10 * std::size(kAllAlgorithms)) v.fail("expected 50 records, got " + std::to_string(records.size()));
  for (Algorithm a : kAllAlgorithms) {
    auto rate = success_rate(records, a, 4);
    if (!rate || *rate != 1.0) v.fail(std::string(algorithm_name(a)) + " success rate below 1");
  }
  const std::string csv = records_to_csv(records);
  try {
    if (records_from_csv(csv) != records) v.fail("CSV does not round-trip");
  } catch (const std::exception& e) {
    v.fail(std::string("CSV unreadable: ") + e.what());
  }
  const std::string cactus = cactus_csv(records, kAllAlgorithms);
  std::size_t lines = std::count(cactus.begin(), cactus.end(), '\n');
  if (cactus.rfind("algo,rank,runtime_s\n", 0) != 0 || lines != 1 + records.size()) v.fail("malformed cactus data");
  if (v.ok) v.detail = std::to_string(records.size()) + " runs, all solved";
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path suite = argc > 1 ? argv[1] : "tests/data/open8x8";
  const auto instances = random_suite();

  struct Criterion {
    const char* name;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria{
      {"1 oracle equivalence", [&] { return oracle_equivalence(instances); }},
      {"2 two-path sparse diagram", example_smdd},
      {"3 fixture optima", fixture_optima},
      {"4 sparsification", [&] { return sparsification(instances); }},
      {"5 model definition", model_definition},
      {"6 swap infeasibility", swap_infeasibility},
      {"7 harness smoke", [&] { return harness_smoke(suite); }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %s: %s (%.1f s)\n", v.ok ? "PASS" : "FAIL", c.name, v.detail.c_str(), secs);
    std::fflush(stdout);
    if (!v.ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
