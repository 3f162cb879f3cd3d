#include "mapf/mapf.h"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "mapf/bench.hpp"
#include "mapf/diagrams.hpp"
#include "mapf/encoding.hpp"
#include "mapf/solvers.hpp"

struct mapf_instance {
  mapf::MapfInstance instance;
  std::string id;
};

struct mapf_result {
  mapf::Algorithm algorithm;
  mapf::SolveOutcome outcome;
};

namespace {

thread_local std::string g_last_error;

mapf_status fail(mapf_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

// Maps exceptions thrown by the core onto status codes.
template <typename F>
mapf_status guarded(F&& body) {
  try {
    return body();
  } catch (const mapf::ParseError& e) {
    return fail(MAPF_ERR_PARSE, e.what());
  } catch (const mapf::ContractViolation& e) {
    return fail(MAPF_ERR_CONTRACT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(MAPF_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(MAPF_ERR_INTERNAL, e.what());
  }
}

std::optional<std::string> read_file(const char* path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::vector<std::string> split_list(const char* list) {
  std::vector<std::string> out;
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

mapf_status build(const std::string& map_text, const std::string& scen_text, size_t agents, std::string id,
                  mapf_instance** out) {
  auto graph = mapf::parse_map(map_text);
  auto entries = mapf::parse_scen(scen_text);
  if (agents > entries.size())
    return fail(MAPF_ERR_INVALID_ARGUMENT, "scenario has " + std::to_string(entries.size()) + " agents, " +
                                               std::to_string(agents) + " requested");
  *out = new mapf_instance{mapf::build_instance(graph, entries, agents), std::move(id)};
  return MAPF_OK;
}

}  // namespace

extern "C" {

const char* mapf_last_error(void) { return g_last_error.c_str(); }

int mapf_algorithm_known(const char* name) { return name && mapf::parse_algorithm(name).has_value(); }

mapf_status mapf_instance_load(const char* map_path, const char* scen_path, size_t agents, mapf_instance** out) {
  if (!map_path || !scen_path || !out) return fail(MAPF_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  auto map_text = read_file(map_path);
  if (!map_text) return fail(MAPF_ERR_IO, std::string("cannot read ") + map_path);
  auto scen_text = read_file(scen_path);
  if (!scen_text) return fail(MAPF_ERR_IO, std::string("cannot read ") + scen_path);
  return guarded([&] {
    std::string id = std::filesystem::path(map_path).filename().string() + "/" +
                     std::filesystem::path(scen_path).filename().string() + "/" + std::to_string(agents);
    return build(*map_text, *scen_text, agents, std::move(id), out);
  });
}

mapf_status mapf_instance_from_text(const char* map_text, const char* scen_text, size_t agents,
                                    mapf_instance** out) {
  if (!map_text || !scen_text || !out) return fail(MAPF_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { return build(map_text, scen_text, agents, "inline/" + std::to_string(agents), out); });
}

void mapf_instance_free(mapf_instance* instance) { delete instance; }

size_t mapf_instance_agent_count(const mapf_instance* instance) {
  return instance ? instance->instance.agent_count() : 0;
}

size_t mapf_instance_vertex_count(const mapf_instance* instance) {
  return instance ? instance->instance.graph().vertex_count() : 0;
}

mapf_status mapf_solve(const mapf_instance* instance, const char* algorithm, double timeout_s, mapf_result** out) {
  if (!instance || !algorithm || !out) return fail(MAPF_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  auto algo = mapf::parse_algorithm(algorithm);
  if (!algo) return fail(MAPF_ERR_INVALID_ARGUMENT, std::string("unknown algorithm '") + algorithm + "'");
  if (!(timeout_s > 0)) return fail(MAPF_ERR_INVALID_ARGUMENT, "timeout must be positive");
  return guarded([&] {
    mapf::SolverConfig config;
    config.algorithm = *algo;
    config.timeout_s = timeout_s;
    *out = new mapf_result{*algo, mapf::solve(instance->instance, config)};
    return MAPF_OK;
  });
}

void mapf_result_free(mapf_result* result) { delete result; }

mapf_outcome mapf_result_outcome(const mapf_result* result) {
  if (!result) return MAPF_TIMEOUT;
  switch (result->outcome.status) {
    case mapf::SolveStatus::Solved: return MAPF_SOLVED;
    case mapf::SolveStatus::Timeout: return MAPF_TIMEOUT;
    case mapf::SolveStatus::InfeasibleAtCap: return MAPF_INFEASIBLE;
  }
  return MAPF_TIMEOUT;
}

int mapf_result_sum_of_costs(const mapf_result* result) {
  return result && result->outcome.status == mapf::SolveStatus::Solved ? result->outcome.sum_of_costs : -1;
}

int mapf_result_makespan(const mapf_result* result) {
  return result && result->outcome.status == mapf::SolveStatus::Solved ? result->outcome.makespan : -1;
}

double mapf_result_runtime(const mapf_result* result) { return result ? result->outcome.stats.runtime_s : 0.0; }
size_t mapf_result_sat_calls(const mapf_result* result) { return result ? result->outcome.stats.sat_calls : 0; }
size_t mapf_result_conflicts(const mapf_result* result) { return result ? result->outcome.stats.conflicts : 0; }

mapf_status mapf_result_path(const mapf_result* result, size_t agent, int* buffer, size_t capacity,
                             size_t* length) {
  if (!result || !length) return fail(MAPF_ERR_INVALID_ARGUMENT, "null argument");
  const auto& solution = result->outcome.solution;
  if (agent >= solution.size()) return fail(MAPF_ERR_INVALID_ARGUMENT, "no path for agent " + std::to_string(agent));
  const auto& positions = solution[agent].positions;
  *length = positions.size();
  if (buffer && capacity >= positions.size()) std::copy(positions.begin(), positions.end(), buffer);
  return MAPF_OK;
}

mapf_status mapf_result_to_json(const mapf_instance* instance, const mapf_result* result, char** json) {
  if (!instance || !result || !json) return fail(MAPF_ERR_INVALID_ARGUMENT, "null argument");
  *json = nullptr;
  return guarded([&] {
    const auto& o = result->outcome;
    const bool solved = o.status == mapf::SolveStatus::Solved;
    nlohmann::json doc;
    doc["instance"] = instance->id;
    doc["algorithm"] = mapf::algorithm_name(result->algorithm);
    doc["status"] = mapf::status_name(o.status);
    doc["soc"] = solved ? nlohmann::json(o.sum_of_costs) : nlohmann::json(nullptr);
    doc["makespan"] = solved ? nlohmann::json(o.makespan) : nlohmann::json(nullptr);
    doc["paths"] = nlohmann::json::array();
    for (const auto& p : o.solution) doc["paths"].push_back(p.positions);
    doc["stats"] = {{"sat_calls", o.stats.sat_calls},
                    {"conflicts", o.stats.conflicts},
                    {"smdd_nodes_per_iter", o.stats.smdd_nodes_per_iter},
                    {"runtime_s", o.stats.runtime_s},
                    {"encoding_s", o.stats.encoding_s}};
    *json = dup_string(doc.dump(2));
    return MAPF_OK;
  });
}

mapf_status mapf_export_model(const mapf_instance* instance, const char* algorithm, int complete,
                              const char* cnf_path, const char* varmap_path) {
  if (!instance || !algorithm || !cnf_path || !varmap_path) return fail(MAPF_ERR_INVALID_ARGUMENT, "null argument");
  auto algo = mapf::parse_algorithm(algorithm);
  if (!algo || *algo == mapf::Algorithm::Cbs)
    return fail(MAPF_ERR_INVALID_ARGUMENT, std::string("no propositional model for '") + algorithm + "'");
  return guarded([&] {
    const auto& inst = instance->instance;
    mapf::PathPlanner planner(inst);
    std::vector<int> shortest;
    for (mapf::AgentId a = 0; a < static_cast<mapf::AgentId>(inst.agent_count()); ++a) {
      auto c = planner.shortest_cost(a);
      if (!c) return fail(MAPF_ERR_INVALID_ARGUMENT, "agent " + std::to_string(a) + " cannot reach its goal");
      shortest.push_back(*c);
    }
    const int soc = std::accumulate(shortest.begin(), shortest.end(), 0);
    const mapf::Timestep horizon = shortest.empty() ? 0 : *std::max_element(shortest.begin(), shortest.end());
    const bool sparse = *algo == mapf::Algorithm::SparseSmtCbs || *algo == mapf::Algorithm::HeuristicSmtCbs;
    std::vector<mapf::Mdd> diagrams;
    auto candidates = mapf::initial_candidates(inst);
    for (mapf::AgentId a = 0; a < static_cast<mapf::AgentId>(inst.agent_count()); ++a) {
      if (sparse)
        diagrams.push_back(mapf::build_smdd(inst, a, candidates->paths[a], horizon));
      else
        diagrams.push_back(mapf::build_mdd(planner, a, horizon, shortest[a]));
    }
    mapf::BooleanModel model(std::move(diagrams), shortest, mapf::ConflictSet{}, soc,
                             complete ? mapf::ModelMode::Complete : mapf::ModelMode::Incomplete);
    std::ofstream cnf(cnf_path);
    if (!cnf) return fail(MAPF_ERR_IO, std::string("cannot write ") + cnf_path);
    model.write_dimacs(cnf);
    std::ofstream varmap(varmap_path);
    if (!varmap) return fail(MAPF_ERR_IO, std::string("cannot write ") + varmap_path);
    varmap << model.variables().to_json() << '\n';
    return MAPF_OK;
  });
}

mapf_status mapf_bench_run(const char* suite_dir, const char* algorithms, const char* agent_counts,
                           size_t per_count, double timeout_s, size_t jobs, const char* csv_path,
                           const char* cactus_path, size_t* errors) {
  if (!suite_dir || !algorithms || !agent_counts || !csv_path) return fail(MAPF_ERR_INVALID_ARGUMENT, "null argument");
  if (!(timeout_s > 0)) return fail(MAPF_ERR_INVALID_ARGUMENT, "timeout must be positive");
  if (!std::filesystem::is_directory(suite_dir))
    return fail(MAPF_ERR_IO, std::string("no suite directory ") + suite_dir);
  return guarded([&] {
    mapf::BenchConfig config;
    config.suite = suite_dir;
    config.algorithms.clear();
    for (const auto& name : split_list(algorithms)) {
      auto algo = mapf::parse_algorithm(name);
      if (!algo) return fail(MAPF_ERR_INVALID_ARGUMENT, "unknown algorithm '" + name + "'");
      config.algorithms.push_back(*algo);
    }
    config.agent_counts.clear();
    for (const auto& item : split_list(agent_counts)) {
      int n = 0;
      auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), n);
      if (ec != std::errc() || ptr != item.data() + item.size() || n < 1)
        return fail(MAPF_ERR_INVALID_ARGUMENT, "bad agent count '" + item + "'");
      config.agent_counts.push_back(n);
    }
    config.per_count = per_count;
    config.timeout_s = timeout_s;
    config.jobs = jobs;
    auto records = mapf::run_benchmark(config);

    std::ofstream csv(csv_path);
    if (!csv) return fail(MAPF_ERR_IO, std::string("cannot write ") + csv_path);
    csv << mapf::records_to_csv(records);
    if (cactus_path) {
      std::ofstream cactus(cactus_path);
      if (!cactus) return fail(MAPF_ERR_IO, std::string("cannot write ") + cactus_path);
      cactus << mapf::cactus_csv(records, config.algorithms);
    }
    if (errors)
      *errors = static_cast<size_t>(std::count_if(records.begin(), records.end(), [](const auto& r) {
        return r.status == mapf::BenchStatus::Error;
      }));
    return MAPF_OK;
  });
}

void mapf_string_free(char* s) { std::free(s); }

}  // extern "C"
