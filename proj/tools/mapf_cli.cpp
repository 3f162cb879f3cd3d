#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mapf/mapf.h"

namespace {

constexpr int kExitError = 1;
constexpr int kExitParse = 2;

int report(mapf_status status) {
  std::cerr << "mapf: " << mapf_last_error() << '\n';
  return status == MAPF_ERR_PARSE ? kExitParse : kExitError;
}

struct SolveArgs {
  std::string map, scen, algo = "heuristic", out;
  size_t agents = 0;
  double timeout = 128.0;
};

int run_solve(const SolveArgs& args) {
  mapf_instance* instance = nullptr;
  if (auto st = mapf_instance_load(args.map.c_str(), args.scen.c_str(), args.agents, &instance); st != MAPF_OK)
    return report(st);
  mapf_result* result = nullptr;
  auto st = mapf_solve(instance, args.algo.c_str(), args.timeout, &result);
  if (st != MAPF_OK) {
    mapf_instance_free(instance);
    return report(st);
  }
  char* json = nullptr;
  st = mapf_result_to_json(instance, result, &json);
  if (st == MAPF_OK) {
    if (args.out.empty() || args.out == "-") {
      std::cout << json << '\n';
    } else {
      std::ofstream out(args.out);
      out << json << '\n';
      if (!out) {
        std::cerr << "mapf: cannot write " << args.out << '\n';
        st = MAPF_ERR_IO;
      }
    }
    std::fprintf(stderr, "%s: soc %d, %.3f s\n", args.algo.c_str(), mapf_result_sum_of_costs(result),
                 mapf_result_runtime(result));
  }
  mapf_string_free(json);
  mapf_result_free(result);
  mapf_instance_free(instance);
  if (st == MAPF_ERR_IO) return kExitError;
  return st == MAPF_OK ? 0 : report(st);
}

struct BenchArgs {
  std::string suite, algos = "cbs,mddsat,smtcbs,sparse,heuristic", agents = "2,4,8", csv, cactus;
  size_t per_count = 25, jobs = 0;
  double timeout = 128.0;
};

int run_bench(const BenchArgs& args) {
  size_t errors = 0;
  auto st = mapf_bench_run(args.suite.c_str(), args.algos.c_str(), args.agents.c_str(), args.per_count, args.timeout,
                           args.jobs, args.csv.c_str(), args.cactus.empty() ? nullptr : args.cactus.c_str(), &errors);
  if (st != MAPF_OK) return report(st);
  if (errors > 0) {
    std::cerr << "mapf: " << errors << " runs could not load their instance\n";
    return kExitParse;
  }
  return 0;
}

struct EncodeArgs {
  std::string map, scen, algo = "heuristic", cnf, varmap;
  size_t agents = 0;
  bool complete = false;
};

int run_encode(const EncodeArgs& args) {
  mapf_instance* instance = nullptr;
  if (auto st = mapf_instance_load(args.map.c_str(), args.scen.c_str(), args.agents, &instance); st != MAPF_OK)
    return report(st);
  auto st = mapf_export_model(instance, args.algo.c_str(), args.complete ? 1 : 0, args.cnf.c_str(),
                              args.varmap.c_str());
  mapf_instance_free(instance);
  return st == MAPF_OK ? 0 : report(st);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sum-of-costs optimal multi-agent path finding"};
  app.require_subcommand(1);
  auto algo_check = CLI::Validator(
      [](std::string& s) { return mapf_algorithm_known(s.c_str()) ? std::string() : "unknown algorithm " + s; },
      "cbs|mddsat|smtcbs|sparse|heuristic", "algorithm");
  auto algo_list_check = CLI::Validator(
      [](std::string& s) {
        std::stringstream ss(s);
        for (std::string item; std::getline(ss, item, ',');)
          if (!mapf_algorithm_known(item.c_str())) return "unknown algorithm " + item;
        return std::string();
      },
      "LIST", "algorithm list");

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one instance and print the solution as JSON");
  solve_cmd->add_option("--map", solve.map, ".map file")->required();
  solve_cmd->add_option("--scen", solve.scen, ".scen file")->required();
  solve_cmd->add_option("--agents", solve.agents, "use the first N scenario agents")->required();
  solve_cmd->add_option("--algo", solve.algo)->check(algo_check)->capture_default_str();
  solve_cmd->add_option("--timeout", solve.timeout, "seconds")->capture_default_str();
  solve_cmd->add_option("--out", solve.out, "output file, - for stdout");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run a suite directory of .map/.scen files");
  bench_cmd->add_option("--suite", bench.suite, "directory")->required();
  bench_cmd->add_option("--algos", bench.algos, "comma-separated")->check(algo_list_check)->capture_default_str();
  bench_cmd->add_option("--agents", bench.agents, "comma-separated agent counts")->capture_default_str();
  bench_cmd->add_option("--per-count", bench.per_count, "scenario files per agent count")->capture_default_str();
  bench_cmd->add_option("--timeout", bench.timeout, "seconds per run")->capture_default_str();
  bench_cmd->add_option("--csv", bench.csv, "output CSV")->required();
  bench_cmd->add_option("--cactus", bench.cactus, "sorted runtimes CSV");
  bench_cmd->add_option("--jobs", bench.jobs, "worker threads, 0 for all cores")->capture_default_str();

  EncodeArgs encode;
  auto* encode_cmd = app.add_subcommand("encode", "Write the first propositional model as DIMACS");
  encode_cmd->add_option("--map", encode.map)->required();
  encode_cmd->add_option("--scen", encode.scen)->required();
  encode_cmd->add_option("--agents", encode.agents)->required();
  encode_cmd->add_option("--algo", encode.algo)->check(algo_check)->capture_default_str();
  encode_cmd->add_flag("--complete", encode.complete, "include collision rules");
  encode_cmd->add_option("--cnf", encode.cnf)->required();
  encode_cmd->add_option("--varmap", encode.varmap)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  }

  if (*solve_cmd) return run_solve(solve);
  if (*bench_cmd) return run_bench(bench);
  return run_encode(encode);
}
