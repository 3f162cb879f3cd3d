#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mapf/solvers.hpp"

namespace mapf {

enum class BenchStatus { Solved, Timeout, Infeasible, Error };
std::string_view bench_status_name(BenchStatus s);
std::optional<BenchStatus> parse_bench_status(std::string_view s);

struct BenchRecord {
  std::string map;
  std::string scen;
  int agents = 0;
  Algorithm algorithm = Algorithm::HeuristicSmtCbs;
  BenchStatus status = BenchStatus::Error;
  double runtime_s = 0.0;
  std::optional<int> sum_of_costs;  // present iff solved
  std::size_t sat_calls = 0;
  std::size_t conflicts = 0;

  friend bool operator==(const BenchRecord&, const BenchRecord&) = default;
};

struct BenchConfig {
  std::filesystem::path suite;
  std::vector<Algorithm> algorithms{std::begin(kAllAlgorithms), std::end(kAllAlgorithms)};
  std::vector<int> agent_counts{2, 4, 8};
  std::size_t per_count = 25;  // scenario files used per agent count
  double timeout_s = 128.0;
  std::size_t jobs = 0;  // 0: hardware concurrency
};

// Runs every (agent count, scenario, algorithm) triple found in the suite
// directory: each .scen file is one instance and names its .map. Records come
// back in that nesting order regardless of worker scheduling. Unreadable or
// malformed inputs become Error records.
std::vector<BenchRecord> run_benchmark(const BenchConfig& config);

// nullopt for an empty group.
std::optional<double> success_rate(std::span<const BenchRecord> records, Algorithm algorithm, int agents);
// Runtimes of solved records, ascending.
std::vector<double> sorted_runtimes(std::span<const BenchRecord> records, Algorithm algorithm);

// Header: map,scen,agents,algo,status,runtime_s,soc,sat_calls,conflicts
std::string records_to_csv(std::span<const BenchRecord> records);
std::vector<BenchRecord> records_from_csv(std::string_view text);

// algo,rank,runtime_s: the rank-th fastest solved run of each algorithm.
std::string cactus_csv(std::span<const BenchRecord> records, std::span<const Algorithm> algorithms);

}  // namespace mapf
