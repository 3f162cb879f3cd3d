#include "mapf/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <fstream>
#include <sstream>
#include <thread>

namespace mapf {

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct Job {
  std::size_t scen_index;
  int agents;
  Algorithm algorithm;
};

struct LoadedScen {
  std::string scen_name;
  std::string map_name;
  std::optional<Graph> graph;
  std::vector<ScenEntry> entries;
  std::string error;
};

LoadedScen load(const std::filesystem::path& scen_path) {
  LoadedScen out;
  out.scen_name = scen_path.filename().string();
  out.map_name = scen_path.stem().string() + ".map";
  try {
    out.entries = parse_scen(read_file(scen_path));
    auto map_path = scen_path.parent_path() / out.map_name;
    if (!out.entries.empty()) {
      auto named = scen_path.parent_path() / std::filesystem::path(out.entries.front().map_name).filename();
      if (std::filesystem::exists(named)) map_path = named;
    }
    out.map_name = map_path.filename().string();
    out.graph = parse_map(read_file(map_path));
  } catch (const std::exception& e) {
    out.error = e.what();
    out.graph.reset();
  }
  return out;
}

BenchRecord run_one(const LoadedScen& scen, int agents, Algorithm algorithm, double timeout_s) {
  BenchRecord r;
  r.map = scen.map_name;
  r.scen = scen.scen_name;
  r.agents = agents;
  r.algorithm = algorithm;
  if (!scen.graph || agents < 0 || static_cast<std::size_t>(agents) > scen.entries.size()) return r;

  MapfInstance instance;
  try {
    instance = build_instance(*scen.graph, scen.entries, static_cast<std::size_t>(agents));
  } catch (const std::exception&) {
    return r;
  }
  SolverConfig config;
  config.algorithm = algorithm;
  config.timeout_s = timeout_s;
  const auto t0 = std::chrono::steady_clock::now();
  SolveOutcome outcome = solve(instance, config);
  r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.sat_calls = outcome.stats.sat_calls;
  r.conflicts = outcome.stats.conflicts;
  switch (outcome.status) {
    case SolveStatus::Solved:
      r.status = BenchStatus::Solved;
      r.sum_of_costs = outcome.sum_of_costs;
      break;
    case SolveStatus::Timeout: r.status = BenchStatus::Timeout; break;
    case SolveStatus::InfeasibleAtCap: r.status = BenchStatus::Infeasible; break;
  }
  // Finishing after the wall-clock limit is a timeout.
  if (r.status == BenchStatus::Solved && r.runtime_s > timeout_s) {
    r.status = BenchStatus::Timeout;
    r.sum_of_costs.reset();
  }
  return r;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

template <typename T>
T parse_field(const std::string& s, std::size_t line) {
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError("bad numeric CSV field '" + s + "'", line);
  return value;
}

}  // namespace

std::string_view bench_status_name(BenchStatus s) {
  switch (s) {
    case BenchStatus::Solved: return "solved";
    case BenchStatus::Timeout: return "timeout";
    case BenchStatus::Infeasible: return "infeasible";
    case BenchStatus::Error: return "error";
  }
  return "error";
}

std::optional<BenchStatus> parse_bench_status(std::string_view s) {
  for (auto st : {BenchStatus::Solved, BenchStatus::Timeout, BenchStatus::Infeasible, BenchStatus::Error})
    if (bench_status_name(st) == s) return st;
  return std::nullopt;
}

std::vector<BenchRecord> run_benchmark(const BenchConfig& config) {
  std::vector<std::filesystem::path> scen_files;
  if (std::filesystem::is_directory(config.suite))
    for (const auto& entry : std::filesystem::directory_iterator(config.suite))
      if (entry.is_regular_file() && entry.path().extension() == ".scen") scen_files.push_back(entry.path());
  std::sort(scen_files.begin(), scen_files.end());
  if (scen_files.size() > config.per_count) scen_files.resize(config.per_count);

  std::vector<LoadedScen> scens;
  for (const auto& p : scen_files) scens.push_back(load(p));

  std::vector<Job> jobs;
  for (int n : config.agent_counts)
    for (std::size_t s = 0; s < scens.size(); ++s)
      for (Algorithm a : config.algorithms) jobs.push_back({s, n, a});

  std::vector<BenchRecord> records(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();)
      records[i] = run_one(scens[jobs[i].scen_index], jobs[i].agents, jobs[i].algorithm, config.timeout_s);
  };
  std::size_t workers = config.jobs ? config.jobs : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(jobs.size(), 1));
  std::vector<std::jthread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  pool.clear();
  return records;
}

std::optional<double> success_rate(std::span<const BenchRecord> records, Algorithm algorithm, int agents) {
  std::size_t total = 0, solved = 0;
  for (const auto& r : records) {
    if (r.algorithm != algorithm || r.agents != agents) continue;
    ++total;
    if (r.status == BenchStatus::Solved) ++solved;
  }
  if (total == 0) return std::nullopt;
  return static_cast<double>(solved) / static_cast<double>(total);
}

std::vector<double> sorted_runtimes(std::span<const BenchRecord> records, Algorithm algorithm) {
  std::vector<double> out;
  for (const auto& r : records)
    if (r.algorithm == algorithm && r.status == BenchStatus::Solved) out.push_back(r.runtime_s);
  std::sort(out.begin(), out.end());
  return out;
}

std::string records_to_csv(std::span<const BenchRecord> records) {
  std::string out = "map,scen,agents,algo,status,runtime_s,soc,sat_calls,conflicts\n";
  for (const auto& r : records) {
    out += csv_field(r.map) + ',' + csv_field(r.scen) + ',' + std::to_string(r.agents) + ',' +
           std::string(algorithm_name(r.algorithm)) + ',' + std::string(bench_status_name(r.status)) + ',' +
           format_double(r.runtime_s) + ',' + (r.sum_of_costs ? std::to_string(*r.sum_of_costs) : "") + ',' +
           std::to_string(r.sat_calls) + ',' + std::to_string(r.conflicts) + '\n';
  }
  return out;
}

std::vector<BenchRecord> records_from_csv(std::string_view text) {
  std::vector<BenchRecord> out;
  std::size_t lineno = 0, pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (lineno == 1 || line.empty()) continue;
    auto f = split_csv_line(line);
    if (f.size() != 9) throw ParseError("expected 9 CSV fields, found " + std::to_string(f.size()), lineno);
    BenchRecord r;
    r.map = f[0];
    r.scen = f[1];
    r.agents = parse_field<int>(f[2], lineno);
    auto algo = parse_algorithm(f[3]);
    if (!algo) throw ParseError("unknown algorithm '" + f[3] + "'", lineno);
    r.algorithm = *algo;
    auto status = parse_bench_status(f[4]);
    if (!status) throw ParseError("unknown status '" + f[4] + "'", lineno);
    r.status = *status;
    r.runtime_s = parse_field<double>(f[5], lineno);
    if (!f[6].empty()) r.sum_of_costs = parse_field<int>(f[6], lineno);
    r.sat_calls = parse_field<std::size_t>(f[7], lineno);
    r.conflicts = parse_field<std::size_t>(f[8], lineno);
    out.push_back(std::move(r));
  }
  return out;
}

std::string cactus_csv(std::span<const BenchRecord> records, std::span<const Algorithm> algorithms) {
  std::string out = "algo,rank,runtime_s\n";
  for (Algorithm a : algorithms) {
    auto times = sorted_runtimes(records, a);
    for (std::size_t i = 0; i < times.size(); ++i)
      out += std::string(algorithm_name(a)) + ',' + std::to_string(i + 1) + ',' + format_double(times[i]) + '\n';
  }
  return out;
}

}  // namespace mapf
