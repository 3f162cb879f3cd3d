#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "mapf/bench.hpp"
#include "support.hpp"

using namespace mapf;
using namespace mapf::testing;

namespace {

const std::filesystem::path kSuite = "tests/data/open8x8";

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("mapf_bench_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

void write(const std::filesystem::path& p, const std::string& text) { std::ofstream(p) << text; }

BenchRecord record(Algorithm a, int agents, BenchStatus s, double runtime) {
  BenchRecord r;
  r.map = "m.map";
  r.scen = "m.scen";
  r.agents = agents;
  r.algorithm = a;
  r.status = s;
  r.runtime_s = runtime;
  if (s == BenchStatus::Solved) r.sum_of_costs = 10;
  return r;
}

}  // namespace

TEST(RunBenchmark, OneRecordPerRunInNestingOrder) {
  BenchConfig cfg;
  cfg.suite = kSuite;
  cfg.algorithms = {Algorithm::Cbs, Algorithm::HeuristicSmtCbs};
  cfg.agent_counts = {2, 3};
  cfg.per_count = 2;
  cfg.timeout_s = 30;
  cfg.jobs = 3;
  auto records = run_benchmark(cfg);
  ASSERT_EQ(records.size(), 8u);
  EXPECT_EQ(records[0].agents, 2);
  EXPECT_EQ(records[0].scen, "open8x8-00.scen");
  EXPECT_EQ(records[0].map, "open8x8.map");
  EXPECT_EQ(records[1].algorithm, Algorithm::HeuristicSmtCbs);
  EXPECT_EQ(records[2].scen, "open8x8-01.scen");
  EXPECT_EQ(records[4].agents, 3);
  for (const auto& r : records) {
    EXPECT_EQ(r.status, BenchStatus::Solved);
    EXPECT_TRUE(r.sum_of_costs);
    EXPECT_LE(r.runtime_s, cfg.timeout_s);
  }
  // Both algorithms are optimal.
  for (std::size_t i = 0; i < records.size(); i += 2) EXPECT_EQ(records[i].sum_of_costs, records[i + 1].sum_of_costs);
}

TEST(RunBenchmark, MissingOrMalformedFilesBecomeErrorRecords) {
  TempDir dir;
  write(dir.path() / "a.scen", "version 1\n0\tnowhere.map\t8\t8\t0\t0\t1\t1\t2\n");
  write(dir.path() / "b.map", "type octile\nheight 1\nwidth 2\nmap\n.?\n");
  write(dir.path() / "b.scen", "version 1\n0\tb.map\t2\t1\t0\t0\t1\t0\t1\n");
  write(dir.path() / "c.map", "type octile\nheight 1\nwidth 2\nmap\n..\n");
  write(dir.path() / "c.scen", "version 1\n0\tc.map\t2\t1\t0\t0\t1\t0\t1\n");
  BenchConfig cfg;
  cfg.suite = dir.path();
  cfg.algorithms = {Algorithm::MddSat};
  cfg.agent_counts = {1, 2};
  cfg.timeout_s = 5;
  auto records = run_benchmark(cfg);
  ASSERT_EQ(records.size(), 6u);
  EXPECT_EQ(records[0].status, BenchStatus::Error);
  EXPECT_EQ(records[1].status, BenchStatus::Error);
  EXPECT_EQ(records[2].status, BenchStatus::Solved);
  EXPECT_EQ(records[2].sum_of_costs, 1);
  // Only one agent in c.scen.
  EXPECT_EQ(records[5].status, BenchStatus::Error);
  EXPECT_FALSE(records[5].sum_of_costs);
}

TEST(RunBenchmark, TinyTimeoutOnLargeInstance) {
  TempDir dir;
  std::mt19937 rng(3);
  const int side = 24;
  std::vector<bool> blocked(side * side, false);
  write(dir.path() / "big.map", grid_map_text(side, side, blocked));
  std::vector<int> cells(side * side);
  std::iota(cells.begin(), cells.end(), 0);
  auto starts = cells, goals = cells;
  std::shuffle(starts.begin(), starts.end(), rng);
  std::shuffle(goals.begin(), goals.end(), rng);
  std::string scen = "version 1\n";
  for (int i = 0; i < 60; ++i)
    scen += "0\tbig.map\t24\t24\t" + std::to_string(starts[i] % side) + "\t" + std::to_string(starts[i] / side) +
            "\t" + std::to_string(goals[i] % side) + "\t" + std::to_string(goals[i] / side) + "\t0\n";
  write(dir.path() / "big.scen", scen);
  BenchConfig cfg;
  cfg.suite = dir.path();
  cfg.algorithms = {Algorithm::SmtCbs};
  cfg.agent_counts = {60};
  cfg.timeout_s = 0.001;
  auto records = run_benchmark(cfg);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].status, BenchStatus::Timeout);
  EXPECT_FALSE(records[0].sum_of_costs);
}

TEST(SuccessRate, Ratios) {
  std::vector<BenchRecord> rs{record(Algorithm::Cbs, 4, BenchStatus::Solved, 1), record(Algorithm::Cbs, 4, BenchStatus::Solved, 2),
                              record(Algorithm::Cbs, 4, BenchStatus::Solved, 3), record(Algorithm::Cbs, 4, BenchStatus::Timeout, 128)};
  EXPECT_DOUBLE_EQ(*success_rate(rs, Algorithm::Cbs, 4), 0.75);
  EXPECT_FALSE(success_rate(rs, Algorithm::Cbs, 8));
  EXPECT_FALSE(success_rate(rs, Algorithm::MddSat, 4));
  rs.push_back(record(Algorithm::MddSat, 8, BenchStatus::Error, 0));
  EXPECT_DOUBLE_EQ(*success_rate(rs, Algorithm::MddSat, 8), 0.0);
}

TEST(SortedRuntimes, SolvedOnlyAscending) {
  std::vector<BenchRecord> rs{record(Algorithm::Cbs, 4, BenchStatus::Solved, 3), record(Algorithm::Cbs, 4, BenchStatus::Timeout, 128),
                              record(Algorithm::Cbs, 2, BenchStatus::Solved, 1), record(Algorithm::SmtCbs, 2, BenchStatus::Solved, 0.5),
                              record(Algorithm::Cbs, 4, BenchStatus::Solved, 2)};
  EXPECT_EQ(sorted_runtimes(rs, Algorithm::Cbs), (std::vector<double>{1, 2, 3}));
  EXPECT_TRUE(sorted_runtimes(rs, Algorithm::MddSat).empty());
}

TEST(Csv, RoundTripIsExact) {
  std::vector<BenchRecord> rs{record(Algorithm::Cbs, 4, BenchStatus::Solved, 0.1 + 0.2),
                              record(Algorithm::SparseSmtCbs, 8, BenchStatus::Timeout, 128.00000000001),
                              record(Algorithm::HeuristicSmtCbs, 2, BenchStatus::Infeasible, 1e-7),
                              record(Algorithm::MddSat, 2, BenchStatus::Error, 0)};
  rs[0].sat_calls = 17;
  rs[1].conflicts = 123456789;
  rs[2].map = "odd,\"name\".map";
  const std::string csv = records_to_csv(rs);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "map,scen,agents,algo,status,runtime_s,soc,sat_calls,conflicts");
  EXPECT_EQ(records_from_csv(csv), rs);
}

TEST(Csv, MalformedRowsRejected) {
  const std::string header = "map,scen,agents,algo,status,runtime_s,soc,sat_calls,conflicts\n";
  EXPECT_THROW(records_from_csv(header + "m,s,4,cbs,solved,1.0,5,0\n"), ParseError);
  EXPECT_THROW(records_from_csv(header + "m,s,4,dfs,solved,1.0,5,0,0\n"), ParseError);
  EXPECT_THROW(records_from_csv(header + "m,s,4,cbs,done,1.0,5,0,0\n"), ParseError);
  EXPECT_THROW(records_from_csv(header + "m,s,x,cbs,solved,1.0,5,0,0\n"), ParseError);
  EXPECT_TRUE(records_from_csv(header).empty());
}

TEST(Cactus, RanksPerAlgorithm) {
  std::vector<BenchRecord> rs{record(Algorithm::Cbs, 4, BenchStatus::Solved, 3), record(Algorithm::Cbs, 4, BenchStatus::Solved, 1),
                              record(Algorithm::SmtCbs, 4, BenchStatus::Timeout, 128)};
  const std::vector<Algorithm> algos{Algorithm::Cbs, Algorithm::SmtCbs};
  EXPECT_EQ(cactus_csv(rs, algos), "algo,rank,runtime_s\ncbs,1,1\ncbs,2,3\n");
}
