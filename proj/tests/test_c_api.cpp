#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "mapf/mapf.h"

namespace {

const char* kMap = "type octile\nheight 2\nwidth 2\nmap\n..\n..\n";
const char* kScen = "version 1\n0\tm.map\t2\t2\t0\t0\t1\t1\t2\n0\tm.map\t2\t2\t1\t1\t0\t0\t2\n";

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST(CApi, SolveFromTextAndReadBack) {
  mapf_instance* inst = nullptr;
  ASSERT_EQ(mapf_instance_from_text(kMap, kScen, 2, &inst), MAPF_OK);
  EXPECT_EQ(mapf_instance_agent_count(inst), 2u);
  EXPECT_EQ(mapf_instance_vertex_count(inst), 4u);

  mapf_result* res = nullptr;
  ASSERT_EQ(mapf_solve(inst, "heuristic", 10.0, &res), MAPF_OK);
  EXPECT_EQ(mapf_result_outcome(res), MAPF_SOLVED);
  EXPECT_EQ(mapf_result_sum_of_costs(res), 4);
  EXPECT_EQ(mapf_result_makespan(res), 2);
  EXPECT_GE(mapf_result_sat_calls(res), 1u);

  size_t len = 0;
  ASSERT_EQ(mapf_result_path(res, 0, nullptr, 0, &len), MAPF_OK);
  std::vector<int> path(len);
  ASSERT_EQ(mapf_result_path(res, 0, path.data(), path.size(), &len), MAPF_OK);
  EXPECT_EQ(path.front(), 0);
  EXPECT_EQ(path.back(), 3);
  EXPECT_EQ(mapf_result_path(res, 5, nullptr, 0, &len), MAPF_ERR_INVALID_ARGUMENT);

  char* json = nullptr;
  ASSERT_EQ(mapf_result_to_json(inst, res, &json), MAPF_OK);
  auto doc = nlohmann::json::parse(json);
  mapf_string_free(json);
  EXPECT_EQ(doc["algorithm"], "heuristic");
  EXPECT_EQ(doc["status"], "solved");
  EXPECT_EQ(doc["soc"], 4);
  EXPECT_EQ(doc["makespan"], 2);
  EXPECT_EQ(doc["paths"].size(), 2u);
  for (const char* key : {"sat_calls", "conflicts", "smdd_nodes_per_iter", "runtime_s"})
    EXPECT_TRUE(doc["stats"].contains(key)) << key;

  mapf_result_free(res);
  mapf_instance_free(inst);
}

TEST(CApi, InfeasibleResultHasNoCost) {
  const char* map = "type octile\nheight 1\nwidth 3\nmap\n...\n";
  const char* scen = "version 1\n0\tm\t3\t1\t0\t0\t2\t0\t2\n0\tm\t3\t1\t2\t0\t0\t0\t2\n";
  mapf_instance* inst = nullptr;
  ASSERT_EQ(mapf_instance_from_text(map, scen, 2, &inst), MAPF_OK);
  mapf_result* res = nullptr;
  ASSERT_EQ(mapf_solve(inst, "cbs", 1.0, &res), MAPF_OK);
  EXPECT_EQ(mapf_result_outcome(res), MAPF_INFEASIBLE);
  EXPECT_EQ(mapf_result_sum_of_costs(res), -1);
  char* json = nullptr;
  ASSERT_EQ(mapf_result_to_json(inst, res, &json), MAPF_OK);
  auto doc = nlohmann::json::parse(json);
  EXPECT_TRUE(doc["soc"].is_null());
  EXPECT_EQ(doc["status"], "infeasible");
  mapf_string_free(json);
  mapf_result_free(res);
  mapf_instance_free(inst);
}

TEST(CApi, ErrorCodes) {
  mapf_instance* inst = nullptr;
  EXPECT_EQ(mapf_instance_from_text("type octile\nheight 1\nwidth 1\nmap\nx\n", kScen, 1, &inst), MAPF_ERR_PARSE);
  EXPECT_EQ(inst, nullptr);
  EXPECT_NE(std::string(mapf_last_error()), "");
  EXPECT_EQ(mapf_instance_from_text(kMap, "version 7\n", 0, &inst), MAPF_ERR_PARSE);
  EXPECT_EQ(mapf_instance_from_text(kMap, kScen, 3, &inst), MAPF_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(mapf_instance_from_text(nullptr, kScen, 1, &inst), MAPF_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(mapf_instance_load("/nonexistent.map", "/nonexistent.scen", 1, &inst), MAPF_ERR_IO);

  ASSERT_EQ(mapf_instance_from_text(kMap, kScen, 2, &inst), MAPF_OK);
  mapf_result* res = nullptr;
  EXPECT_EQ(mapf_solve(inst, "astar", 1.0, &res), MAPF_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(mapf_solve(inst, "cbs", 0.0, &res), MAPF_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(res, nullptr);
  mapf_instance_free(inst);
  EXPECT_TRUE(mapf_algorithm_known("sparse"));
  EXPECT_FALSE(mapf_algorithm_known("dfs"));
}

TEST(CApi, LoadFromFiles) {
  mapf_instance* inst = nullptr;
  ASSERT_EQ(mapf_instance_load("tests/data/open8x8/open8x8.map", "tests/data/open8x8/open8x8-03.scen", 4, &inst),
            MAPF_OK);
  mapf_result* res = nullptr;
  ASSERT_EQ(mapf_solve(inst, "mddsat", 30.0, &res), MAPF_OK);
  EXPECT_EQ(mapf_result_outcome(res), MAPF_SOLVED);
  char* json = nullptr;
  ASSERT_EQ(mapf_result_to_json(inst, res, &json), MAPF_OK);
  EXPECT_EQ(nlohmann::json::parse(json)["instance"], "open8x8.map/open8x8-03.scen/4");
  mapf_string_free(json);
  mapf_result_free(res);
  mapf_instance_free(inst);
}

TEST(CApi, ExportModel) {
  mapf_instance* inst = nullptr;
  ASSERT_EQ(mapf_instance_from_text(kMap, kScen, 2, &inst), MAPF_OK);
  auto dir = std::filesystem::temp_directory_path();
  auto cnf = dir / "mapf_c_api_model.cnf", varmap = dir / "mapf_c_api_model.json";
  ASSERT_EQ(mapf_export_model(inst, "smtcbs", 1, cnf.c_str(), varmap.c_str()), MAPF_OK);
  EXPECT_EQ(slurp(cnf).rfind("p cnf ", 0), 0u);
  auto doc = nlohmann::json::parse(slurp(varmap));
  EXPECT_FALSE(doc["variables"].empty());
  EXPECT_EQ(mapf_export_model(inst, "cbs", 1, cnf.c_str(), varmap.c_str()), MAPF_ERR_INVALID_ARGUMENT);
  std::filesystem::remove(cnf);
  std::filesystem::remove(varmap);
  mapf_instance_free(inst);
}

TEST(CApi, BenchWritesCsvAndCactus) {
  auto dir = std::filesystem::temp_directory_path();
  auto csv = dir / "mapf_c_api_bench.csv", cactus = dir / "mapf_c_api_cactus.csv";
  size_t errors = 99;
  ASSERT_EQ(mapf_bench_run("tests/data/open8x8", "cbs,heuristic", "2", 3, 30.0, 1, csv.c_str(), cactus.c_str(),
                           &errors),
            MAPF_OK);
  EXPECT_EQ(errors, 0u);
  const std::string text = slurp(csv);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 7);
  EXPECT_EQ(slurp(cactus).rfind("algo,rank,runtime_s\n", 0), 0u);
  EXPECT_EQ(mapf_bench_run("tests/data/open8x8", "cbs,bogus", "2", 1, 1.0, 1, csv.c_str(), nullptr, nullptr),
            MAPF_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(mapf_bench_run("tests/data/open8x8", "cbs", "2,x", 1, 1.0, 1, csv.c_str(), nullptr, nullptr),
            MAPF_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(mapf_bench_run("/nonexistent", "cbs", "2", 1, 1.0, 1, csv.c_str(), nullptr, nullptr), MAPF_ERR_IO);
  std::filesystem::remove(csv);
  std::filesystem::remove(cactus);
}
