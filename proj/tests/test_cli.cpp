#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace ethrisk::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  args.insert(args.begin(), "ethrisk");
  std::ostringstream out, err;
  const int code = Main(args, out, err);
  return {code, out.str(), err.str()};
}

const std::string kScenarios = std::string(ETHRISK_SOURCE_DIR) + "/scenarios";

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ethrisk_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& content) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << content;
    return p.string();
  }

  fs::path dir_;
};

TEST_F(CliTest, ValidateBundledScenario) {
  const Result r = call({"validate", "--scenario", kScenarios + "/cyclist_following.json"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("ok: cyclist_following"), std::string::npos);
}

TEST_F(CliTest, ValidationFailuresExitTwo) {
  const std::string bad = write("bad.json", R"({"name": "x", "duration_s": -1})");
  const Result r = call({"validate", "--scenario", bad});
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_NE(r.err.find("scenario."), std::string::npos) << r.err;

  const std::string broken = write("broken.json", "{ nope");
  EXPECT_EQ(call({"validate", "--scenario", broken}).code, kExitValidation);
  EXPECT_EQ(call({"validate"}).code, kExitValidation);
  EXPECT_EQ(call({"run", "--scenario", kScenarios + "/head_on.json", "--mode", "greedy"}).code,
            kExitValidation);
  EXPECT_EQ(call({"run", "--scenario", kScenarios + "/head_on.json", "--policy", "teleport",
                  "--out", dir_.string()})
                .code,
            kExitValidation);
}

TEST_F(CliTest, MissingFilesAreRuntimeErrors) {
  EXPECT_EQ(call({"validate", "--scenario", (dir_ / "none.json").string()}).code, kExitRuntime);
  EXPECT_EQ(call({"metrics", "--logs", (dir_ / "nowhere").string()}).code, kExitRuntime);
}

TEST_F(CliTest, RunWritesLog) {
  const Result r = call({"run", "--scenario", kScenarios + "/head_on.json", "--policy",
                         "non_yielding", "--mode", "standard", "--seed", "4", "--out", dir_.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "head_on__non_yielding__standard__seed4.json"));
  EXPECT_NE(r.out.find("collision_vehicle"), std::string::npos) << r.out;
}

TEST_F(CliTest, ConfigFileAndOverrides) {
  const std::string cfg = write("cfg.json", R"({"mode": "selfish", "replay": {"enabled": true}})");
  Result r = call({"run", "--scenario", kScenarios + "/empty_road.json", "--config", cfg, "--out",
                   dir_.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "empty_road__lane_keep__selfish__seed0.json"));
  EXPECT_TRUE(fs::exists(dir_ / "empty_road__lane_keep__selfish__seed0.erpb"));

  r = call({"run", "--scenario", kScenarios + "/empty_road.json", "--config", cfg, "--mode",
            "ethical", "--out", dir_.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "empty_road__lane_keep__ethical__seed0.json"));

  const std::string bad = write("bad_cfg.json", R"({"mode": "reckless"})");
  EXPECT_EQ(call({"run", "--scenario", kScenarios + "/empty_road.json", "--config", bad, "--out",
                  dir_.string()})
                .code,
            kExitValidation);
}

TEST_F(CliTest, BatchThenMetrics) {
  const fs::path scen = dir_ / "scen";
  fs::create_directories(scen);
  fs::copy_file(kScenarios + "/head_on.json", scen / "head_on.json");
  const Result r = call({"batch", "--scenario-dir", scen.string(), "--seeds", "2", "--out",
                         (dir_ / "run").string(), "--jobs", "2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::size_t logs = 0;
  for (const auto& e : fs::directory_iterator(dir_ / "run" / "logs")) logs += e.path().extension() == ".json";
  EXPECT_GT(logs, 2u);
  EXPECT_EQ(logs % 2, 0u);
  for (const char* f : {"runs.csv", "summary.csv", "heatmap.csv", "worst_case.csv", "runs.json"}) {
    EXPECT_TRUE(fs::exists(dir_ / "run" / "metrics" / f)) << f;
  }

  const Result m = call({"metrics", "--logs", (dir_ / "run" / "logs").string(), "--format", "json"});
  ASSERT_EQ(m.code, kExitOk) << m.err;
  EXPECT_TRUE(fs::exists(dir_ / "run" / "logs" / "metrics" / "summary.json"));
  const Result again = call({"metrics", "--logs", (dir_ / "run" / "logs").string(), "--format", "json"});
  EXPECT_EQ(again.code, kExitOk) << again.err;
}

TEST_F(CliTest, EmptyLogDirectoryIsRuntimeError) {
  fs::create_directories(dir_ / "empty");
  EXPECT_EQ(call({"metrics", "--logs", (dir_ / "empty").string()}).code, kExitRuntime);
}

}  // namespace
}  // namespace ethrisk::cli
