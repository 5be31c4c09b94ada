// Copyright 2026 The qrem Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// End-to-end runs of the qrem binary.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("qrem_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    write("run.json", json{{"name", "cli"},
                           {"n", 2},
                           {"channel", {{"kind", "nonlinear"}, {"n", 2}, {"flip_rates", {{0.05, 0.05}, {0.05, 0.05}}}, {"kappa", 0.2}}},
                           {"train_count", 200},
                           {"test_count", 40},
                           {"training", {{"hidden_layers", 2}, {"epochs", 10}}}}
                          .dump());
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args, const std::string& env = "env -u QREM_SEED") const {
    const std::string cmd = "cd '" + dir_.string() + "' && " + env + " '" + QREM_CLI_PATH + "' " + args +
                            " > stdout.txt 2> stderr.txt";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  void write(const std::string& name, const std::string& text) const { std::ofstream(dir_ / name) << text; }
  std::string read(const std::string& name) const {
    std::ifstream in(dir_ / name);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }
  bool exists(const std::string& name) const { return fs::exists(dir_ / name); }

  fs::path dir_;
};

TEST_F(Cli, StepwisePipeline) {
  ASSERT_EQ(run("--config run.json --out o gen-data --test-count 40"), 0) << read("stderr.txt");
  EXPECT_TRUE(exists("o/train.jsonl"));
  EXPECT_TRUE(exists("o/test.jsonl"));
  ASSERT_EQ(run("--config run.json --out o calibrate"), 0) << read("stderr.txt");
  ASSERT_EQ(run("--config run.json --out o train --data o/train.jsonl --epochs 5"), 0) << read("stderr.txt");
  EXPECT_EQ(json::parse(read("o/model.json")).at("layer_sizes"), json({4, 20, 20, 4}));
  ASSERT_EQ(run("--config run.json --out o cross-validate --data o/train.jsonl --candidates 1,2 --folds 4"), 0)
      << read("stderr.txt");
  EXPECT_EQ(json::parse(read("o/cv.json")).at("fold_sizes"), json({50, 50, 50, 50}));
  ASSERT_EQ(run("--out o mitigate --response o/response.json --data o/test.jsonl"), 0) << read("stderr.txt");
  std::istringstream lines(read("o/mitigated.jsonl"));
  int count = 0;
  for (std::string line; std::getline(lines, line);) ++count;
  EXPECT_EQ(count, 40);
  ASSERT_EQ(run("--out o evaluate --data o/test.jsonl --model o/model.json --response o/response.json"), 0)
      << read("stderr.txt");
  EXPECT_TRUE(json::parse(read("o/report.json")).contains("improvement_ratio"));
}

TEST_F(Cli, MitigateCountsFile) {
  write("counts.json", R"({"n": 1, "experiments": [{"angles": [0.0], "counts": {"0": 90, "1": 10}},
                                                   {"angles": [3.141592653589793], "counts": {"0": 10, "1": 90}}]})");
  ASSERT_EQ(run("--out o calibrate --counts counts.json"), 0) << read("stderr.txt");
  ASSERT_EQ(run("--out o mitigate --response o/response.json --counts counts.json"), 0) << read("stderr.txt");
  std::istringstream lines(read("o/mitigated.jsonl"));
  std::string first;
  std::getline(lines, first);
  const auto m = json::parse(first).at("mitigated");
  EXPECT_NEAR(m[0].get<double>(), 1.0, 1e-9);
}

TEST_F(Cli, BenchmarkIsByteIdentical) {
  ASSERT_EQ(run("--config run.json --seed 7 --out a benchmark"), 0) << read("stderr.txt");
  ASSERT_EQ(run("--config run.json --seed 7 --out b benchmark"), 0) << read("stderr.txt");
  EXPECT_EQ(read("a/report.json"), read("b/report.json"));
  EXPECT_EQ(read("a/report.csv"), read("b/report.csv"));
  EXPECT_TRUE(exists("a/timings.json"));
}

TEST_F(Cli, SeedFallsBackToEnvironment) {
  ASSERT_EQ(run("--config run.json --out e gen-data", "QREM_SEED=5"), 0);
  ASSERT_EQ(run("--config run.json --seed 5 --out f gen-data"), 0);
  ASSERT_EQ(run("--config run.json --out g gen-data", "QREM_SEED=6"), 0);
  ASSERT_EQ(run("--config run.json --seed 5 --out h gen-data", "QREM_SEED=6"), 0);
  EXPECT_EQ(read("e/data.jsonl"), read("f/data.jsonl"));
  EXPECT_NE(read("e/data.jsonl"), read("g/data.jsonl"));
  EXPECT_EQ(read("h/data.jsonl"), read("f/data.jsonl"));
  EXPECT_EQ(run("--config run.json --out i gen-data", "QREM_SEED=abc"), 1);
}

TEST_F(Cli, SubsampleDriftAndTransfer) {
  json sub = json::parse(read("run.json"));
  sub["mode"] = "subsample";
  write("sub.json", sub.dump());
  ASSERT_EQ(run("--config sub.json --out s benchmark"), 0) << read("stderr.txt");
  EXPECT_EQ(json::parse(read("s/report_reduced.json")).at("train_count"), 100);

  json drift = json::parse(read("run.json"));
  drift["channel"]["kind"] = "drifting";
  drift["channel"]["drift"] = {{"param", "eps10"}, {"shape", "ramp"}, {"rate", 0.002}};
  drift["mode"] = "drift";
  write("drift.json", drift.dump());
  ASSERT_EQ(run("--config drift.json --out d drift --horizon 3"), 0) << read("stderr.txt");
  EXPECT_TRUE(exists("d/drift_t3.csv"));
  EXPECT_TRUE(exists("d/drift_long.csv"));

  json target = json::parse(read("run.json"));
  target["channel"]["kappa"] = 0.25;
  write("target.json", target.dump());
  ASSERT_EQ(run("--config run.json --out t transfer --target target.json"), 0) << read("stderr.txt");
  EXPECT_TRUE(json::parse(read("t/report.json")).at("channel").contains("target"));
}

TEST_F(Cli, PresetBenchmarkAcceptsOverridesFile) {
  write("quick.json", R"({"preset": "paper-a-n2", "train_count": 100, "test_count": 20, "training": {"epochs": 2}})");
  ASSERT_EQ(run("--config quick.json --out q benchmark"), 0) << read("stderr.txt");
  EXPECT_EQ(json::parse(read("q/report.json")).at("train_count"), 100);
}

TEST_F(Cli, ValidationErrorsExitOne) {
  EXPECT_EQ(run(""), 1);
  EXPECT_EQ(run("frobnicate"), 1);
  EXPECT_EQ(run("train"), 1);
  EXPECT_EQ(run("--config missing.json benchmark"), 1);
  write("bad.json", R"({"n": 2, "channel": {"kind": "linear", "n": 2, "lambda": [1, 0, 0, 1]}})");
  EXPECT_EQ(run("--config bad.json benchmark"), 1);
  EXPECT_EQ(run("--config run.json mitigate --data x.jsonl"), 1);
  EXPECT_EQ(run("--help"), 0);
}

TEST_F(Cli, NumericalFailureExitsTwo) {
  ASSERT_EQ(run("--config run.json --out o gen-data"), 0);
  EXPECT_EQ(run("--config run.json --out o train --data o/data.jsonl --lr 1e300 --epochs 50"), 2);
  EXPECT_NE(read("stderr.txt").find("numerical"), std::string::npos);
}

}  // namespace
