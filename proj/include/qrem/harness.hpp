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

#ifndef QREM_HARNESS_HPP_
#define QREM_HARNESS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qrem/channel.hpp"
#include "qrem/dataset.hpp"
#include "qrem/exec.hpp"
#include "qrem/li.hpp"
#include "qrem/nn.hpp"
#include "qrem/report.hpp"
#include "qrem/sampler.hpp"

namespace qrem {

enum class RunMode { kStandard, kDrift, kSubsample, kTransfer };
std::string to_string(RunMode mode);

struct RunConfig {
  std::string name = "custom";
  int num_qubits = 2;
  NoiseChannel channel;
  std::size_t train_count = 1175;
  std::size_t test_count = 200;
  std::optional<int> shots = kDefaultShots;
  std::optional<int> li_shots = kDefaultShots;
  TrainingConfig training;
  std::uint64_t seed = 1;
  RunMode mode = RunMode::kStandard;
  double subsample_fraction = 0.5;
  int drift_horizon = 10;

  void validate() const;
};

// Config file schema (all keys optional when "preset" is given):
// {"preset": "paper-a-n2", "name", "n", "channel": {...}, "train_count",
//  "test_count", "shots": int | "exact", "li_shots": int | "exact",
//  "training": {...}, "seed", "mode": "standard" | "drift" | "subsample" |
//  "transfer", "subsample_fraction", "drift_horizon"}
nlohmann::json run_config_to_json(const RunConfig& c);
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);
std::string config_fingerprint(const RunConfig& c);

// Named presets paper-{a,b}-n{2..5}: dataset sizes, hidden-layer counts,
// widths and learning rates for device types a and b at n = 2..5, all on a
// synthetic nonlinear channel (e01 = e10 = 0.05, kappa = 0.2).
std::vector<std::string> preset_names();
RunConfig preset(const std::string& name);

// Seed actually used for NN training under a run seed.
TrainingConfig effective_training(const RunConfig& c);

// Unmitigated, LI and NN rows plus ratios for one test set. Metadata fields
// (label, channel, counts, fingerprints) are left for the caller.
BenchmarkReport evaluate(const Dataset& test, const LiSolver& li, const MlpModel& model,
                         Exec exec = Exec::kParallel);

// Generate train + test from the channel, calibrate LI, train the NN,
// evaluate all three methods on the test set.
BenchmarkReport run_standard(const RunConfig& config, Exec exec = Exec::kParallel);

// Train and calibrate once against drift_at(channel, 0), then evaluate on a
// fresh test set from drift_at(channel, t) for t = 1..horizon.
std::vector<BenchmarkReport> run_drift(const RunConfig& config, int horizon,
                                       Exec exec = Exec::kParallel);

struct SubsampleReport {
  BenchmarkReport full;
  BenchmarkReport reduced;
};

// Same test set and LI calibration; the NN is trained on the full training
// set and on a ceil(fraction * N) subsample.
SubsampleReport run_subsample(const RunConfig& config, double fraction,
                              Exec exec = Exec::kParallel);

// NN trained and LI calibrated on `source`'s channel, both evaluated on a
// test set drawn from `target`'s channel.
BenchmarkReport run_transfer(const RunConfig& source, const RunConfig& target,
                             Exec exec = Exec::kParallel);

}  // namespace qrem

#endif  // QREM_HARNESS_HPP_
