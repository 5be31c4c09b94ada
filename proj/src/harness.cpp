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

#include "qrem/harness.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <fstream>

#include "qrem/error.hpp"
#include "qrem/rng.hpp"

namespace qrem {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

json shots_json(const std::optional<int>& s) { return s ? json(*s) : json("exact"); }

std::optional<int> shots_from(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() != "exact") throw ValidationError("shots must be an integer or \"exact\"");
    return std::nullopt;
  }
  return j.get<int>();
}

RunMode mode_from_string(const std::string& s) {
  for (RunMode m : {RunMode::kStandard, RunMode::kDrift, RunMode::kSubsample, RunMode::kTransfer}) {
    if (to_string(m) == s) return m;
  }
  throw ValidationError("unknown mode '" + s + "'");
}

struct PresetRow {
  const char* name;
  int n;
  std::size_t train;
  int layers;
  int width;
  double lr;
};

constexpr std::array<PresetRow, 8> kPresets = {{
    {"paper-a-n2", 2, 1175, 7, 20, 1e-3},
    {"paper-a-n3", 3, 3472, 4, 40, 1e-3},
    {"paper-a-n4", 4, 9700, 8, 80, 5e-5},
    {"paper-a-n5", 5, 9700, 5, 160, 5e-5},
    {"paper-b-n2", 2, 1800, 5, 20, 1e-3},
    {"paper-b-n3", 3, 3800, 2, 40, 1e-3},
    {"paper-b-n4", 4, 7800, 7, 80, 5e-5},
    {"paper-b-n5", 5, 9850, 5, 160, 5e-5},
}};

// Flattened per-record metric values, [record][method][metric].
using RecordMetrics = std::array<std::array<double, 3>, 3>;

void fill_metadata(BenchmarkReport& r, const RunConfig& c, const Dataset& train,
                   const Dataset& test, json channel, const std::string& label) {
  r.num_qubits = c.num_qubits;
  r.label = label;
  r.channel = std::move(channel);
  r.train_count = train.size();
  r.test_count = test.size();
  r.config_fingerprint = config_fingerprint(c);
  r.train_fingerprint = fingerprint(train);
}

MlpModel train_model(const TrainingConfig& tc, int num_qubits, const Dataset& train_set) {
  return train(init_model(num_qubits, tc), train_set, tc).model;
}

struct Fitted {
  Dataset train;
  ResponseMatrix response;
  MlpModel model;
  Timings timings;
};

Fitted fit(const RunConfig& c, const Dataset& train, const NoiseChannel& calibration_channel,
           Exec exec) {
  Fitted f;
  f.train = train;
  auto start = Clock::now();
  f.response = calibrate(calibration_channel, c.li_shots, derive_seed(c.seed, "calibrate"), exec);
  f.timings.calibration = seconds_since(start);

  start = Clock::now();
  const TrainingConfig tc = effective_training(c);
  f.model = train_model(tc, c.num_qubits, train);
  f.timings.training = seconds_since(start);
  return f;
}

}  // namespace

std::string to_string(RunMode mode) {
  switch (mode) {
    case RunMode::kStandard: return "standard";
    case RunMode::kDrift: return "drift";
    case RunMode::kSubsample: return "subsample";
    case RunMode::kTransfer: return "transfer";
  }
  return "?";
}

void RunConfig::validate() const {
  dimension_for(num_qubits);
  if (channel.num_qubits() != num_qubits) {
    throw ValidationError("channel has " + std::to_string(channel.num_qubits()) +
                          " qubits but the run config says " + std::to_string(num_qubits));
  }
  if (train_count < 1 || test_count < 1) throw ValidationError("train_count and test_count must be positive");
  if ((shots && *shots < 1) || (li_shots && *li_shots < 1)) throw ValidationError("shot counts must be positive");
  training.validate();
  if (!(subsample_fraction > 0.0 && subsample_fraction <= 1.0)) {
    throw ValidationError("subsample_fraction must be in (0, 1]");
  }
  if (drift_horizon < 1) throw ValidationError("drift_horizon must be at least 1");
  if (mode == RunMode::kDrift && channel.kind() != ChannelKind::kDrifting) {
    throw ValidationError("drift mode needs a drifting channel");
  }
}

json run_config_to_json(const RunConfig& c) {
  return {{"name", c.name},
          {"n", c.num_qubits},
          {"channel", channel_to_json(c.channel)},
          {"train_count", c.train_count},
          {"test_count", c.test_count},
          {"shots", shots_json(c.shots)},
          {"li_shots", shots_json(c.li_shots)},
          {"training", training_config_to_json(c.training)},
          {"seed", c.seed},
          {"mode", to_string(c.mode)},
          {"subsample_fraction", c.subsample_fraction},
          {"drift_horizon", c.drift_horizon}};
}

RunConfig run_config_from_json(const json& j) {
  RunConfig c;
  try {
    if (j.contains("preset")) c = preset(j.at("preset").get<std::string>());
    c.name = j.value("name", c.name);
    if (j.contains("channel")) {
      c.channel = channel_from_json(j.at("channel"));
      c.num_qubits = c.channel.num_qubits();
    }
    c.num_qubits = j.value("n", c.num_qubits);
    c.train_count = j.value("train_count", c.train_count);
    c.test_count = j.value("test_count", c.test_count);
    if (j.contains("shots")) c.shots = shots_from(j.at("shots"));
    if (j.contains("li_shots")) c.li_shots = shots_from(j.at("li_shots"));
    if (j.contains("training")) c.training = training_config_from_json(j.at("training"), c.training);
    c.seed = j.value("seed", c.seed);
    if (j.contains("mode")) c.mode = mode_from_string(j.at("mode").get<std::string>());
    c.subsample_fraction = j.value("subsample_fraction", c.subsample_fraction);
    c.drift_horizon = j.value("drift_horizon", c.drift_horizon);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed run config: ") + e.what());
  }
  c.validate();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  try {
    return run_config_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw ValidationError("config file is not JSON: " + std::string(e.what()));
  }
}

std::string config_fingerprint(const RunConfig& c) {
  return hex64(fnv1a(run_config_to_json(c).dump()));
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const PresetRow& p : kPresets) names.emplace_back(p.name);
  return names;
}

RunConfig preset(const std::string& name) {
  for (const PresetRow& p : kPresets) {
    if (name != p.name) continue;
    RunConfig c;
    c.name = p.name;
    c.num_qubits = p.n;
    c.channel = NoiseChannel::nonlinear(std::vector<FlipRates>(p.n, FlipRates{0.05, 0.05}), 0.2);
    c.train_count = p.train;
    c.test_count = 200;
    c.training.hidden_layers = p.layers;
    c.training.hidden_width = p.width;
    c.training.epochs = 300;
    c.training.learning_rate = p.lr;
    return c;
  }
  throw ValidationError("unknown preset '" + name + "'");
}

TrainingConfig effective_training(const RunConfig& c) {
  TrainingConfig tc = c.training;
  tc.seed = derive_seed(c.seed, "train", c.training.seed);
  return tc;
}

BenchmarkReport evaluate(const Dataset& test, const LiSolver& li, const MlpModel& model, Exec exec) {
  if (test.records.empty()) throw ValidationError("test set is empty");
  if (test.num_qubits != model.num_qubits || test.num_qubits != li.response().num_qubits) {
    throw ValidationError("test set, model and response matrix disagree on the qubit count");
  }
  std::vector<RecordMetrics> per(test.size());
  parallel_for(exec, test.size(), [&](std::size_t i) {
    const DatasetRecord& r = test.records[i];
    const std::array<ProbabilityDistribution, 3> outputs = {r.observed, li.solve(r.observed),
                                                            mitigate_nn(model, r.observed)};
    for (std::size_t m = 0; m < 3; ++m) {
      for (MetricKind k : kAllMetrics) {
        per[i][m][static_cast<std::size_t>(k)] = distance(k, r.ideal, outputs[m]);
      }
    }
  });

  BenchmarkReport report;
  std::vector<double> column(test.size());
  for (std::size_t m = 0; m < 3; ++m) {
    for (std::size_t k = 0; k < 3; ++k) {
      for (std::size_t i = 0; i < test.size(); ++i) column[i] = per[i][m][k];
      report.rows[m][k] = summarize(column);
    }
  }
  fill_ratios(report);
  report.num_qubits = test.num_qubits;
  report.test_count = test.size();
  return report;
}

BenchmarkReport run_standard(const RunConfig& config, Exec exec) {
  config.validate();
  auto start = Clock::now();
  const Dataset all = generate(config.num_qubits, config.train_count + config.test_count,
                               config.channel, config.shots, derive_seed(config.seed, "data"), exec);
  auto [train_set, test_set] = split_train_test(all, config.test_count, derive_seed(config.seed, "split"));
  const double data_time = seconds_since(start);

  Fitted f = fit(config, train_set, config.channel, exec);
  f.timings.data_generation = data_time;

  start = Clock::now();
  BenchmarkReport report = evaluate(test_set, LiSolver(f.response), f.model, exec);
  f.timings.inference = seconds_since(start);

  fill_metadata(report, config, train_set, test_set, channel_to_json(config.channel), "standard");
  report.timings = f.timings;
  return report;
}

std::vector<BenchmarkReport> run_drift(const RunConfig& config, int horizon, Exec exec) {
  config.validate();
  if (config.channel.kind() != ChannelKind::kDrifting) throw ValidationError("run_drift needs a drifting channel");
  if (horizon < 1) throw ValidationError("drift horizon must be at least 1");

  auto start = Clock::now();
  const NoiseChannel base = drift_at(config.channel, 0);
  const Dataset train_set = generate(config.num_qubits, config.train_count, base, config.shots,
                                     derive_seed(config.seed, "data"), exec, 0);
  const double data_time = seconds_since(start);
  Fitted f = fit(config, train_set, base, exec);
  f.timings.data_generation = data_time;
  const LiSolver solver(f.response);

  std::vector<BenchmarkReport> series;
  for (int t = 1; t <= horizon; ++t) {
    const NoiseChannel now = drift_at(config.channel, t);
    start = Clock::now();
    const Dataset test_set = generate(config.num_qubits, config.test_count, now, config.shots,
                                      derive_seed(config.seed, "drift-test", static_cast<std::uint64_t>(t)),
                                      exec, t);
    Timings timings = f.timings;
    timings.data_generation += seconds_since(start);
    start = Clock::now();
    BenchmarkReport report = evaluate(test_set, solver, f.model, exec);
    timings.inference = seconds_since(start);
    fill_metadata(report, config, train_set, test_set, channel_to_json(now), "drift");
    report.time_index = t;
    report.timings = timings;
    series.push_back(std::move(report));
  }
  return series;
}

SubsampleReport run_subsample(const RunConfig& config, double fraction, Exec exec) {
  config.validate();
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw ValidationError("subsample fraction must be in (0, 1); use run_standard for the full set");
  }
  auto start = Clock::now();
  const Dataset all = generate(config.num_qubits, config.train_count + config.test_count,
                               config.channel, config.shots, derive_seed(config.seed, "data"), exec);
  auto [train_set, test_set] = split_train_test(all, config.test_count, derive_seed(config.seed, "split"));
  const Dataset reduced_set = subsample(train_set, fraction, derive_seed(config.seed, "subsample"));
  const double data_time = seconds_since(start);

  Fitted f = fit(config, train_set, config.channel, exec);
  f.timings.data_generation = data_time;
  const LiSolver solver(f.response);

  SubsampleReport out;
  start = Clock::now();
  out.full = evaluate(test_set, solver, f.model, exec);
  out.full.timings = f.timings;
  out.full.timings.inference = seconds_since(start);
  fill_metadata(out.full, config, train_set, test_set, channel_to_json(config.channel), "subsample-full");

  Timings reduced_timings = f.timings;
  start = Clock::now();
  const MlpModel reduced_model = train_model(effective_training(config), config.num_qubits, reduced_set);
  reduced_timings.training = seconds_since(start);
  start = Clock::now();
  out.reduced = evaluate(test_set, solver, reduced_model, exec);
  reduced_timings.inference = seconds_since(start);
  out.reduced.timings = reduced_timings;
  fill_metadata(out.reduced, config, reduced_set, test_set, channel_to_json(config.channel),
                "subsample-reduced");
  return out;
}

BenchmarkReport run_transfer(const RunConfig& source, const RunConfig& target, Exec exec) {
  source.validate();
  target.validate();
  if (source.num_qubits != target.num_qubits) {
    throw ValidationError("transfer needs the same qubit count in both configs");
  }
  auto start = Clock::now();
  const Dataset train_set = generate(source.num_qubits, source.train_count, source.channel, source.shots,
                                     derive_seed(source.seed, "data"), exec);
  const Dataset test_set = generate(target.num_qubits, target.test_count, target.channel, target.shots,
                                    derive_seed(target.seed, "transfer-test"), exec);
  const double data_time = seconds_since(start);

  Fitted f = fit(source, train_set, source.channel, exec);
  f.timings.data_generation = data_time;
  start = Clock::now();
  BenchmarkReport report = evaluate(test_set, LiSolver(f.response), f.model, exec);
  f.timings.inference = seconds_since(start);
  fill_metadata(report, source, train_set, test_set,
                {{"source", channel_to_json(source.channel)}, {"target", channel_to_json(target.channel)}},
                "transfer");
  report.config_fingerprint =
      hex64(fnv1a(run_config_to_json(source).dump() + run_config_to_json(target).dump()));
  report.timings = f.timings;
  return report;
}

}  // namespace qrem
