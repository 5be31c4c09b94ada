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

// qrem: readout-error mitigation toolkit.
//
//   qrem [--seed S] [--config run.json] [--out DIR] <subcommand> [options]
//
// Exit codes: 0 success, 1 validation error, 2 numerical failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qrem/channel.hpp"
#include "qrem/dataset.hpp"
#include "qrem/error.hpp"
#include "qrem/harness.hpp"
#include "qrem/li.hpp"
#include "qrem/nn.hpp"
#include "qrem/report.hpp"
#include "qrem/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string config_path;
  std::string preset;
  std::string out = ".";
};

std::uint64_t resolve_seed(const Globals& g, std::uint64_t fallback) {
  if (g.seed) return *g.seed;
  if (const char* env = std::getenv("QREM_SEED"); env && *env) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw qrem::ValidationError("QREM_SEED is not an unsigned integer");
    }
  }
  return fallback;
}

qrem::RunConfig base_config(const Globals& g) {
  qrem::RunConfig c;
  if (!g.config_path.empty()) {
    c = qrem::load_run_config(g.config_path);
  } else if (!g.preset.empty()) {
    c = qrem::preset(g.preset);
  } else {
    c.channel = qrem::NoiseChannel::identity(c.num_qubits);
  }
  c.seed = resolve_seed(g, c.seed);
  return c;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw qrem::ValidationError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw qrem::ValidationError(path + " is not JSON: " + e.what());
  }
}

std::optional<int> shots_option(int shots, bool exact) {
  if (exact) return std::nullopt;
  return shots;
}

void print_written(const fs::path& p) { std::cout << "wrote " << p.string() << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Readout-error mitigation: simulated channels, NN and linear-inversion mitigators, benchmarks"};
  app.require_subcommand(1);
  Globals g;
  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "Master seed (falls back to $QREM_SEED)");
  app.add_option("--config", g.config_path, "Run config JSON");
  app.add_option("--out", g.out, "Output directory")->capture_default_str();

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "Generate a (observed, ideal) dataset from a channel");
  std::string gen_channel;
  std::size_t gen_count = 0, gen_test = 0;
  int gen_shots = qrem::kDefaultShots;
  bool gen_exact = false;
  int gen_t = -1;
  gen->add_option("--channel", gen_channel, "Channel JSON (default: the config's channel)");
  gen->add_option("--count", gen_count, "Number of records (default: train_count + test_count)");
  gen->add_option("--test-count", gen_test, "Also split off this many test records");
  gen->add_option("--shots", gen_shots, "Shots per record")->capture_default_str();
  gen->add_flag("--exact", gen_exact, "Infinite-shot readout");
  gen->add_option("--time-index", gen_t, "Evaluate a drifting channel at this time index");

  // calibrate
  auto* cal = app.add_subcommand("calibrate", "Response-matrix tomography for the LI mitigator");
  std::string cal_channel, cal_counts;
  int cal_shots = qrem::kDefaultShots;
  bool cal_exact = false, cal_reverse = false;
  cal->add_option("--channel", cal_channel, "Channel JSON (default: the config's channel)");
  cal->add_option("--counts", cal_counts, "Counts JSON of basis-state preparations instead of a channel");
  cal->add_option("--shots", cal_shots, "Shots per basis state")->capture_default_str();
  cal->add_flag("--exact", cal_exact, "Exact columns");
  cal->add_flag("--reverse-bits", cal_reverse, "Counts keys list the last qubit first");

  // train
  auto* trn = app.add_subcommand("train", "Train the NN mitigator on a dataset");
  std::string trn_data, trn_batch;
  int trn_layers = 0, trn_width = 0, trn_epochs = 0;
  double trn_lr = 0.0;
  bool trn_dry = false;
  trn->add_option("--data", trn_data, "Training dataset (JSONL)")->required();
  trn->add_option("--layers", trn_layers, "Hidden layers");
  trn->add_option("--width", trn_width, "Hidden width (default 5 * 2^n)");
  trn->add_option("--epochs", trn_epochs, "Epochs");
  trn->add_option("--lr", trn_lr, "Adam learning rate");
  trn->add_option("--batch", trn_batch, "Batch size or 'full'");
  trn->add_flag("--dry-run", trn_dry, "Write the initial model without training");

  // cross-validate
  auto* cv = app.add_subcommand("cross-validate", "k-fold selection of the hidden-layer count");
  std::string cv_data;
  std::vector<int> cv_candidates{1, 2, 4};
  int cv_folds = 5;
  cv->add_option("--data", cv_data, "Training dataset (JSONL)")->required();
  cv->add_option("--candidates", cv_candidates, "Hidden-layer counts")->delimiter(',')->capture_default_str();
  cv->add_option("--folds", cv_folds, "Number of folds")->capture_default_str();

  // mitigate
  auto* mit = app.add_subcommand("mitigate", "Mitigate observed distributions with a model or response matrix");
  std::string mit_model, mit_response, mit_data, mit_counts;
  bool mit_reverse = false;
  mit->add_option("--model", mit_model, "NN model JSON");
  mit->add_option("--response", mit_response, "Response matrix JSON");
  mit->add_option("--data", mit_data, "Dataset (JSONL)");
  mit->add_option("--counts", mit_counts, "Counts JSON");
  mit->add_flag("--reverse-bits", mit_reverse, "Counts keys list the last qubit first");

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "Score unmitigated, LI and NN outputs on a test set");
  std::string ev_data, ev_model, ev_response;
  ev->add_option("--data", ev_data, "Test dataset (JSONL)")->required();
  ev->add_option("--model", ev_model, "NN model JSON")->required();
  ev->add_option("--response", ev_response, "Response matrix JSON")->required();

  // benchmark
  auto* bench = app.add_subcommand("benchmark", "Full pipeline: data, calibration, training, evaluation");
  bench->add_option("--preset", g.preset, "Named preset, e.g. paper-a-n2");
  double bench_fraction = 0.0;
  bench->add_option("--fraction", bench_fraction, "Subsample fraction (subsample mode)");

  // drift
  auto* drift = app.add_subcommand("drift", "Fixed mitigators evaluated against a drifting channel");
  int drift_horizon = 0;
  drift->add_option("--horizon", drift_horizon, "Time steps (default: the config's drift_horizon)");

  // transfer
  auto* xfer = app.add_subcommand("transfer", "Train on one channel, evaluate on another");
  std::string xfer_target;
  xfer->add_option("--target", xfer_target, "Run config JSON of the target channel")->required();

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  if (*seed_opt) g.seed = seed_value;

  try {
    const fs::path out(g.out);
    fs::create_directories(out);

    if (*gen) {
      qrem::RunConfig c = base_config(g);
      qrem::NoiseChannel channel = gen_channel.empty() ? c.channel : qrem::channel_from_json(read_json(gen_channel));
      std::optional<int> time_index;
      if (gen_t >= 0) {
        time_index = gen_t;
        if (channel.kind() == qrem::ChannelKind::kDrifting) channel = qrem::drift_at(channel, gen_t);
      }
      const std::optional<int> shots =
          gen->count("--shots") || gen_exact ? shots_option(gen_shots, gen_exact) : c.shots;
      const std::size_t count = gen_count > 0 ? gen_count : c.train_count + c.test_count;
      qrem::Dataset d = qrem::generate(channel.num_qubits(), count, channel, shots,
                                       qrem::derive_seed(c.seed, "data"), qrem::Exec::kParallel, time_index);
      if (gen_test > 0) {
        auto [train_set, test_set] = qrem::split_train_test(d, gen_test, qrem::derive_seed(c.seed, "split"));
        qrem::save_dataset(train_set, out / "train.jsonl");
        qrem::save_dataset(test_set, out / "test.jsonl");
        print_written(out / "train.jsonl");
        print_written(out / "test.jsonl");
      } else {
        qrem::save_dataset(d, out / "data.jsonl");
        print_written(out / "data.jsonl");
      }
    } else if (*cal) {
      qrem::ResponseMatrix r;
      if (!cal_counts.empty()) {
        r = qrem::calibrate_from_dataset(qrem::ingest_counts_file(cal_counts, std::nullopt, cal_reverse));
      } else {
        const qrem::RunConfig c = base_config(g);
        const qrem::NoiseChannel channel =
            cal_channel.empty() ? c.channel : qrem::channel_from_json(read_json(cal_channel));
        const std::optional<int> shots =
            cal->count("--shots") || cal_exact ? shots_option(cal_shots, cal_exact) : c.li_shots;
        r = qrem::calibrate(channel, shots, qrem::derive_seed(c.seed, "calibrate"));
      }
      qrem::save_response(r, out / "response.json");
      print_written(out / "response.json");
    } else if (*trn) {
      const qrem::RunConfig c = base_config(g);
      const qrem::Dataset d = qrem::load_dataset(trn_data);
      qrem::TrainingConfig tc = c.training;
      if (trn_layers > 0) tc.hidden_layers = trn_layers;
      if (trn_width > 0) tc.hidden_width = trn_width;
      if (trn_epochs > 0) tc.epochs = trn_epochs;
      if (trn_lr > 0.0) tc.learning_rate = trn_lr;
      if (!trn_batch.empty()) {
        tc = qrem::training_config_from_json(
            {{"batch_size", trn_batch == "full" ? json("full") : json(std::stoi(trn_batch))}}, tc);
      }
      tc.seed = qrem::derive_seed(c.seed, "train", tc.seed);
      const qrem::TrainResult result =
          qrem::train(qrem::init_model(d.num_qubits, tc), d, tc, qrem::TrainOptions{trn_dry});
      qrem::save_model(result.model, out / "model.json");
      std::ofstream hist(out / "loss_history.csv");
      hist << "epoch,loss\n";
      for (std::size_t e = 0; e < result.loss_history.size(); ++e) {
        hist << e + 1 << ',' << json(result.loss_history[e]).dump() << '\n';
      }
      print_written(out / "model.json");
      print_written(out / "loss_history.csv");
    } else if (*cv) {
      const qrem::RunConfig c = base_config(g);
      const qrem::Dataset d = qrem::load_dataset(cv_data);
      qrem::TrainingConfig tc = c.training;
      tc.seed = qrem::derive_seed(c.seed, "train", tc.seed);
      const qrem::CrossValidationResult r = qrem::cross_validate(d, cv_candidates, cv_folds, tc);
      qrem::write_json_file(qrem::cross_validation_to_json(r), out / "cv.json");
      std::cout << "best hidden layers: " << r.best_hidden_layers << '\n';
      print_written(out / "cv.json");
    } else if (*mit) {
      if (mit_model.empty() == mit_response.empty()) {
        throw qrem::ValidationError("give exactly one of --model or --response");
      }
      if (mit_data.empty() == mit_counts.empty()) {
        throw qrem::ValidationError("give exactly one of --data or --counts");
      }
      const qrem::Dataset d = mit_data.empty()
                                  ? qrem::ingest_counts_file(mit_counts, std::nullopt, mit_reverse)
                                  : qrem::load_dataset(mit_data);
      std::vector<qrem::ProbabilityDistribution> observed;
      for (const auto& r : d.records) observed.push_back(r.observed);
      std::vector<qrem::ProbabilityDistribution> mitigated;
      if (!mit_model.empty()) {
        mitigated = qrem::mitigate_nn_batch(qrem::load_model(mit_model), observed);
      } else {
        mitigated = qrem::mitigate_li_batch(qrem::LiSolver(qrem::load_response(mit_response)), observed);
      }
      std::ofstream f(out / "mitigated.jsonl", std::ios::binary);
      for (std::size_t i = 0; i < mitigated.size(); ++i) {
        f << json{{"index", i}, {"observed", observed[i].vector()}, {"mitigated", mitigated[i].vector()}}.dump()
          << '\n';
      }
      print_written(out / "mitigated.jsonl");
    } else if (*ev) {
      const qrem::Dataset test = qrem::load_dataset(ev_data);
      const qrem::MlpModel model = qrem::load_model(ev_model);
      const qrem::LiSolver solver(qrem::load_response(ev_response));
      qrem::BenchmarkReport r = qrem::evaluate(test, solver, model);
      r.label = "evaluate";
      r.channel = nullptr;
      r.train_fingerprint = model.train_fingerprint;
      r.config_fingerprint = qrem::hex64(qrem::fnv1a(qrem::model_to_json(model).dump()));
      qrem::emit_report(r, out, "report");
      print_written(out / "report.json");
    } else if (*bench) {
      const qrem::RunConfig c = base_config(g);
      const double fraction = bench_fraction > 0.0 ? bench_fraction : c.subsample_fraction;
      if (c.mode == qrem::RunMode::kSubsample) {
        const qrem::SubsampleReport r = qrem::run_subsample(c, fraction);
        qrem::emit_report(r.full, out, "report_full");
        qrem::emit_report(r.reduced, out, "report_reduced");
        qrem::write_json_file({{"full", qrem::timings_to_json(r.full.timings)},
                               {"reduced", qrem::timings_to_json(r.reduced.timings)}},
                              out / "timings.json");
        print_written(out / "report_full.json");
        print_written(out / "report_reduced.json");
      } else {
        const qrem::BenchmarkReport r = qrem::run_standard(c);
        qrem::emit_report(r, out, "report");
        qrem::write_json_file(qrem::timings_to_json(r.timings), out / "timings.json");
        print_written(out / "report.json");
      }
    } else if (*drift) {
      const qrem::RunConfig c = base_config(g);
      const auto series = qrem::run_drift(c, drift_horizon > 0 ? drift_horizon : c.drift_horizon);
      qrem::emit_series(series, out);
      json timings = json::array();
      for (const auto& r : series) timings.push_back(qrem::timings_to_json(r.timings));
      qrem::write_json_file(timings, out / "timings.json");
      print_written(out / "drift.json");
    } else if (*xfer) {
      const qrem::RunConfig source = base_config(g);
      qrem::RunConfig target = qrem::load_run_config(xfer_target);
      target.seed = qrem::derive_seed(source.seed, "target", target.seed);
      const qrem::BenchmarkReport r = qrem::run_transfer(source, target);
      qrem::emit_report(r, out, "report");
      qrem::write_json_file(qrem::timings_to_json(r.timings), out / "timings.json");
      print_written(out / "report.json");
    }
  } catch (const qrem::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
