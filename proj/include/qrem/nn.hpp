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

#ifndef QREM_NN_HPP_
#define QREM_NN_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "qrem/dataset.hpp"
#include "qrem/distribution.hpp"
#include "qrem/exec.hpp"

namespace qrem {

inline constexpr double kCrossEntropyClamp = 1e-12;

struct TrainingConfig {
  int hidden_layers = 1;
  // 0 selects the default width 5 * 2^n.
  int hidden_width = 0;
  int epochs = 300;
  double learning_rate = 1e-3;
  // 0 means full batch.
  int batch_size = 32;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  std::uint64_t seed = 0;
  // When false, every epoch visits the records in dataset order.
  bool shuffle = true;

  void validate() const;
  int width_for(int num_qubits) const;
  friend bool operator==(const TrainingConfig&, const TrainingConfig&) = default;
};

nlohmann::json training_config_to_json(const TrainingConfig& c);
// Missing fields keep their defaults.
TrainingConfig training_config_from_json(const nlohmann::json& j,
                                         TrainingConfig defaults = TrainingConfig{});

// Fully connected network 2^n -> h -> ... -> h -> 2^n with ReLU hidden
// layers and a softmax output. weights[l] is (layer_sizes[l+1] x
// layer_sizes[l]).
struct MlpModel {
  int num_qubits = 0;
  std::vector<int> layer_sizes;
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
  TrainingConfig config;
  std::string train_fingerprint;

  std::size_t num_layers() const { return weights.size(); }
  std::size_t parameter_count() const;
  friend bool operator==(const MlpModel&, const MlpModel&) = default;
};

void validate(const MlpModel& model);

// He-uniform weights (limit sqrt(6 / fan_in)) from config.seed, zero biases.
MlpModel init_model(int num_qubits, const TrainingConfig& config);

// Column-wise forward pass; each column of `inputs` is one observed
// distribution, each output column a softmax distribution.
Eigen::MatrixXd forward_batch(const MlpModel& model, const Eigen::MatrixXd& inputs);
ProbabilityDistribution forward(const MlpModel& model, const ProbabilityDistribution& observed);

// -sum_i target_i ln(max(predicted_i, 1e-12)).
double cross_entropy_loss(std::span<const double> predicted, std::span<const double> target);

struct Gradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
  // Mean cross-entropy over the batch.
  double loss = 0.0;
  // d loss / d logits of the output layer, (predicted - target) / B.
  Eigen::MatrixXd output_error;
};

// Analytic gradients of the batch-mean cross-entropy with respect to every
// weight and bias.
Gradients backward_gradients(const MlpModel& model, const Eigen::MatrixXd& inputs,
                             const Eigen::MatrixXd& targets);
Gradients backward_gradients(const MlpModel& model, std::span<const DatasetRecord> batch);

double mean_cross_entropy(const MlpModel& model, const Eigen::MatrixXd& inputs,
                          const Eigen::MatrixXd& targets);

// Observed distributions as columns / ideal distributions as columns.
Eigen::MatrixXd observed_matrix(std::span<const DatasetRecord> records);
Eigen::MatrixXd ideal_matrix(std::span<const DatasetRecord> records);

struct TrainOptions {
  // Return the initial model without taking a step.
  bool dry_run = false;
};

struct TrainResult {
  MlpModel model;
  // Mean training cross-entropy of each epoch, one entry per epoch.
  std::vector<double> loss_history;
};

// Record visiting order for one epoch.
std::vector<std::size_t> epoch_order(const TrainingConfig& config, std::size_t count, int epoch);

// Minibatch Adam on mean cross-entropy, inputs = observed, targets = ideal.
// Single-threaded with a fixed accumulation order: identical
// (model, dataset, config) give bit-identical weights. Throws NumericalError
// on a non-finite loss.
TrainResult train(MlpModel model, const Dataset& train_set, const TrainingConfig& config,
                  TrainOptions options = {});

ProbabilityDistribution mitigate_nn(const MlpModel& model, const ProbabilityDistribution& observed);
std::vector<ProbabilityDistribution> mitigate_nn_batch(
    const MlpModel& model, std::span<const ProbabilityDistribution> observed,
    Exec exec = Exec::kParallel);

struct CandidateScore {
  int hidden_layers = 0;
  double mean_infidelity = 0.0;
  std::vector<double> fold_infidelity;
};

struct CrossValidationResult {
  int best_hidden_layers = 0;
  std::vector<CandidateScore> scores;
  std::vector<std::size_t> fold_sizes;
  // Mean IF of the raw observed distributions on the held-out folds.
  double unmitigated_infidelity = 0.0;
};

// k-fold model selection over the hidden-layer count, scored by mean
// held-out infidelity. Ties go to the smaller layer count. (candidate, fold)
// trainings are independent and run in parallel under Exec::kParallel.
CrossValidationResult cross_validate(const Dataset& train_set, std::span<const int> candidates,
                                     int folds, const TrainingConfig& config,
                                     Exec exec = Exec::kParallel);

nlohmann::json cross_validation_to_json(const CrossValidationResult& r);

// {"n", "layer_sizes", "weights": [[row-major]...], "biases": [[...]...],
//  "config": {...}, "train_fingerprint"}
nlohmann::json model_to_json(const MlpModel& model);
MlpModel model_from_json(const nlohmann::json& j);
void save_model(const MlpModel& model, const std::filesystem::path& path);
MlpModel load_model(const std::filesystem::path& path);

}  // namespace qrem

#endif  // QREM_NN_HPP_
