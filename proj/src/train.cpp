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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qrem/error.hpp"
#include "qrem/metrics.hpp"
#include "qrem/nn.hpp"
#include "qrem/rng.hpp"

namespace qrem {
namespace {

struct AdamState {
  std::vector<Eigen::MatrixXd> m_w, v_w;
  std::vector<Eigen::VectorXd> m_b, v_b;
  long long step = 0;

  explicit AdamState(const MlpModel& model) {
    for (std::size_t l = 0; l < model.num_layers(); ++l) {
      m_w.push_back(Eigen::MatrixXd::Zero(model.weights[l].rows(), model.weights[l].cols()));
      v_w.push_back(m_w.back());
      m_b.push_back(Eigen::VectorXd::Zero(model.biases[l].size()));
      v_b.push_back(m_b.back());
    }
  }
};

template <typename Param, typename Grad>
void adam_update(Param& theta, const Grad& grad, Param& m, Param& v, const TrainingConfig& c,
                 double bias1, double bias2) {
  m = c.adam_beta1 * m + (1.0 - c.adam_beta1) * grad;
  v = c.adam_beta2 * v + (1.0 - c.adam_beta2) * grad.cwiseProduct(grad);
  theta.array() -= c.learning_rate * (m.array() / bias1) /
                   ((v.array() / bias2).sqrt() + c.adam_epsilon);
}

void adam_step(MlpModel& model, const Gradients& g, AdamState& s, const TrainingConfig& c) {
  ++s.step;
  const double bias1 = 1.0 - std::pow(c.adam_beta1, static_cast<double>(s.step));
  const double bias2 = 1.0 - std::pow(c.adam_beta2, static_cast<double>(s.step));
  for (std::size_t l = 0; l < model.num_layers(); ++l) {
    adam_update(model.weights[l], g.weights[l], s.m_w[l], s.v_w[l], c, bias1, bias2);
    adam_update(model.biases[l], g.biases[l], s.m_b[l], s.v_b[l], c, bias1, bias2);
  }
}

Dataset pick(const Dataset& d, std::span<const std::size_t> indices) {
  Dataset out;
  out.num_qubits = d.num_qubits;
  out.split = d.split;
  out.provenance = d.provenance;
  out.seed = d.seed;
  out.records.reserve(indices.size());
  for (std::size_t i : indices) out.records.push_back(d.records[i]);
  return out;
}

}  // namespace

std::vector<std::size_t> epoch_order(const TrainingConfig& config, std::size_t count, int epoch) {
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  if (config.shuffle) {
    Rng rng(derive_seed(config.seed, "shuffle", static_cast<std::uint64_t>(epoch)));
    std::shuffle(order.begin(), order.end(), rng);
  }
  return order;
}

TrainResult train(MlpModel model, const Dataset& train_set, const TrainingConfig& config,
                  TrainOptions options) {
  config.validate();
  validate(model);
  if (train_set.records.empty()) throw ValidationError("training set is empty");
  if (train_set.num_qubits != model.num_qubits) {
    throw ValidationError("training set qubit count does not match the model");
  }

  TrainResult result;
  if (options.dry_run) {
    result.model = std::move(model);
    return result;
  }

  const Eigen::MatrixXd inputs = observed_matrix(train_set.records);
  const Eigen::MatrixXd targets = ideal_matrix(train_set.records);
  const std::size_t count = train_set.size();
  const std::size_t batch =
      config.batch_size == 0 ? count : std::min<std::size_t>(count, config.batch_size);

  AdamState state(model);
  result.loss_history.reserve(static_cast<std::size_t>(config.epochs));
  std::vector<Eigen::Index> cols;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const std::vector<std::size_t> order = epoch_order(config, count, epoch);
    double weighted_loss = 0.0;
    for (std::size_t start = 0; start < count; start += batch) {
      const std::size_t stop = std::min(count, start + batch);
      cols.assign(order.begin() + static_cast<std::ptrdiff_t>(start),
                  order.begin() + static_cast<std::ptrdiff_t>(stop));
      const Gradients g =
          backward_gradients(model, inputs(Eigen::all, cols), targets(Eigen::all, cols));
      if (!std::isfinite(g.loss)) {
        throw NumericalError("non-finite training loss at epoch " + std::to_string(epoch + 1) +
                             ", batch starting at " + std::to_string(start) +
                             " (learning rate " + std::to_string(config.learning_rate) + ")");
      }
      weighted_loss += g.loss * static_cast<double>(stop - start);
      adam_step(model, g, state, config);
    }
    result.loss_history.push_back(weighted_loss / static_cast<double>(count));
  }
  model.config = config;
  model.train_fingerprint = fingerprint(train_set);
  result.model = std::move(model);
  return result;
}

CrossValidationResult cross_validate(const Dataset& train_set, std::span<const int> candidates,
                                     int folds, const TrainingConfig& config, Exec exec) {
  config.validate();
  if (folds < 2) throw ValidationError("cross-validation needs at least 2 folds");
  if (candidates.empty()) throw ValidationError("no hidden-layer candidates given");
  for (int c : candidates) {
    if (c < 1) throw ValidationError("hidden-layer candidates must be positive");
  }
  const std::size_t count = train_set.size();
  const auto k = static_cast<std::size_t>(folds);
  if (count < k) {
    throw ValidationError("dataset of " + std::to_string(count) + " records is too small for " +
                          std::to_string(folds) + " folds");
  }

  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(config.seed, "cv-folds"));
  std::shuffle(order.begin(), order.end(), rng);

  CrossValidationResult result;
  std::vector<std::size_t> fold_start(k + 1, 0);
  for (std::size_t f = 0; f < k; ++f) {
    result.fold_sizes.push_back(count / k + (f < count % k ? 1 : 0));
    fold_start[f + 1] = fold_start[f] + result.fold_sizes.back();
  }

  std::vector<Dataset> held_out(k), fitting(k);
  std::vector<double> raw_if(k);
  for (std::size_t f = 0; f < k; ++f) {
    std::vector<std::size_t> in, out;
    for (std::size_t pos = 0; pos < count; ++pos) {
      (pos >= fold_start[f] && pos < fold_start[f + 1] ? out : in).push_back(order[pos]);
    }
    held_out[f] = pick(train_set, out);
    fitting[f] = pick(train_set, in);
    std::vector<double> v;
    for (const DatasetRecord& r : held_out[f].records) {
      v.push_back(infidelity(r.ideal.values(), r.observed.values()));
    }
    raw_if[f] = summarize(v).mean;
  }
  result.unmitigated_infidelity = summarize(raw_if).mean;

  const std::size_t tasks = candidates.size() * k;
  std::vector<double> task_score(tasks);
  parallel_for(exec, tasks, [&](std::size_t task) {
    const std::size_t ci = task / k;
    const std::size_t f = task % k;
    TrainingConfig c = config;
    c.hidden_layers = candidates[ci];
    c.seed = derive_seed(config.seed, "cv", f);
    const TrainResult trained = train(init_model(train_set.num_qubits, c), fitting[f], c);
    const Eigen::MatrixXd predicted =
        forward_batch(trained.model, observed_matrix(held_out[f].records));
    std::vector<double> v(held_out[f].size());
    for (std::size_t r = 0; r < v.size(); ++r) {
      const auto col = predicted.col(static_cast<Eigen::Index>(r));
      v[r] = infidelity(held_out[f].records[r].ideal.values(),
                        std::span<const double>(col.data(), static_cast<std::size_t>(col.size())));
    }
    task_score[task] = summarize(v).mean;
  });

  for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
    CandidateScore s;
    s.hidden_layers = candidates[ci];
    s.fold_infidelity.assign(task_score.begin() + static_cast<std::ptrdiff_t>(ci * k),
                             task_score.begin() + static_cast<std::ptrdiff_t>((ci + 1) * k));
    s.mean_infidelity = summarize(s.fold_infidelity).mean;
    result.scores.push_back(std::move(s));
  }
  const auto best = std::min_element(
      result.scores.begin(), result.scores.end(), [](const CandidateScore& a, const CandidateScore& b) {
        if (a.mean_infidelity != b.mean_infidelity) return a.mean_infidelity < b.mean_infidelity;
        return a.hidden_layers < b.hidden_layers;
      });
  result.best_hidden_layers = best->hidden_layers;
  return result;
}

nlohmann::json cross_validation_to_json(const CrossValidationResult& r) {
  nlohmann::json scores = nlohmann::json::array();
  for (const CandidateScore& s : r.scores) {
    scores.push_back({{"hidden_layers", s.hidden_layers},
                      {"mean_infidelity", s.mean_infidelity},
                      {"fold_infidelity", s.fold_infidelity}});
  }
  return {{"best_hidden_layers", r.best_hidden_layers},
          {"scores", std::move(scores)},
          {"fold_sizes", r.fold_sizes},
          {"unmitigated_infidelity", r.unmitigated_infidelity}};
}

}  // namespace qrem
