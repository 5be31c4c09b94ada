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
#include <fstream>

#include "qrem/error.hpp"
#include "qrem/nn.hpp"
#include "qrem/rng.hpp"

namespace qrem {
namespace {

using nlohmann::json;

void softmax_columns(Eigen::MatrixXd& z) {
  for (Eigen::Index c = 0; c < z.cols(); ++c) {
    auto col = z.col(c);
    const double m = col.maxCoeff();
    col = (col.array() - m).exp();
    col /= col.sum();
  }
}

void check_input_rows(const MlpModel& model, const Eigen::MatrixXd& inputs) {
  if (model.layer_sizes.empty() || inputs.rows() != model.layer_sizes.front()) {
    throw ValidationError("input dimension " + std::to_string(inputs.rows()) +
                          " does not match the model");
  }
}

}  // namespace

void TrainingConfig::validate() const {
  if (hidden_layers < 1) throw ValidationError("hidden_layers must be at least 1");
  if (hidden_width < 0) throw ValidationError("hidden_width must be non-negative");
  if (epochs < 1) throw ValidationError("epochs must be at least 1");
  if (!(learning_rate > 0.0)) throw ValidationError("learning_rate must be positive");
  if (batch_size < 0) throw ValidationError("batch_size must be non-negative (0 = full batch)");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0 && adam_beta2 >= 0.0 && adam_beta2 < 1.0)) {
    throw ValidationError("Adam betas must lie in [0, 1)");
  }
  if (!(adam_epsilon > 0.0)) throw ValidationError("adam_epsilon must be positive");
}

int TrainingConfig::width_for(int num_qubits) const {
  return hidden_width > 0 ? hidden_width : 5 * static_cast<int>(dimension_for(num_qubits));
}

json training_config_to_json(const TrainingConfig& c) {
  return {{"hidden_layers", c.hidden_layers},
          {"hidden_width", c.hidden_width},
          {"epochs", c.epochs},
          {"learning_rate", c.learning_rate},
          {"batch_size", c.batch_size == 0 ? json("full") : json(c.batch_size)},
          {"adam_beta1", c.adam_beta1},
          {"adam_beta2", c.adam_beta2},
          {"adam_epsilon", c.adam_epsilon},
          {"seed", c.seed},
          {"shuffle", c.shuffle}};
}

TrainingConfig training_config_from_json(const json& j, TrainingConfig c) {
  try {
    c.hidden_layers = j.value("hidden_layers", c.hidden_layers);
    c.hidden_width = j.value("hidden_width", c.hidden_width);
    c.epochs = j.value("epochs", c.epochs);
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    if (j.contains("batch_size")) {
      const json& b = j.at("batch_size");
      if (b.is_string()) {
        if (b.get<std::string>() != "full") throw ValidationError("batch_size must be an integer or \"full\"");
        c.batch_size = 0;
      } else {
        c.batch_size = b.get<int>();
      }
    }
    c.adam_beta1 = j.value("adam_beta1", c.adam_beta1);
    c.adam_beta2 = j.value("adam_beta2", c.adam_beta2);
    c.adam_epsilon = j.value("adam_epsilon", c.adam_epsilon);
    c.seed = j.value("seed", c.seed);
    c.shuffle = j.value("shuffle", c.shuffle);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed training config: ") + e.what());
  }
  c.validate();
  return c;
}

std::size_t MlpModel::parameter_count() const {
  std::size_t count = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    count += static_cast<std::size_t>(weights[l].size() + biases[l].size());
  }
  return count;
}

void validate(const MlpModel& m) {
  const auto dim = static_cast<int>(dimension_for(m.num_qubits));
  if (m.layer_sizes.size() < 3) throw ValidationError("model needs at least one hidden layer");
  if (m.layer_sizes.front() != dim || m.layer_sizes.back() != dim) {
    throw ValidationError("input and output layers must have 2^n nodes");
  }
  for (std::size_t l = 2; l + 1 < m.layer_sizes.size(); ++l) {
    if (m.layer_sizes[l] != m.layer_sizes[1]) throw ValidationError("hidden layers must share a width");
  }
  if (m.layer_sizes[1] < 1) throw ValidationError("hidden width must be positive");
  if (m.weights.size() != m.layer_sizes.size() - 1 || m.biases.size() != m.weights.size()) {
    throw ValidationError("model has the wrong number of weight layers");
  }
  for (std::size_t l = 0; l < m.weights.size(); ++l) {
    if (m.weights[l].rows() != m.layer_sizes[l + 1] || m.weights[l].cols() != m.layer_sizes[l] ||
        m.biases[l].size() != m.layer_sizes[l + 1]) {
      throw ValidationError("layer " + std::to_string(l) + " has inconsistent shapes");
    }
    if (!m.weights[l].allFinite() || !m.biases[l].allFinite()) {
      throw ValidationError("model has non-finite parameters");
    }
  }
}

MlpModel init_model(int num_qubits, const TrainingConfig& config) {
  config.validate();
  const int dim = static_cast<int>(dimension_for(num_qubits));
  const int width = config.width_for(num_qubits);

  MlpModel m;
  m.num_qubits = num_qubits;
  m.config = config;
  m.layer_sizes.push_back(dim);
  for (int l = 0; l < config.hidden_layers; ++l) m.layer_sizes.push_back(width);
  m.layer_sizes.push_back(dim);

  Rng rng(derive_seed(config.seed, "init"));
  for (std::size_t l = 0; l + 1 < m.layer_sizes.size(); ++l) {
    const int fan_in = m.layer_sizes[l];
    const int fan_out = m.layer_sizes[l + 1];
    const double limit = std::sqrt(6.0 / fan_in);
    std::uniform_real_distribution<double> u(-limit, limit);
    Eigen::MatrixXd w(fan_out, fan_in);
    for (int r = 0; r < fan_out; ++r) {
      for (int c = 0; c < fan_in; ++c) w(r, c) = u(rng);
    }
    m.weights.push_back(std::move(w));
    m.biases.push_back(Eigen::VectorXd::Zero(fan_out));
  }
  return m;
}

Eigen::MatrixXd forward_batch(const MlpModel& model, const Eigen::MatrixXd& inputs) {
  check_input_rows(model, inputs);
  Eigen::MatrixXd a = inputs;
  const std::size_t layers = model.num_layers();
  for (std::size_t l = 0; l < layers; ++l) {
    Eigen::MatrixXd z = model.weights[l] * a;
    z.colwise() += model.biases[l];
    if (l + 1 < layers) {
      a = z.cwiseMax(0.0);
    } else {
      softmax_columns(z);
      a = std::move(z);
    }
  }
  return a;
}

ProbabilityDistribution forward(const MlpModel& model, const ProbabilityDistribution& observed) {
  const Eigen::Map<const Eigen::VectorXd> x(observed.values().data(),
                                            static_cast<Eigen::Index>(observed.size()));
  const Eigen::MatrixXd y = forward_batch(model, x);
  return ProbabilityDistribution(std::vector<double>(y.data(), y.data() + y.size()));
}

double cross_entropy_loss(std::span<const double> predicted, std::span<const double> target) {
  if (predicted.size() != target.size()) throw ValidationError("cross-entropy dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    s -= target[i] * std::log(std::max(predicted[i], kCrossEntropyClamp));
  }
  return s;
}

namespace {

double batch_mean_cross_entropy(const Eigen::MatrixXd& predicted, const Eigen::MatrixXd& targets) {
  const Eigen::ArrayXXd logp = predicted.array().max(kCrossEntropyClamp).log();
  return -(targets.array() * logp).sum() / static_cast<double>(targets.cols());
}

}  // namespace

double mean_cross_entropy(const MlpModel& model, const Eigen::MatrixXd& inputs,
                          const Eigen::MatrixXd& targets) {
  return batch_mean_cross_entropy(forward_batch(model, inputs), targets);
}

Gradients backward_gradients(const MlpModel& model, const Eigen::MatrixXd& inputs,
                             const Eigen::MatrixXd& targets) {
  check_input_rows(model, inputs);
  if (inputs.cols() == 0 || targets.rows() != model.layer_sizes.back() ||
      targets.cols() != inputs.cols()) {
    throw ValidationError("batch must be non-empty with matching target shape");
  }
  const std::size_t layers = model.num_layers();
  const double batch = static_cast<double>(inputs.cols());

  // activations[l] feeds layer l; pre[l] is layer l's affine output.
  std::vector<Eigen::MatrixXd> activations(layers);
  std::vector<Eigen::MatrixXd> pre(layers);
  activations[0] = inputs;
  for (std::size_t l = 0; l < layers; ++l) {
    pre[l] = model.weights[l] * activations[l];
    pre[l].colwise() += model.biases[l];
    if (l + 1 < layers) activations[l + 1] = pre[l].cwiseMax(0.0);
  }
  Eigen::MatrixXd predicted = pre.back();
  softmax_columns(predicted);

  Gradients g;
  g.loss = batch_mean_cross_entropy(predicted, targets);
  g.weights.resize(layers);
  g.biases.resize(layers);

  // Softmax + cross-entropy: d loss / d logits = (predicted - target) / B.
  Eigen::MatrixXd delta = (predicted - targets) / batch;
  g.output_error = delta;
  for (std::size_t l = layers; l-- > 0;) {
    g.weights[l] = delta * activations[l].transpose();
    g.biases[l] = delta.rowwise().sum();
    if (l > 0) {
      Eigen::MatrixXd back = model.weights[l].transpose() * delta;
      delta = (pre[l - 1].array() > 0.0).select(back, 0.0);
    }
  }
  return g;
}

Eigen::MatrixXd observed_matrix(std::span<const DatasetRecord> records) {
  if (records.empty()) throw ValidationError("no records");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(records.front().observed.size()),
                    static_cast<Eigen::Index>(records.size()));
  for (std::size_t c = 0; c < records.size(); ++c) {
    const auto v = records[c].observed.values();
    if (static_cast<Eigen::Index>(v.size()) != m.rows()) throw ValidationError("mixed record dimensions");
    for (std::size_t r = 0; r < v.size(); ++r) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v[r];
  }
  return m;
}

Eigen::MatrixXd ideal_matrix(std::span<const DatasetRecord> records) {
  if (records.empty()) throw ValidationError("no records");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(records.front().ideal.size()),
                    static_cast<Eigen::Index>(records.size()));
  for (std::size_t c = 0; c < records.size(); ++c) {
    const auto v = records[c].ideal.values();
    if (static_cast<Eigen::Index>(v.size()) != m.rows()) throw ValidationError("mixed record dimensions");
    for (std::size_t r = 0; r < v.size(); ++r) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v[r];
  }
  return m;
}

Gradients backward_gradients(const MlpModel& model, std::span<const DatasetRecord> batch) {
  return backward_gradients(model, observed_matrix(batch), ideal_matrix(batch));
}

ProbabilityDistribution mitigate_nn(const MlpModel& model, const ProbabilityDistribution& observed) {
  return forward(model, observed);
}

std::vector<ProbabilityDistribution> mitigate_nn_batch(
    const MlpModel& model, std::span<const ProbabilityDistribution> observed, Exec exec) {
  std::vector<ProbabilityDistribution> out(observed.size());
  parallel_for(exec, observed.size(), [&](std::size_t i) { out[i] = forward(model, observed[i]); });
  return out;
}

json model_to_json(const MlpModel& m) {
  json weights = json::array();
  json biases = json::array();
  for (std::size_t l = 0; l < m.num_layers(); ++l) {
    const Eigen::MatrixXd& w = m.weights[l];
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(w.size()));
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) flat.push_back(w(r, c));
    }
    weights.push_back(std::move(flat));
    biases.push_back(std::vector<double>(m.biases[l].data(), m.biases[l].data() + m.biases[l].size()));
  }
  return {{"n", m.num_qubits},
          {"layer_sizes", m.layer_sizes},
          {"weights", std::move(weights)},
          {"biases", std::move(biases)},
          {"config", training_config_to_json(m.config)},
          {"train_fingerprint", m.train_fingerprint}};
}

MlpModel model_from_json(const json& j) {
  MlpModel m;
  try {
    m.num_qubits = j.at("n").get<int>();
    m.layer_sizes = j.at("layer_sizes").get<std::vector<int>>();
    if (j.contains("config")) m.config = training_config_from_json(j.at("config"));
    m.train_fingerprint = j.value("train_fingerprint", "");
    const json& weights = j.at("weights");
    const json& biases = j.at("biases");
    if (m.layer_sizes.size() < 2 || weights.size() != m.layer_sizes.size() - 1 ||
        biases.size() != weights.size()) {
      throw ValidationError("model layer count does not match layer_sizes");
    }
    for (std::size_t l = 0; l < weights.size(); ++l) {
      const int rows = m.layer_sizes[l + 1];
      const int cols = m.layer_sizes[l];
      const auto flat = weights[l].get<std::vector<double>>();
      if (flat.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
        throw ValidationError("weight layer " + std::to_string(l) + " has the wrong size");
      }
      Eigen::MatrixXd w(rows, cols);
      for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) w(r, c) = flat[static_cast<std::size_t>(r) * cols + c];
      }
      const auto b = biases[l].get<std::vector<double>>();
      m.weights.push_back(std::move(w));
      m.biases.push_back(Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size())));
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed model JSON: ") + e.what());
  }
  validate(m);
  return m;
}

void save_model(const MlpModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open " + path.string() + " for writing");
  out << model_to_json(model).dump() << '\n';
}

MlpModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  try {
    return model_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw ValidationError("model file is not JSON: " + std::string(e.what()));
  }
}

}  // namespace qrem
