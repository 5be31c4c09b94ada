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

#include "qrem/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unsupported/Eigen/KroneckerProduct>

#include "qrem/error.hpp"

namespace qrem {
namespace {

void check_rates(std::span<const FlipRates> rates) {
  if (rates.empty()) throw ValidationError("channel needs flip rates for at least one qubit");
  dimension_for(static_cast<int>(rates.size()));
  for (const FlipRates& r : rates) {
    if (!(r.e01 >= 0.0 && r.e01 <= 1.0 && r.e10 >= 0.0 && r.e10 <= 1.0)) {
      throw ValidationError("flip rates must lie in [0, 1]");
    }
  }
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

// Applies independent per-qubit confusion matrices in place, O(n 2^n).
void apply_per_qubit(std::span<const Eigen::Matrix2d> mats, std::vector<double>& v) {
  const int n = static_cast<int>(mats.size());
  for (int q = 0; q < n; ++q) {
    const std::size_t stride = std::size_t{1} << (n - 1 - q);
    const Eigen::Matrix2d& m = mats[q];
    for (std::size_t base = 0; base < v.size(); base += 2 * stride) {
      for (std::size_t k = base; k < base + stride; ++k) {
        const double x0 = v[k];
        const double x1 = v[k + stride];
        v[k] = m(0, 0) * x0 + m(0, 1) * x1;
        v[k + stride] = m(1, 0) * x0 + m(1, 1) * x1;
      }
    }
  }
}

const char* param_name(DriftParam p) {
  switch (p) {
    case DriftParam::kEps01: return "eps01";
    case DriftParam::kEps10: return "eps10";
    case DriftParam::kKappa: return "kappa";
  }
  return "?";
}

const char* shape_name(DriftShape s) { return s == DriftShape::kRamp ? "ramp" : "sine"; }

}  // namespace

double DriftSchedule::offset(int t) const {
  if (shape == DriftShape::kRamp) return rate * t;
  return rate * std::sin(2.0 * std::numbers::pi * t / period);
}

Eigen::Matrix2d confusion_matrix(const FlipRates& r) {
  check_rates(std::span<const FlipRates>(&r, 1));
  Eigen::Matrix2d m;
  m << 1.0 - r.e01, r.e10, r.e01, 1.0 - r.e10;
  return m;
}

Eigen::MatrixXd tensor_confusion(std::span<const FlipRates> rates) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Ones(1, 1);
  for (const FlipRates& r : rates) {
    Eigen::MatrixXd next = Eigen::kroneckerProduct(out, confusion_matrix(r));
    out = std::move(next);
  }
  return out;
}

void check_column_stochastic(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() != m.cols()) throw ValidationError("response matrix must be square");
  qubits_for_dimension(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j)) || m(i, j) < 0.0) {
        throw ValidationError("matrix has a negative or non-finite entry in column " +
                              std::to_string(j));
      }
      sum += m(i, j);
    }
    if (std::abs(sum - 1.0) > tol) {
      throw ValidationError("column " + std::to_string(j) + " sums to " + std::to_string(sum));
    }
  }
}

NoiseChannel NoiseChannel::linear(Eigen::MatrixXd lambda) {
  check_column_stochastic(lambda);
  NoiseChannel c;
  c.kind_ = ChannelKind::kLinear;
  c.num_qubits_ = qubits_for_dimension(static_cast<std::size_t>(lambda.rows()));
  c.lambda_ = std::move(lambda);
  return c;
}

NoiseChannel NoiseChannel::tensor(std::vector<FlipRates> rates) {
  check_rates(rates);
  NoiseChannel c;
  c.kind_ = ChannelKind::kLinear;
  c.num_qubits_ = static_cast<int>(rates.size());
  c.lambda_ = tensor_confusion(rates);
  c.rates_ = std::move(rates);
  return c;
}

NoiseChannel NoiseChannel::nonlinear(std::vector<FlipRates> rates, double kappa) {
  check_rates(rates);
  if (!std::isfinite(kappa)) throw ValidationError("kappa must be finite");
  NoiseChannel c;
  c.kind_ = ChannelKind::kNonlinear;
  c.num_qubits_ = static_cast<int>(rates.size());
  c.rates_ = std::move(rates);
  c.kappa_ = kappa;
  return c;
}

NoiseChannel NoiseChannel::drifting(std::vector<FlipRates> rates, double kappa,
                                    DriftSchedule drift) {
  NoiseChannel c = nonlinear(std::move(rates), kappa);
  if (!std::isfinite(drift.rate)) throw ValidationError("drift rate must be finite");
  if (drift.shape == DriftShape::kSine && !(drift.period > 0.0)) {
    throw ValidationError("sine drift needs a positive period");
  }
  c.kind_ = ChannelKind::kDrifting;
  c.drift_ = drift;
  return c;
}

NoiseChannel NoiseChannel::identity(int num_qubits) {
  dimension_for(num_qubits);
  return tensor(std::vector<FlipRates>(num_qubits));
}

const Eigen::MatrixXd& NoiseChannel::lambda() const {
  if (!lambda_) throw ValidationError(to_string(kind_) + " channel has no response matrix");
  return *lambda_;
}

bool operator==(const NoiseChannel& a, const NoiseChannel& b) {
  if (a.kind_ != b.kind_ || a.num_qubits_ != b.num_qubits_ || a.rates_ != b.rates_ ||
      a.kappa_ != b.kappa_ || a.drift_ != b.drift_ || a.lambda_.has_value() != b.lambda_.has_value()) {
    return false;
  }
  return !a.lambda_ || *a.lambda_ == *b.lambda_;
}

ProbabilityDistribution apply_linear(const NoiseChannel& channel, const ProbabilityDistribution& p) {
  if (channel.kind() != ChannelKind::kLinear) {
    throw ValidationError("apply_linear needs a linear channel");
  }
  const Eigen::MatrixXd& lambda = channel.lambda();
  if (static_cast<std::size_t>(lambda.cols()) != p.size()) {
    throw ValidationError("channel dimension does not match the distribution");
  }
  const Eigen::Map<const Eigen::VectorXd> in(p.values().data(), lambda.cols());
  Eigen::VectorXd out = lambda * in;
  return ProbabilityDistribution(std::vector<double>(out.data(), out.data() + out.size()));
}

ProbabilityDistribution apply_nonlinear(const NoiseChannel& channel,
                                        const ProbabilityDistribution& p) {
  if (channel.kind() != ChannelKind::kNonlinear) {
    throw ValidationError("apply_nonlinear needs a nonlinear channel");
  }
  const int n = channel.num_qubits();
  if (p.num_qubits() != n) throw ValidationError("channel dimension does not match the distribution");

  double mean_excited = 0.0;
  for (int q = 0; q < n; ++q) mean_excited += p.excited_marginal(q);
  mean_excited /= n;

  std::vector<Eigen::Matrix2d> mats(n);
  for (int q = 0; q < n; ++q) {
    FlipRates r = channel.flip_rates()[q];
    r.e10 = clamp01(r.e10 + channel.kappa() * mean_excited);
    mats[q] = confusion_matrix(r);
  }
  std::vector<double> v = p.vector();
  apply_per_qubit(mats, v);
  return ProbabilityDistribution(std::move(v));
}

ProbabilityDistribution apply(const NoiseChannel& channel, const ProbabilityDistribution& p) {
  switch (channel.kind()) {
    case ChannelKind::kLinear: return apply_linear(channel, p);
    case ChannelKind::kNonlinear: return apply_nonlinear(channel, p);
    case ChannelKind::kDrifting: return apply(drift_at(channel, 0), p);
  }
  throw ValidationError("unknown channel kind");
}

NoiseChannel drift_at(const NoiseChannel& channel, int t) {
  if (channel.kind() != ChannelKind::kDrifting) throw ValidationError("channel is not drifting");
  if (t < 0) throw ValidationError("drift time index must be non-negative");
  const DriftSchedule& drift = *channel.drift();
  const double delta = drift.offset(t);

  std::vector<FlipRates> rates(channel.flip_rates().begin(), channel.flip_rates().end());
  double kappa = channel.kappa();
  switch (drift.param) {
    case DriftParam::kEps01:
      for (FlipRates& r : rates) r.e01 = clamp01(r.e01 + delta);
      break;
    case DriftParam::kEps10:
      for (FlipRates& r : rates) r.e10 = clamp01(r.e10 + delta);
      break;
    case DriftParam::kKappa:
      kappa += delta;
      break;
  }
  if (kappa == 0.0 && drift.param != DriftParam::kKappa) {
    return NoiseChannel::tensor(std::move(rates));
  }
  return NoiseChannel::nonlinear(std::move(rates), kappa);
}

std::string to_string(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::kLinear: return "linear";
    case ChannelKind::kNonlinear: return "nonlinear";
    case ChannelKind::kDrifting: return "drifting";
  }
  return "?";
}

nlohmann::json channel_to_json(const NoiseChannel& c) {
  nlohmann::json j;
  j["kind"] = to_string(c.kind());
  j["n"] = c.num_qubits();
  if (c.has_flip_rates()) {
    nlohmann::json rates = nlohmann::json::array();
    for (const FlipRates& r : c.flip_rates()) rates.push_back({r.e01, r.e10});
    j["flip_rates"] = std::move(rates);
  } else {
    j["lambda"] = matrix_to_json(c.lambda());
  }
  j["kappa"] = c.kappa();
  if (c.drift()) {
    const DriftSchedule& d = *c.drift();
    j["drift"] = {{"param", param_name(d.param)}, {"shape", shape_name(d.shape)}, {"rate", d.rate}};
    if (d.shape == DriftShape::kSine) j["drift"]["period"] = d.period;
  }
  return j;
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) flat.push_back(m(r, c));
  }
  return flat;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j, std::size_t dim) {
  std::vector<double> flat;
  if (!j.is_array()) throw ValidationError("matrix must be a JSON array");
  if (!j.empty() && j.front().is_array()) {
    for (const auto& row : j) {
      if (row.size() != dim) throw ValidationError("matrix row has the wrong length");
      for (const auto& x : row) flat.push_back(x.get<double>());
    }
  } else {
    flat = j.get<std::vector<double>>();
  }
  if (flat.size() != dim * dim) throw ValidationError("matrix must have (2^n)^2 entries");
  Eigen::MatrixXd m(dim, dim);
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) m(r, c) = flat[r * dim + c];
  }
  return m;
}

NoiseChannel channel_from_json(const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    const int n = j.at("n").get<int>();
    const std::size_t dim = dimension_for(n);
    const double kappa = j.value("kappa", 0.0);

    std::vector<FlipRates> rates;
    if (j.contains("flip_rates")) {
      for (const auto& r : j.at("flip_rates")) {
        if (r.size() != 2) throw ValidationError("each flip_rates entry is [e01, e10]");
        rates.push_back({r[0].get<double>(), r[1].get<double>()});
      }
      if (static_cast<int>(rates.size()) != n) {
        throw ValidationError("flip_rates must have one entry per qubit");
      }
    }

    if (kind == "linear") {
      if (kappa != 0.0) throw ValidationError("linear channel cannot have a nonzero kappa");
      if (j.contains("lambda")) {
        if (!rates.empty()) throw ValidationError("give either lambda or flip_rates, not both");
        return NoiseChannel::linear(matrix_from_json(j.at("lambda"), dim));
      }
      if (rates.empty()) throw ValidationError("linear channel needs lambda or flip_rates");
      return NoiseChannel::tensor(std::move(rates));
    }
    if (rates.empty()) throw ValidationError(kind + " channel needs flip_rates");
    if (kind == "nonlinear") return NoiseChannel::nonlinear(std::move(rates), kappa);
    if (kind == "drifting") {
      const auto& d = j.at("drift");
      DriftSchedule s;
      const std::string param = d.at("param").get<std::string>();
      if (param == "eps01") s.param = DriftParam::kEps01;
      else if (param == "eps10") s.param = DriftParam::kEps10;
      else if (param == "kappa") s.param = DriftParam::kKappa;
      else throw ValidationError("unknown drift param '" + param + "'");
      const std::string shape = d.at("shape").get<std::string>();
      if (shape == "ramp") s.shape = DriftShape::kRamp;
      else if (shape == "sine") s.shape = DriftShape::kSine;
      else throw ValidationError("unknown drift shape '" + shape + "'");
      s.rate = d.at("rate").get<double>();
      s.period = d.value("period", 0.0);
      return NoiseChannel::drifting(std::move(rates), kappa, s);
    }
    throw ValidationError("unknown channel kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed channel JSON: ") + e.what());
  }
}

}  // namespace qrem
