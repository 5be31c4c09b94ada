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

#ifndef QREM_CHANNEL_HPP_
#define QREM_CHANNEL_HPP_

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "qrem/distribution.hpp"

namespace qrem {

// Per-qubit readout flip probabilities. e01 = P(read 1 | prepared 0),
// e10 = P(read 0 | prepared 1).
struct FlipRates {
  double e01 = 0.0;
  double e10 = 0.0;
  friend bool operator==(const FlipRates&, const FlipRates&) = default;
};

enum class ChannelKind { kLinear, kNonlinear, kDrifting };

enum class DriftParam { kEps01, kEps10, kKappa };
enum class DriftShape { kRamp, kSine };

// Additive perturbation of one channel parameter (applied to every qubit for
// the flip rates). ramp: rate * t. sine: rate * sin(2 pi t / period).
struct DriftSchedule {
  DriftParam param = DriftParam::kEps10;
  DriftShape shape = DriftShape::kRamp;
  double rate = 0.0;
  double period = 0.0;

  double offset(int t) const;
  friend bool operator==(const DriftSchedule&, const DriftSchedule&) = default;
};

// 2x2 column-stochastic confusion matrix [[1-e01, e10], [e01, 1-e10]];
// column = prepared state, row = read state.
Eigen::Matrix2d confusion_matrix(const FlipRates& rates);

// Kronecker product of per-qubit confusion matrices, qubit 0 leftmost
// (most significant bit).
Eigen::MatrixXd tensor_confusion(std::span<const FlipRates> rates);

void check_column_stochastic(const Eigen::MatrixXd& m, double tol = kSumTolerance);

// Square matrices serialize as flat row-major arrays; nested rows are also
// accepted on input.
nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j, std::size_t dim);

// The readout error map p -> p_hat.
//
// linear:    p_hat = Lambda p for a column-stochastic Lambda, given either
//            explicitly or as the tensor product of per-qubit flip rates.
// nonlinear: independent per-qubit flips whose 1->0 rate rises with the
//            input's mean excited-state marginal m(p):
//              e10_i(p) = clamp(e10_i + kappa * m(p), 0, 1).
//            No single stochastic matrix reproduces this for all p.
// drifting:  a nonlinear (or, with kappa == 0, tensor linear) channel whose
//            parameters move with a time index; see drift_at.
class NoiseChannel {
 public:
  // Placeholder with no qubits; assign a real channel before use.
  NoiseChannel() = default;

  static NoiseChannel linear(Eigen::MatrixXd lambda);
  static NoiseChannel tensor(std::vector<FlipRates> rates);
  static NoiseChannel nonlinear(std::vector<FlipRates> rates, double kappa);
  static NoiseChannel drifting(std::vector<FlipRates> rates, double kappa, DriftSchedule drift);
  static NoiseChannel identity(int num_qubits);

  ChannelKind kind() const { return kind_; }
  int num_qubits() const { return num_qubits_; }
  // Present for every linear channel.
  const Eigen::MatrixXd& lambda() const;
  bool has_flip_rates() const { return !rates_.empty(); }
  std::span<const FlipRates> flip_rates() const { return rates_; }
  double kappa() const { return kappa_; }
  const std::optional<DriftSchedule>& drift() const { return drift_; }

  friend bool operator==(const NoiseChannel&, const NoiseChannel&);

 private:
  ChannelKind kind_ = ChannelKind::kLinear;
  int num_qubits_ = 0;
  std::optional<Eigen::MatrixXd> lambda_;
  std::vector<FlipRates> rates_;
  double kappa_ = 0.0;
  std::optional<DriftSchedule> drift_;
};

ProbabilityDistribution apply_linear(const NoiseChannel& channel, const ProbabilityDistribution& p);
ProbabilityDistribution apply_nonlinear(const NoiseChannel& channel,
                                        const ProbabilityDistribution& p);

// Dispatches on kind; a drifting channel is applied in its t = 0 state.
ProbabilityDistribution apply(const NoiseChannel& channel, const ProbabilityDistribution& p);

// Concrete channel at time index t >= 0. drift_at(c, 0) is the base channel.
// Returns a tensor linear channel when the drifted kappa is zero and the
// schedule does not act on kappa, otherwise a nonlinear channel.
NoiseChannel drift_at(const NoiseChannel& channel, int t);

// {"kind", "n", "lambda" (row-major), "flip_rates" ([[e01, e10], ...]),
//  "kappa", "drift": {"param", "shape", "rate", "period"}}
nlohmann::json channel_to_json(const NoiseChannel& channel);
NoiseChannel channel_from_json(const nlohmann::json& j);

std::string to_string(ChannelKind kind);

}  // namespace qrem

#endif  // QREM_CHANNEL_HPP_
