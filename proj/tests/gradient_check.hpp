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

// Central finite-difference check of backward_gradients. The reference loss
// is an independent extended-precision forward pass, so the finite
// difference carries no double round-off and the relative error needs no
// floor even for gradients near 1e-8.

#ifndef QREM_TESTS_GRADIENT_CHECK_HPP_
#define QREM_TESTS_GRADIENT_CHECK_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "qrem/nn.hpp"
#include "test_support.hpp"

namespace qrem::testing {

using MatrixLd = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

struct GradientCheckResult {
  double max_relative_error = 0.0;
  std::size_t checked = 0;
  // Parameters whose perturbation moved a hidden unit across the ReLU kink;
  // the finite difference is not a derivative there.
  std::size_t skipped_at_kink = 0;
};

// Mean cross-entropy in long double; also records the sign pattern of every
// hidden pre-activation.
inline long double reference_loss(const MlpModel& m, const Eigen::MatrixXd& inputs,
                                  const Eigen::MatrixXd& targets, std::vector<bool>* pattern = nullptr) {
  MatrixLd a = inputs.cast<long double>();
  for (std::size_t l = 0; l < m.num_layers(); ++l) {
    MatrixLd z = (m.weights[l].cast<long double>() * a).colwise() + m.biases[l].cast<long double>();
    if (l + 1 == m.num_layers()) {
      a = z;
      break;
    }
    if (pattern) {
      for (Eigen::Index i = 0; i < z.size(); ++i) pattern->push_back(z.data()[i] > 0.0L);
    }
    a = z.cwiseMax(0.0L);
  }
  long double total = 0.0L;
  for (Eigen::Index b = 0; b < a.cols(); ++b) {
    const long double peak = a.col(b).maxCoeff();
    long double norm = 0.0L;
    for (Eigen::Index i = 0; i < a.rows(); ++i) norm += std::exp(a(i, b) - peak);
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      total -= targets(i, b) * (a(i, b) - peak - std::log(norm));
    }
  }
  return total / a.cols();
}

inline double relative_error(double analytic, double numeric) {
  const double scale = std::max(std::abs(analytic), std::abs(numeric));
  return scale == 0.0 ? 0.0 : std::abs(analytic - numeric) / scale;
}

inline GradientCheckResult check_gradients(MlpModel model, const Eigen::MatrixXd& inputs,
                                           const Eigen::MatrixXd& targets, double step = 1e-5) {
  const Gradients g = backward_gradients(model, inputs, targets);
  GradientCheckResult result;
  auto probe = [&](double& param, double analytic) {
    const double saved = param;
    std::vector<bool> up_pattern, down_pattern;
    param = saved + step;
    const long double up = reference_loss(model, inputs, targets, &up_pattern);
    const long double width = static_cast<long double>(param);
    param = saved - step;
    const long double down = reference_loss(model, inputs, targets, &down_pattern);
    const long double span = width - static_cast<long double>(param);
    param = saved;
    if (up_pattern != down_pattern) {
      ++result.skipped_at_kink;
      return;
    }
    const double numeric = static_cast<double>((up - down) / span);
    result.max_relative_error = std::max(result.max_relative_error, relative_error(analytic, numeric));
    ++result.checked;
  };
  for (std::size_t l = 0; l < model.num_layers(); ++l) {
    for (Eigen::Index i = 0; i < model.weights[l].size(); ++i) {
      probe(model.weights[l].data()[i], g.weights[l].data()[i]);
    }
    for (Eigen::Index i = 0; i < model.biases[l].size(); ++i) {
      probe(model.biases[l].data()[i], g.biases[l].data()[i]);
    }
  }
  return result;
}

// Random n-qubit model with 1..3 hidden layers of width 5 * 2^n and
// non-zero biases, plus a random batch of (observed, ideal) columns.
struct GradientCase {
  MlpModel model;
  Eigen::MatrixXd inputs;
  Eigen::MatrixXd targets;
};

inline GradientCase random_gradient_case(std::mt19937_64& rng, int n) {
  TrainingConfig config;
  config.hidden_layers = 1 + static_cast<int>(rng() % 3);
  config.seed = rng();
  GradientCase c{init_model(n, config), {}, {}};
  std::uniform_real_distribution<double> bias(-0.5, 0.5);
  for (auto& b : c.model.biases) {
    for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = bias(rng);
  }
  const std::size_t dim = dimension_for(n);
  const Eigen::Index batch = 1 + static_cast<Eigen::Index>(rng() % 8);
  c.inputs.resize(dim, batch);
  c.targets.resize(dim, batch);
  for (Eigen::Index b = 0; b < batch; ++b) {
    const auto x = random_simplex(rng, dim), t = random_simplex(rng, dim);
    for (std::size_t i = 0; i < dim; ++i) {
      c.inputs(i, b) = x[i];
      c.targets(i, b) = t[i];
    }
  }
  return c;
}

}  // namespace qrem::testing

#endif  // QREM_TESTS_GRADIENT_CHECK_HPP_
