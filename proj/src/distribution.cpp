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

#include "qrem/distribution.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qrem/error.hpp"

namespace qrem {

std::size_t dimension_for(int num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    throw ValidationError("qubit count must be in [1, " + std::to_string(kMaxQubits) +
                          "], got " + std::to_string(num_qubits));
  }
  return std::size_t{1} << num_qubits;
}

int qubits_for_dimension(std::size_t dim) {
  for (int n = 1; n <= kMaxQubits; ++n) {
    if (dimension_for(n) == dim) return n;
  }
  throw ValidationError("distribution length " + std::to_string(dim) +
                        " is not 2^n for a supported n");
}

ProbabilityDistribution::ProbabilityDistribution(std::vector<double> values)
    : num_qubits_(qubits_for_dimension(values.size())), values_(std::move(values)) {
  double sum = 0.0;
  for (double& v : values_) {
    if (!std::isfinite(v)) throw ValidationError("distribution entry is not finite");
    if (v < 0.0) {
      if (v < -1e-15) {
        throw ValidationError("distribution entry is negative: " + std::to_string(v));
      }
      v = 0.0;
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw ValidationError("distribution sums to " + std::to_string(sum) + ", not 1");
  }
}

ProbabilityDistribution ProbabilityDistribution::one_hot(int num_qubits, std::size_t index) {
  std::vector<double> v(dimension_for(num_qubits), 0.0);
  if (index >= v.size()) throw ValidationError("basis index out of range");
  v[index] = 1.0;
  return ProbabilityDistribution(std::move(v));
}

ProbabilityDistribution ProbabilityDistribution::uniform(int num_qubits) {
  const std::size_t dim = dimension_for(num_qubits);
  return ProbabilityDistribution(std::vector<double>(dim, 1.0 / static_cast<double>(dim)));
}

double ProbabilityDistribution::excited_marginal(int qubit) const {
  double m = 0.0;
  for (std::size_t b = 0; b < values_.size(); ++b) {
    if (qubit_bit(b, qubit, num_qubits_)) m += values_[b];
  }
  return m;
}

AngleVector::AngleVector(std::vector<double> angles) : angles_(std::move(angles)) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  for (double& a : angles_) {
    if (!std::isfinite(a)) throw ValidationError("angle is not finite");
    a = std::fmod(a, kTwoPi);
    if (a < 0.0) a += kTwoPi;
    if (a >= kTwoPi) a = 0.0;
  }
}

ProbabilityDistribution ideal_distribution(const AngleVector& angles) {
  const int n = angles.num_qubits();
  if (n == 0) throw ValidationError("ideal_distribution needs at least one angle");
  const std::size_t dim = dimension_for(n);

  std::vector<double> ground(n), excited(n);
  for (int i = 0; i < n; ++i) {
    const double c = std::cos(angles[i] / 2.0);
    const double s = std::sin(angles[i] / 2.0);
    ground[i] = c * c;
    excited[i] = s * s;
  }
  std::vector<double> p(dim);
  for (std::size_t b = 0; b < dim; ++b) {
    double prod = 1.0;
    for (int i = 0; i < n; ++i) prod *= qubit_bit(b, i, n) ? excited[i] : ground[i];
    p[b] = prod;
  }
  return ProbabilityDistribution(std::move(p));
}

}  // namespace qrem
