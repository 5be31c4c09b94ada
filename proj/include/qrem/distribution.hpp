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

#ifndef QREM_DISTRIBUTION_HPP_
#define QREM_DISTRIBUTION_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace qrem {

// Bit order used throughout: qubit 0 is the most significant bit of a
// basis-state index, so for n = 3 the index 0b100 = 4 has qubit 0 excited.
inline int qubit_bit(std::size_t index, int qubit, int num_qubits) {
  return static_cast<int>((index >> (num_qubits - 1 - qubit)) & 1U);
}

inline constexpr int kMaxQubits = 12;
inline constexpr double kSumTolerance = 1e-9;

std::size_t dimension_for(int num_qubits);

// Infers n from a length that must be a power of two >= 2.
int qubits_for_dimension(std::size_t dim);

// Outcome distribution over the 2^n computational basis states.
//
// Construction validates: length 2^n, every entry >= 0 and the entries sum
// to one within kSumTolerance. Entries in [-1e-15, 0) are rounding debris
// from linear algebra and are clamped to zero.
class ProbabilityDistribution {
 public:
  ProbabilityDistribution() = default;
  explicit ProbabilityDistribution(std::vector<double> values);

  static ProbabilityDistribution one_hot(int num_qubits, std::size_t index);
  static ProbabilityDistribution uniform(int num_qubits);

  int num_qubits() const { return num_qubits_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  const std::vector<double>& vector() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  // Marginal probability that `qubit` reads 1.
  double excited_marginal(int qubit) const;

  friend bool operator==(const ProbabilityDistribution&, const ProbabilityDistribution&) = default;

 private:
  int num_qubits_ = 0;
  std::vector<double> values_;
};

// Rotation angles of the training circuit, one per qubit, normalized into
// [0, 2pi) on construction.
class AngleVector {
 public:
  AngleVector() = default;
  explicit AngleVector(std::vector<double> angles);

  int num_qubits() const { return static_cast<int>(angles_.size()); }
  std::span<const double> angles() const { return angles_; }
  double operator[](std::size_t i) const { return angles_[i]; }

  friend bool operator==(const AngleVector&, const AngleVector&) = default;

 private:
  std::vector<double> angles_;
};

// Exact outcome distribution of the product state prod_i R_y(theta_i)|0>:
// p(b) = prod_i cos^2(theta_i/2)^(1-b_i) sin^2(theta_i/2)^(b_i).
ProbabilityDistribution ideal_distribution(const AngleVector& angles);

}  // namespace qrem

#endif  // QREM_DISTRIBUTION_HPP_
