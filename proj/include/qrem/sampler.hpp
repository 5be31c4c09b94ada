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

#ifndef QREM_SAMPLER_HPP_
#define QREM_SAMPLER_HPP_

#include <cstdint>
#include <optional>

#include "qrem/distribution.hpp"

namespace qrem {

inline constexpr int kDefaultShots = 8192;

// Finite-shot readout. An empty shot count is the infinite-shot bypass:
// sample() then returns its input unchanged.
class ShotSampler {
 public:
  ShotSampler(std::optional<int> shots, std::uint64_t seed);

  static ShotSampler exact() { return ShotSampler(std::nullopt, 0); }

  bool is_exact() const { return !shots_.has_value(); }
  const std::optional<int>& shots() const { return shots_; }
  std::uint64_t seed() const { return seed_; }

  // Draws shots() outcomes from p and returns their normalized frequencies.
  // The result depends only on (seed, shots, p).
  ProbabilityDistribution sample(const ProbabilityDistribution& p) const;

 private:
  std::optional<int> shots_;
  std::uint64_t seed_;
};

}  // namespace qrem

#endif  // QREM_SAMPLER_HPP_
