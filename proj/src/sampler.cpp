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

#include "qrem/sampler.hpp"

#include <algorithm>
#include <random>
#include <vector>

#include "qrem/error.hpp"
#include "qrem/rng.hpp"

namespace qrem {

ShotSampler::ShotSampler(std::optional<int> shots, std::uint64_t seed)
    : shots_(shots), seed_(seed) {
  if (shots_ && *shots_ < 1) throw ValidationError("shot count must be at least 1");
}

ProbabilityDistribution ShotSampler::sample(const ProbabilityDistribution& p) const {
  if (!shots_) return p;

  // Multinomial draw as a chain of conditional binomials.
  Rng rng(seed_);
  const std::span<const double> probs = p.values();
  std::vector<double> freq(probs.size(), 0.0);
  long long remaining = *shots_;
  double mass = 1.0;
  for (std::size_t i = 0; i + 1 < probs.size() && remaining > 0; ++i) {
    long long k = 0;
    if (mass > 0.0) {
      const double q = std::clamp(probs[i] / mass, 0.0, 1.0);
      std::binomial_distribution<long long> draw(remaining, q);
      k = draw(rng);
    }
    freq[i] = static_cast<double>(k);
    remaining -= k;
    mass -= probs[i];
  }
  freq.back() += static_cast<double>(remaining);
  for (double& f : freq) f /= *shots_;
  return ProbabilityDistribution(std::move(freq));
}

}  // namespace qrem
