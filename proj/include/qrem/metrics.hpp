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

#ifndef QREM_METRICS_HPP_
#define QREM_METRICS_HPP_

#include <array>
#include <optional>
#include <span>
#include <string>

#include "qrem/distribution.hpp"

namespace qrem {

enum class MetricKind { kMse, kKld, kIf };
inline constexpr std::array<MetricKind, 3> kAllMetrics = {MetricKind::kMse, MetricKind::kKld,
                                                          MetricKind::kIf};
inline constexpr double kKldClamp = 1e-12;

std::string to_string(MetricKind kind);
MetricKind metric_from_string(const std::string& name);

// (1/d) sum_i (mitigated_i - ideal_i)^2. Symmetric.
double mse(std::span<const double> mitigated, std::span<const double> ideal);

// sum_i ideal_i ln(ideal_i / mitigated_i) in nats. Terms with ideal_i == 0
// contribute zero; mitigated entries are clamped below at kKldClamp.
double kld(std::span<const double> ideal, std::span<const double> mitigated);

// 1 - (sum_i sqrt(ideal_i mitigated_i))^2, clamped into [0, 1].
double infidelity(std::span<const double> ideal, std::span<const double> mitigated);

// Distance of `mitigated` from `ideal` under `kind`.
double distance(MetricKind kind, const ProbabilityDistribution& ideal,
                const ProbabilityDistribution& mitigated);

// (d_li - d_nn) / d_nn * 100. Empty when d_nn == 0 ("NN exact").
std::optional<double> improvement_ratio(double d_li, double d_nn);

struct Summary {
  double mean = 0.0;
  double std_error = 0.0;
  friend bool operator==(const Summary&, const Summary&) = default;
};

// Neumaier-compensated sum, so the result does not depend on the order of
// the terms beyond the last few ulps.
double compensated_sum(std::span<const double> values);

// Mean and standard error (sample standard deviation / sqrt(N)).
Summary summarize(std::span<const double> values);

}  // namespace qrem

#endif  // QREM_METRICS_HPP_
