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

#include "qrem/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "qrem/error.hpp"

namespace qrem {
namespace {

void check_same_size(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) {
    throw ValidationError("metric arguments must have the same non-zero dimension");
  }
}

}  // namespace

std::string to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::kMse: return "MSE";
    case MetricKind::kKld: return "KLD";
    case MetricKind::kIf: return "IF";
  }
  return "?";
}

MetricKind metric_from_string(const std::string& name) {
  for (MetricKind k : kAllMetrics) {
    if (to_string(k) == name) return k;
  }
  throw ValidationError("unknown metric '" + name + "'");
}

double mse(std::span<const double> mitigated, std::span<const double> ideal) {
  check_same_size(mitigated, ideal);
  double s = 0.0;
  for (std::size_t i = 0; i < ideal.size(); ++i) {
    const double d = mitigated[i] - ideal[i];
    s += d * d;
  }
  return s / static_cast<double>(ideal.size());
}

double kld(std::span<const double> ideal, std::span<const double> mitigated) {
  check_same_size(ideal, mitigated);
  double s = 0.0;
  for (std::size_t i = 0; i < ideal.size(); ++i) {
    if (ideal[i] <= 0.0) continue;
    s += ideal[i] * std::log(ideal[i] / std::max(mitigated[i], kKldClamp));
  }
  // Gibbs: the exact value is >= 0; rounding can leave -1e-17.
  return std::max(s, 0.0);
}

double infidelity(std::span<const double> ideal, std::span<const double> mitigated) {
  check_same_size(ideal, mitigated);
  // 1 - overlap^2 rewritten through the Hellinger term
  // h = 1 - overlap = sum (sqrt(p) - sqrt(q))^2 / 2 (normalized inputs):
  // identical pairs give exactly 0 and near-identical pairs avoid
  // cancellation. Extended precision keeps closed forms such as 0.5 exact.
  long double h = 0.0L;
  for (std::size_t i = 0; i < ideal.size(); ++i) {
    if (ideal[i] < 0.0 || mitigated[i] < 0.0) {
      throw ValidationError("infidelity needs non-negative entries");
    }
    const long double d = std::sqrt(static_cast<long double>(ideal[i])) -
                          std::sqrt(static_cast<long double>(mitigated[i]));
    h += d * d;
  }
  h /= 2.0L;
  return std::clamp(static_cast<double>(h * (2.0L - h)), 0.0, 1.0);
}

double distance(MetricKind kind, const ProbabilityDistribution& ideal,
                const ProbabilityDistribution& mitigated) {
  switch (kind) {
    case MetricKind::kMse: return mse(mitigated.values(), ideal.values());
    case MetricKind::kKld: return kld(ideal.values(), mitigated.values());
    case MetricKind::kIf: return infidelity(ideal.values(), mitigated.values());
  }
  throw ValidationError("unknown metric");
}

std::optional<double> improvement_ratio(double d_li, double d_nn) {
  if (!(d_nn >= 0.0) || !(d_li >= 0.0)) {
    throw ValidationError("improvement ratio needs non-negative distances");
  }
  if (d_nn == 0.0) return std::nullopt;
  return (d_li - d_nn) / d_nn * 100.0;
}

double compensated_sum(std::span<const double> values) {
  double sum = 0.0;
  double c = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      c += (sum - t) + v;
    } else {
      c += (v - t) + sum;
    }
    sum = t;
  }
  return sum + c;
}

Summary summarize(std::span<const double> values) {
  if (values.empty()) throw ValidationError("cannot summarize an empty sample");
  const double n = static_cast<double>(values.size());
  Summary s;
  s.mean = compensated_sum(values) / n;
  if (values.size() > 1) {
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double d = values[i] - s.mean;
      sq[i] = d * d;
    }
    s.std_error = std::sqrt(compensated_sum(sq) / (n - 1.0)) / std::sqrt(n);
  }
  return s;
}

}  // namespace qrem
