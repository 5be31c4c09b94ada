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

#ifndef QREM_REPORT_HPP_
#define QREM_REPORT_HPP_

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qrem/metrics.hpp"

namespace qrem {

enum class Method { kUnmitigated, kLi, kNn };
inline constexpr std::array<Method, 3> kAllMethods = {Method::kUnmitigated, Method::kLi, Method::kNn};
std::string to_string(Method m);

// Seconds per pipeline phase. Timings are wall-clock and therefore kept out
// of the report JSON, which must be reproducible byte for byte.
struct Timings {
  double data_generation = 0.0;
  double calibration = 0.0;
  double training = 0.0;
  double inference = 0.0;
};

nlohmann::json timings_to_json(const Timings& t);

struct BenchmarkReport {
  int num_qubits = 0;
  std::string label;
  nlohmann::json channel;
  std::size_t train_count = 0;
  std::size_t test_count = 0;
  std::optional<int> time_index;
  // Indexed [method][metric] in kAllMethods / kAllMetrics order.
  std::array<std::array<Summary, 3>, 3> rows{};
  // Indexed by metric; empty means the NN distance was exactly zero.
  std::array<std::optional<double>, 3> ratios{};
  std::string config_fingerprint;
  std::string train_fingerprint;
  Timings timings;

  const Summary& at(Method m, MetricKind k) const {
    return rows[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)];
  }
  std::optional<double> ratio(MetricKind k) const { return ratios[static_cast<std::size_t>(k)]; }
};

// Recomputes every ratio from the LI and NN means.
void fill_ratios(BenchmarkReport& r);
// Throws unless the stored ratios match the means within 1e-9.
void check_ratios(const BenchmarkReport& r);

nlohmann::json report_to_json(const BenchmarkReport& r);
BenchmarkReport report_from_json(const nlohmann::json& j);

// Columns n,method,metric,mean,stderr; one row per method x metric.
void write_report_csv(const BenchmarkReport& r, std::ostream& out);
// Long format for a time series: t,n,method,metric,mean,stderr.
void write_series_csv(const std::vector<BenchmarkReport>& series, std::ostream& out);

// Writes <stem>.json and <stem>.csv under dir.
void emit_report(const BenchmarkReport& r, const std::filesystem::path& dir, const std::string& stem);
// drift.json, drift_long.csv and one drift_t<t>.csv per step.
void emit_series(const std::vector<BenchmarkReport>& series, const std::filesystem::path& dir);

void write_json_file(const nlohmann::json& j, const std::filesystem::path& path);

}  // namespace qrem

#endif  // QREM_REPORT_HPP_
