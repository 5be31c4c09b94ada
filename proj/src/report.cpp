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

#include "qrem/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "qrem/error.hpp"

namespace qrem {
namespace {

using nlohmann::json;

constexpr const char* kNnExact = "nn_exact";

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_rows(const BenchmarkReport& r, std::ostream& out, const std::string& prefix) {
  for (Method m : kAllMethods) {
    for (MetricKind k : kAllMetrics) {
      const Summary& s = r.at(m, k);
      out << prefix << r.num_qubits << ',' << to_string(m) << ',' << to_string(k) << ','
          << fmt_double(s.mean) << ',' << fmt_double(s.std_error) << '\n';
    }
  }
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::kUnmitigated: return "unmitigated";
    case Method::kLi: return "LI";
    case Method::kNn: return "NN";
  }
  return "?";
}

json timings_to_json(const Timings& t) {
  return {{"data_generation_s", t.data_generation},
          {"calibration_s", t.calibration},
          {"training_s", t.training},
          {"inference_s", t.inference}};
}

void fill_ratios(BenchmarkReport& r) {
  for (MetricKind k : kAllMetrics) {
    r.ratios[static_cast<std::size_t>(k)] =
        improvement_ratio(r.at(Method::kLi, k).mean, r.at(Method::kNn, k).mean);
  }
}

void check_ratios(const BenchmarkReport& r) {
  for (MetricKind k : kAllMetrics) {
    const auto expect = improvement_ratio(r.at(Method::kLi, k).mean, r.at(Method::kNn, k).mean);
    const auto& have = r.ratio(k);
    if (expect.has_value() != have.has_value() ||
        (expect && std::abs(*expect - *have) > 1e-9)) {
      throw ValidationError("improvement ratio for " + to_string(k) +
                            " is inconsistent with the LI and NN means");
    }
  }
}

json report_to_json(const BenchmarkReport& r) {
  json methods;
  for (Method m : kAllMethods) {
    json row;
    for (MetricKind k : kAllMetrics) {
      row[to_string(k)] = {{"mean", r.at(m, k).mean}, {"stderr", r.at(m, k).std_error}};
    }
    methods[to_string(m)] = std::move(row);
  }
  json ratios;
  for (MetricKind k : kAllMetrics) {
    const auto& v = r.ratio(k);
    ratios[to_string(k)] = v ? json(*v) : json(kNnExact);
  }
  json j = {{"n", r.num_qubits},
            {"label", r.label},
            {"channel", r.channel},
            {"train_count", r.train_count},
            {"test_count", r.test_count},
            {"methods", std::move(methods)},
            {"improvement_ratio", std::move(ratios)},
            {"fingerprints", {{"config", r.config_fingerprint}, {"train", r.train_fingerprint}}}};
  j["t"] = r.time_index ? json(*r.time_index) : json(nullptr);
  return j;
}

BenchmarkReport report_from_json(const json& j) {
  BenchmarkReport r;
  try {
    r.num_qubits = j.at("n").get<int>();
    r.label = j.at("label").get<std::string>();
    r.channel = j.at("channel");
    r.train_count = j.at("train_count").get<std::size_t>();
    r.test_count = j.at("test_count").get<std::size_t>();
    if (j.contains("t") && !j.at("t").is_null()) r.time_index = j.at("t").get<int>();
    for (Method m : kAllMethods) {
      const json& row = j.at("methods").at(to_string(m));
      for (MetricKind k : kAllMetrics) {
        Summary& s = r.rows[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)];
        s.mean = row.at(to_string(k)).at("mean").get<double>();
        s.std_error = row.at(to_string(k)).at("stderr").get<double>();
      }
    }
    for (MetricKind k : kAllMetrics) {
      const json& v = j.at("improvement_ratio").at(to_string(k));
      if (v.is_string()) {
        if (v.get<std::string>() != kNnExact) throw ValidationError("unknown ratio sentinel");
        r.ratios[static_cast<std::size_t>(k)] = std::nullopt;
      } else {
        r.ratios[static_cast<std::size_t>(k)] = v.get<double>();
      }
    }
    r.config_fingerprint = j.at("fingerprints").at("config").get<std::string>();
    r.train_fingerprint = j.at("fingerprints").at("train").get<std::string>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed report JSON: ") + e.what());
  }
  check_ratios(r);
  return r;
}

void write_report_csv(const BenchmarkReport& r, std::ostream& out) {
  out << "n,method,metric,mean,stderr\n";
  write_rows(r, out, "");
}

void write_series_csv(const std::vector<BenchmarkReport>& series, std::ostream& out) {
  out << "t,n,method,metric,mean,stderr\n";
  for (const BenchmarkReport& r : series) {
    write_rows(r, out, (r.time_index ? std::to_string(*r.time_index) : std::string()) + ",");
  }
}

void write_json_file(const json& j, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
  if (!out) throw ValidationError("failed writing " + path.string());
}

void emit_report(const BenchmarkReport& r, const std::filesystem::path& dir, const std::string& stem) {
  std::filesystem::create_directories(dir);
  write_json_file(report_to_json(r), dir / (stem + ".json"));
  std::ofstream csv = open_out(dir / (stem + ".csv"));
  write_report_csv(r, csv);
  if (!csv) throw ValidationError("failed writing " + (dir / (stem + ".csv")).string());
}

void emit_series(const std::vector<BenchmarkReport>& series, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  json all = json::array();
  for (const BenchmarkReport& r : series) {
    all.push_back(report_to_json(r));
    const std::string t = r.time_index ? std::to_string(*r.time_index) : "na";
    std::ofstream csv = open_out(dir / ("drift_t" + t + ".csv"));
    write_report_csv(r, csv);
  }
  write_json_file({{"series", std::move(all)}}, dir / "drift.json");
  std::ofstream long_csv = open_out(dir / "drift_long.csv");
  write_series_csv(series, long_csv);
  if (!long_csv) throw ValidationError("failed writing drift_long.csv");
}

}  // namespace qrem
