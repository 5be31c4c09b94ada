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

#include "qrem/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>

#include "qrem/error.hpp"
#include "qrem/rng.hpp"
#include "qrem/sampler.hpp"

namespace qrem {
namespace {

using nlohmann::json;

json shots_to_json(const std::optional<int>& shots) {
  return shots ? json(*shots) : json("exact");
}

std::optional<int> shots_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() != "exact") throw ValidationError("shots must be an integer or \"exact\"");
    return std::nullopt;
  }
  const int s = j.get<int>();
  if (s < 1) throw ValidationError("shots must be positive");
  return s;
}

json record_to_json(const DatasetRecord& r) {
  json j;
  j["angles"] = std::vector<double>(r.angles.angles().begin(), r.angles.angles().end());
  j["ideal"] = r.ideal.vector();
  j["observed"] = r.observed.vector();
  j["shots"] = shots_to_json(r.shots);
  j["t"] = r.time_index ? json(*r.time_index) : json(nullptr);
  return j;
}

DatasetRecord record_from_json(const json& j) {
  DatasetRecord r;
  r.angles = AngleVector(j.at("angles").get<std::vector<double>>());
  r.ideal = ProbabilityDistribution(j.at("ideal").get<std::vector<double>>());
  r.observed = ProbabilityDistribution(j.at("observed").get<std::vector<double>>());
  r.shots = shots_from_json(j.at("shots"));
  if (j.contains("t") && !j.at("t").is_null()) r.time_index = j.at("t").get<int>();
  return r;
}

SplitTag split_from_string(const std::string& s) {
  if (s == "train") return SplitTag::kTrain;
  if (s == "test") return SplitTag::kTest;
  throw ValidationError("split must be \"train\" or \"test\"");
}

Dataset with_records(const Dataset& like, std::vector<DatasetRecord> records) {
  Dataset d;
  d.num_qubits = like.num_qubits;
  d.records = std::move(records);
  d.split = like.split;
  d.provenance = like.provenance;
  d.seed = like.seed;
  return d;
}

}  // namespace

std::string to_string(SplitTag tag) { return tag == SplitTag::kTrain ? "train" : "test"; }

void validate(const Dataset& d) {
  if (d.records.empty()) throw ValidationError("dataset has no records");
  dimension_for(d.num_qubits);
  for (const DatasetRecord& r : d.records) {
    if (r.angles.num_qubits() != d.num_qubits || r.ideal.num_qubits() != d.num_qubits ||
        r.observed.num_qubits() != d.num_qubits) {
      throw ValidationError("record qubit count differs from the dataset's");
    }
    const ProbabilityDistribution expect = ideal_distribution(r.angles);
    for (std::size_t i = 0; i < expect.size(); ++i) {
      if (std::abs(expect[i] - r.ideal[i]) > 1e-9) {
        throw ValidationError("record ideal distribution does not match its angles");
      }
    }
  }
}

Dataset generate(int num_qubits, std::size_t count, const NoiseChannel& channel,
                 std::optional<int> shots, std::uint64_t seed, Exec exec,
                 std::optional<int> time_index) {
  dimension_for(num_qubits);
  if (count == 0) throw ValidationError("record count must be positive");
  if (channel.num_qubits() != num_qubits) {
    throw ValidationError("channel qubit count does not match the requested dataset");
  }
  if (shots && *shots < 1) throw ValidationError("shot count must be at least 1");

  std::vector<DatasetRecord> records(count);
  parallel_for(exec, count, [&](std::size_t i) {
    Rng rng(derive_seed(seed, "angles", i));
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::vector<double> thetas(num_qubits);
    for (double& t : thetas) t = angle(rng);

    DatasetRecord& r = records[i];
    r.angles = AngleVector(std::move(thetas));
    r.ideal = ideal_distribution(r.angles);
    r.observed = ShotSampler(shots, derive_seed(seed, "shots", i)).sample(apply(channel, r.ideal));
    r.shots = shots;
    r.time_index = time_index;
  });

  Dataset d;
  d.num_qubits = num_qubits;
  d.records = std::move(records);
  d.seed = seed;
  d.provenance = "generated: " + to_string(channel.kind()) + " channel, " +
                 (shots ? std::to_string(*shots) + " shots" : std::string("exact"));
  return d;
}

std::pair<Dataset, Dataset> split_train_test(const Dataset& d, std::size_t test_count,
                                             std::uint64_t seed) {
  if (test_count == 0 || test_count >= d.size()) {
    throw ValidationError("test_count must be in [1, N-1], got " + std::to_string(test_count) +
                          " for N = " + std::to_string(d.size()));
  }
  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<DatasetRecord> test, train;
  test.reserve(test_count);
  train.reserve(d.size() - test_count);
  for (std::size_t k = 0; k < order.size(); ++k) {
    (k < test_count ? test : train).push_back(d.records[order[k]]);
  }
  Dataset tr = with_records(d, std::move(train));
  Dataset te = with_records(d, std::move(test));
  tr.split = SplitTag::kTrain;
  te.split = SplitTag::kTest;
  return {std::move(tr), std::move(te)};
}

Dataset subsample(const Dataset& d, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw ValidationError("subsample fraction must be in (0, 1]");
  }
  const auto keep = static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(d.size()) - 1e-9));
  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  order.resize(std::max<std::size_t>(keep, 1));
  std::sort(order.begin(), order.end());

  std::vector<DatasetRecord> records;
  records.reserve(order.size());
  for (std::size_t i : order) records.push_back(d.records[i]);
  return with_records(d, std::move(records));
}

void write_jsonl(const Dataset& d, std::ostream& out) {
  json header;
  header["qrem_dataset"] = {{"n", d.num_qubits},
                            {"split", to_string(d.split)},
                            {"provenance", d.provenance},
                            {"seed", d.seed},
                            {"count", d.size()}};
  out << header.dump() << '\n';
  for (const DatasetRecord& r : d.records) out << record_to_json(r).dump() << '\n';
}

std::string to_jsonl(const Dataset& d) {
  std::ostringstream out;
  write_jsonl(d, out);
  return out.str();
}

Dataset read_jsonl(std::istream& in) {
  Dataset d;
  bool have_header = false;
  std::string line;
  std::size_t line_no = 0;
  try {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const json j = json::parse(line);
      if (j.contains("qrem_dataset")) {
        const json& h = j.at("qrem_dataset");
        d.num_qubits = h.at("n").get<int>();
        d.split = split_from_string(h.value("split", "train"));
        d.provenance = h.value("provenance", "");
        d.seed = h.value("seed", std::uint64_t{0});
        have_header = true;
        continue;
      }
      d.records.push_back(record_from_json(j));
    }
  } catch (const json::exception& e) {
    throw ValidationError("malformed dataset line " + std::to_string(line_no) + ": " + e.what());
  }
  if (!have_header && !d.records.empty()) d.num_qubits = d.records.front().ideal.num_qubits();
  validate(d);
  return d;
}

void save_dataset(const Dataset& d, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open " + path.string() + " for writing");
  write_jsonl(d, out);
  if (!out) throw ValidationError("failed writing " + path.string());
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  return read_jsonl(in);
}

std::string fingerprint(const Dataset& d) { return hex64(fnv1a(to_jsonl(d))); }

Dataset ingest_counts(const json& file, std::optional<int> num_qubits, bool reverse_bits) {
  Dataset d;
  try {
    const int n = file.at("n").get<int>();
    if (num_qubits && *num_qubits != n) {
      throw ValidationError("counts file declares n = " + std::to_string(n) + ", expected " +
                            std::to_string(*num_qubits));
    }
    const std::size_t dim = dimension_for(n);
    d.num_qubits = n;
    d.provenance = "ingested counts";

    for (const json& e : file.at("experiments")) {
      const json& jangles = e.at("angles");
      if (!jangles.is_array() || jangles.size() != static_cast<std::size_t>(n)) {
        throw ValidationError("experiment angles must be an array of n numbers");
      }
      std::vector<double> thetas;
      for (const json& a : jangles) {
        if (!a.is_number()) throw ValidationError("experiment angle is not a number");
        thetas.push_back(a.get<double>());
      }

      std::vector<double> counts(dim, 0.0);
      double total = 0.0;
      for (const auto& [key, value] : e.at("counts").items()) {
        if (key.size() != static_cast<std::size_t>(n) ||
            key.find_first_not_of("01") != std::string::npos) {
          throw ValidationError("bad bit string '" + key + "'");
        }
        const long long c = value.get<long long>();
        if (c < 0) throw ValidationError("negative count for '" + key + "'");
        std::size_t index = 0;
        for (int q = 0; q < n; ++q) {
          const char bit = reverse_bits ? key[n - 1 - q] : key[q];
          index = (index << 1) | static_cast<std::size_t>(bit - '0');
        }
        counts[index] += static_cast<double>(c);
        total += static_cast<double>(c);
      }
      if (total <= 0.0) throw ValidationError("experiment has no counts");
      for (double& c : counts) c /= total;

      DatasetRecord r;
      r.angles = AngleVector(std::move(thetas));
      r.ideal = ideal_distribution(r.angles);
      r.observed = ProbabilityDistribution(std::move(counts));
      if (e.contains("shots")) {
        r.shots = e.at("shots").get<int>();
      } else {
        r.shots = static_cast<int>(total);
      }
      d.records.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed counts file: ") + e.what());
  }
  validate(d);
  return d;
}

Dataset ingest_counts_file(const std::filesystem::path& path, std::optional<int> num_qubits,
                           bool reverse_bits) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError("counts file is not JSON: " + std::string(e.what()));
  }
  return ingest_counts(j, num_qubits, reverse_bits);
}

}  // namespace qrem
