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

#ifndef QREM_DATASET_HPP_
#define QREM_DATASET_HPP_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "qrem/channel.hpp"
#include "qrem/distribution.hpp"
#include "qrem/exec.hpp"

namespace qrem {

// One training-circuit run: rotation angles, the exact outcome distribution
// they imply and the noisy distribution read out. shots is empty for exact
// (infinite-shot) records.
struct DatasetRecord {
  AngleVector angles;
  ProbabilityDistribution ideal;
  ProbabilityDistribution observed;
  std::optional<int> shots;
  std::optional<int> time_index;

  friend bool operator==(const DatasetRecord&, const DatasetRecord&) = default;
};

enum class SplitTag { kTrain, kTest };

struct Dataset {
  int num_qubits = 0;
  std::vector<DatasetRecord> records;
  SplitTag split = SplitTag::kTrain;
  std::string provenance;
  std::uint64_t seed = 0;

  std::size_t size() const { return records.size(); }
  friend bool operator==(const Dataset&, const Dataset&) = default;
};

// Throws unless every record shares num_qubits, the dataset is non-empty and
// each ideal matches ideal_distribution(angles) within 1e-9.
void validate(const Dataset& d);

// Draws `count` angle vectors uniformly on [0, 2pi)^n, computes the exact
// distribution and reads it through `channel` with `shots` (empty = exact).
// Record i uses seeds derived from (seed, i), so the serial and parallel
// paths produce the same dataset.
Dataset generate(int num_qubits, std::size_t count, const NoiseChannel& channel,
                 std::optional<int> shots, std::uint64_t seed, Exec exec = Exec::kParallel,
                 std::optional<int> time_index = std::nullopt);

// Seeded shuffle, then the first test_count records form the test set.
std::pair<Dataset, Dataset> split_train_test(const Dataset& d, std::size_t test_count,
                                             std::uint64_t seed);

// ceil(fraction * N) records drawn without replacement, in input order.
Dataset subsample(const Dataset& d, double fraction, std::uint64_t seed);

// JSON Lines. The first line is a header object {"qrem_dataset": {...}}
// holding the dataset metadata; every following line is one record
// {"angles", "ideal", "observed", "shots", "t"}. Files without a header are
// accepted on input.
void write_jsonl(const Dataset& d, std::ostream& out);
std::string to_jsonl(const Dataset& d);
Dataset read_jsonl(std::istream& in);
void save_dataset(const Dataset& d, const std::filesystem::path& path);
Dataset load_dataset(const std::filesystem::path& path);

// Hex FNV-1a digest of the JSONL serialization.
std::string fingerprint(const Dataset& d);

// Counts file: {"n": int, "experiments": [{"angles": [...], "counts":
// {"bitstring": int, ...}, "shots": int}]}. Bit strings use the qubit-0-first
// order unless reverse_bits is set. Missing bit strings count as zero.
Dataset ingest_counts(const nlohmann::json& file, std::optional<int> num_qubits = std::nullopt,
                      bool reverse_bits = false);
Dataset ingest_counts_file(const std::filesystem::path& path,
                           std::optional<int> num_qubits = std::nullopt,
                           bool reverse_bits = false);

std::string to_string(SplitTag tag);

}  // namespace qrem

#endif  // QREM_DATASET_HPP_
