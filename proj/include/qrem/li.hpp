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

#ifndef QREM_LI_HPP_
#define QREM_LI_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"
#include "qrem/channel.hpp"
#include "qrem/dataset.hpp"
#include "qrem/distribution.hpp"
#include "qrem/exec.hpp"

namespace qrem {

// Empirical response matrix; column j is the distribution read out after
// preparing basis state j.
struct ResponseMatrix {
  int num_qubits = 0;
  Eigen::MatrixXd lambda;
  // Empty when the columns were computed exactly.
  std::optional<int> shots_per_column;

  friend bool operator==(const ResponseMatrix&, const ResponseMatrix&) = default;
};

void validate(const ResponseMatrix& r);

// Full 2^n-column tomography against a simulated channel: column j is
// sample(channel(e_j)) with a seed derived from (seed, j).
ResponseMatrix calibrate(const NoiseChannel& channel, std::optional<int> shots, std::uint64_t seed,
                         Exec exec = Exec::kParallel);

// Tomography from recorded basis-state preparations: every record whose
// ideal distribution is one-hot contributes to that column; repeats are
// averaged. Throws if any basis state is missing.
ResponseMatrix calibrate_from_dataset(const Dataset& preparations);

// Euclidean projection onto the probability simplex of matching dimension
// (sort-based, O(d log d)). Works for any d >= 1.
std::vector<double> project_simplex(std::span<const double> v);

struct LiSolverOptions {
  int max_iterations = 10000;
  double tolerance = 1e-10;
  double singular_condition = 1e12;
  double ridge = 1e-10;
};

// argmin ||Lambda x - p_hat||_2 subject to x >= 0, sum x = 1.
//
// Starts from the unconstrained solution (LU, or a ridge-regularized normal
// equation when cond(Lambda) exceeds singular_condition). If that already
// lies on the simplex it is returned; otherwise projected gradient descent
// with step 1 / ||Lambda||_2^2 runs until the iterate moves less than
// `tolerance` (max-norm). Factorizations are computed once per solver.
class LiSolver {
 public:
  explicit LiSolver(ResponseMatrix response, LiSolverOptions options = {});

  const ResponseMatrix& response() const { return response_; }
  double condition_number() const { return condition_; }
  bool uses_ridge() const { return ridge_; }

  ProbabilityDistribution solve(const ProbabilityDistribution& observed) const;

  // Iterations used by the last PGD phase of solve(); 0 when the
  // unconstrained solution was feasible.
  struct Trace {
    int iterations = 0;
    double residual = 0.0;
  };
  ProbabilityDistribution solve(const ProbabilityDistribution& observed, Trace& trace) const;

 private:
  ResponseMatrix response_;
  LiSolverOptions options_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  Eigen::MatrixXd ridge_normal_inverse_;
  double step_ = 0.0;
  double condition_ = 0.0;
  bool ridge_ = false;
};

ProbabilityDistribution mitigate_li(const ResponseMatrix& response,
                                    const ProbabilityDistribution& observed);
std::vector<ProbabilityDistribution> mitigate_li_batch(
    const LiSolver& solver, std::span<const ProbabilityDistribution> observed,
    Exec exec = Exec::kParallel);

// {"n", "lambda": row-major, "shots_per_column": int | "exact"}
nlohmann::json response_to_json(const ResponseMatrix& r);
ResponseMatrix response_from_json(const nlohmann::json& j);
void save_response(const ResponseMatrix& r, const std::filesystem::path& path);
ResponseMatrix load_response(const std::filesystem::path& path);

}  // namespace qrem

#endif  // QREM_LI_HPP_
