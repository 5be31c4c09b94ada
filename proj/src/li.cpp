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

#include "qrem/li.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>

#include "qrem/error.hpp"
#include "qrem/rng.hpp"
#include "qrem/sampler.hpp"

namespace qrem {
namespace {

using nlohmann::json;

bool on_simplex(const Eigen::VectorXd& x) {
  return x.minCoeff() >= -1e-12 && std::abs(x.sum() - 1.0) <= kSumTolerance;
}

ProbabilityDistribution to_distribution(const Eigen::VectorXd& x) {
  return ProbabilityDistribution(project_simplex(std::span<const double>(x.data(), static_cast<std::size_t>(x.size()))));
}

}  // namespace

void validate(const ResponseMatrix& r) {
  const auto dim = static_cast<Eigen::Index>(dimension_for(r.num_qubits));
  if (r.lambda.rows() != dim || r.lambda.cols() != dim) {
    throw ValidationError("response matrix must be 2^n x 2^n");
  }
  check_column_stochastic(r.lambda);
  if (r.shots_per_column && *r.shots_per_column < 1) {
    throw ValidationError("shots_per_column must be positive");
  }
}

ResponseMatrix calibrate(const NoiseChannel& channel, std::optional<int> shots, std::uint64_t seed,
                         Exec exec) {
  const int n = channel.num_qubits();
  const std::size_t dim = dimension_for(n);
  ResponseMatrix r;
  r.num_qubits = n;
  r.shots_per_column = shots;
  r.lambda.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  parallel_for(exec, dim, [&](std::size_t j) {
    const ProbabilityDistribution col = ShotSampler(shots, derive_seed(seed, "calibrate", j))
                                            .sample(apply(channel, ProbabilityDistribution::one_hot(n, j)));
    for (std::size_t i = 0; i < dim; ++i) {
      r.lambda(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
    }
  });
  validate(r);
  return r;
}

ResponseMatrix calibrate_from_dataset(const Dataset& preparations) {
  const int n = preparations.num_qubits;
  const std::size_t dim = dimension_for(n);
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  std::vector<int> seen(dim, 0);
  std::optional<int> shots;
  bool shots_uniform = true;
  for (const DatasetRecord& rec : preparations.records) {
    const auto it = std::max_element(rec.ideal.values().begin(), rec.ideal.values().end());
    if (*it < 1.0 - 1e-12) continue;
    const auto j = static_cast<std::size_t>(it - rec.ideal.values().begin());
    for (std::size_t i = 0; i < dim; ++i) {
      sum(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += rec.observed[i];
    }
    if (seen[j] == 0 && !shots) shots = rec.shots;
    if (rec.shots != shots) shots_uniform = false;
    ++seen[j];
  }
  for (std::size_t j = 0; j < dim; ++j) {
    if (seen[j] == 0) {
      throw ValidationError("no preparation of basis state " + std::to_string(j) +
                            "; cannot build column " + std::to_string(j));
    }
    sum.col(static_cast<Eigen::Index>(j)) /= seen[j];
  }
  ResponseMatrix r;
  r.num_qubits = n;
  r.lambda = std::move(sum);
  r.shots_per_column = shots_uniform ? shots : std::nullopt;
  validate(r);
  return r;
}

std::vector<double> project_simplex(std::span<const double> v) {
  if (v.empty()) throw ValidationError("cannot project an empty vector");
  std::vector<double> u(v.begin(), v.end());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double shift = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    cumulative += u[k];
    const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (u[k] - candidate > 0.0) shift = candidate;
  }
  std::vector<double> x(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) x[i] = std::max(v[i] - shift, 0.0);
  return x;
}

LiSolver::LiSolver(ResponseMatrix response, LiSolverOptions options)
    : response_(std::move(response)), options_(options) {
  validate(response_);
  const Eigen::MatrixXd& a = response_.lambda;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  if (!std::isfinite(smax) || smax <= 0.0) {
    throw NumericalError("response matrix has no usable pseudo-inverse");
  }
  condition_ = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  step_ = 1.0 / (smax * smax);
  ridge_ = !(condition_ <= options_.singular_condition);
  if (ridge_) {
    const Eigen::MatrixXd normal =
        a.transpose() * a + options_.ridge * Eigen::MatrixXd::Identity(a.rows(), a.cols());
    ridge_normal_inverse_ = normal.inverse() * a.transpose();
  } else {
    lu_.compute(a);
  }
}

ProbabilityDistribution LiSolver::solve(const ProbabilityDistribution& observed) const {
  Trace unused;
  return solve(observed, unused);
}

ProbabilityDistribution LiSolver::solve(const ProbabilityDistribution& observed, Trace& trace) const {
  const Eigen::MatrixXd& a = response_.lambda;
  if (static_cast<Eigen::Index>(observed.size()) != a.rows()) {
    throw ValidationError("observed distribution does not match the response matrix");
  }
  const Eigen::Map<const Eigen::VectorXd> b(observed.values().data(), a.rows());
  trace = Trace{};

  const Eigen::VectorXd start = ridge_ ? Eigen::VectorXd(ridge_normal_inverse_ * b)
                                       : Eigen::VectorXd(lu_.solve(b));
  if (!start.allFinite()) throw NumericalError("linear inversion produced non-finite values");
  if (on_simplex(start)) {
    trace.residual = (a * start - b).norm();
    return to_distribution(start);
  }

  const std::vector<double> projected =
      project_simplex(std::span<const double>(start.data(), static_cast<std::size_t>(start.size())));
  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(projected.data(), start.size());
  const Eigen::MatrixXd gram = a.transpose() * a;
  const Eigen::VectorXd atb = a.transpose() * b;
  for (int it = 1; it <= options_.max_iterations; ++it) {
    const Eigen::VectorXd trial = x - step_ * (gram * x - atb);
    const std::vector<double> next =
        project_simplex(std::span<const double>(trial.data(), static_cast<std::size_t>(trial.size())));
    const Eigen::Map<const Eigen::VectorXd> xn(next.data(), x.size());
    const double moved = (xn - x).cwiseAbs().maxCoeff();
    x = xn;
    if (moved < options_.tolerance) {
      trace.iterations = it;
      trace.residual = (a * x - b).norm();
      return ProbabilityDistribution(std::vector<double>(x.data(), x.data() + x.size()));
    }
  }
  throw NumericalError("constrained least squares did not converge in " +
                       std::to_string(options_.max_iterations) + " iterations; residual " +
                       std::to_string((a * x - b).norm()));
}

ProbabilityDistribution mitigate_li(const ResponseMatrix& response,
                                    const ProbabilityDistribution& observed) {
  return LiSolver(response).solve(observed);
}

std::vector<ProbabilityDistribution> mitigate_li_batch(
    const LiSolver& solver, std::span<const ProbabilityDistribution> observed, Exec exec) {
  std::vector<ProbabilityDistribution> out(observed.size());
  parallel_for(exec, observed.size(), [&](std::size_t i) { out[i] = solver.solve(observed[i]); });
  return out;
}

json response_to_json(const ResponseMatrix& r) {
  return {{"n", r.num_qubits},
          {"lambda", matrix_to_json(r.lambda)},
          {"shots_per_column", r.shots_per_column ? json(*r.shots_per_column) : json("exact")}};
}

ResponseMatrix response_from_json(const json& j) {
  ResponseMatrix r;
  try {
    r.num_qubits = j.at("n").get<int>();
    r.lambda = matrix_from_json(j.at("lambda"), dimension_for(r.num_qubits));
    if (j.contains("shots_per_column") && !j.at("shots_per_column").is_string()) {
      r.shots_per_column = j.at("shots_per_column").get<int>();
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed response matrix JSON: ") + e.what());
  }
  validate(r);
  return r;
}

void save_response(const ResponseMatrix& r, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open " + path.string() + " for writing");
  out << response_to_json(r).dump() << '\n';
}

ResponseMatrix load_response(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  try {
    return response_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw ValidationError("response file is not JSON: " + std::string(e.what()));
  }
}

}  // namespace qrem
