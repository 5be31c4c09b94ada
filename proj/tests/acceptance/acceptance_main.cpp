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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only when
// every criterion passes.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gradient_check.hpp"
#include "json.hpp"
#include "qrem/channel.hpp"
#include "qrem/dataset.hpp"
#include "qrem/harness.hpp"
#include "qrem/li.hpp"
#include "qrem/metrics.hpp"
#include "qrem/nn.hpp"
#include "qrem/report.hpp"
#include "qrem/rng.hpp"
#include "test_support.hpp"

namespace {

using namespace qrem;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// ---------------------------------------------------------------- 1

// Kronecker product of per-qubit (cos^2, sin^2) pairs, qubit 0 leftmost.
std::vector<double> tensor_oracle(std::span<const double> theta) {
  std::vector<double> out{1.0};
  for (double t : theta) {
    const double c = std::cos(t / 2.0), s = std::sin(t / 2.0);
    std::vector<double> next;
    next.reserve(out.size() * 2);
    for (double v : out) {
      next.push_back(v * c * c);
      next.push_back(v * s * s);
    }
    out = std::move(next);
  }
  return out;
}

Outcome ideal_oracle() {
  std::mt19937_64 rng(1001);
  double worst = 0.0;
  for (int n = 1; n <= 5; ++n) {
    for (int i = 0; i < 1000; ++i) {
      const AngleVector a(testing::random_angles(rng, n));
      worst = std::max(worst, testing::max_abs_diff(ideal_distribution(a).values(), tensor_oracle(a.angles())));
    }
  }
  return {worst <= 1e-12, fmt("5000 angle vectors, max entry error %.3g (tol 1e-12)", worst)};
}

// ---------------------------------------------------------------- 2

Outcome gradient_check() {
  std::mt19937_64 rng(2002);
  double worst = 0.0;
  std::size_t checked = 0, skipped = 0;
  for (int i = 0; i < 100; ++i) {
    const auto c = testing::random_gradient_case(rng, 2);
    const auto r = testing::check_gradients(c.model, c.inputs, c.targets, 1e-5);
    worst = std::max(worst, r.max_relative_error);
    checked += r.checked;
    skipped += r.skipped_at_kink;
  }
  return {worst < 1e-4 && checked > 0,
          fmt("100 models, %zu parameters, max relative error %.3g (tol 1e-4), %zu skipped at ReLU kinks",
              checked, worst, skipped)};
}

// ---------------------------------------------------------------- 3

Eigen::MatrixXd random_diagonal_stochastic(std::mt19937_64& rng, std::size_t dim) {
  std::uniform_real_distribution<double> diag(0.7, 1.0);
  Eigen::MatrixXd m(dim, dim);
  for (std::size_t c = 0; c < dim; ++c) {
    const double d = diag(rng);
    const auto rest = testing::random_simplex(rng, dim - 1);
    for (std::size_t r = 0, k = 0; r < dim; ++r) m(r, c) = r == c ? d : (1.0 - d) * rest[k++];
  }
  return m;
}

Outcome li_exactness() {
  std::mt19937_64 rng(3003);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int n = 2 + i % 2;
    const Eigen::MatrixXd lambda = random_diagonal_stochastic(rng, dimension_for(n));
    const auto p = testing::random_distribution(rng, n);
    const ProbabilityDistribution p_hat(testing::dense_apply(lambda, p.vector()));
    const auto x = mitigate_li(ResponseMatrix{n, lambda, std::nullopt}, p_hat);
    worst = std::max(worst, testing::max_abs_diff(x.values(), p.values()));
  }
  return {worst <= 1e-6, fmt("100 matrices (n=2,3), max entry error %.3g (tol 1e-6)", worst)};
}

// ---------------------------------------------------------------- 4

// Exhaustive search over the grid {k / 1000} on the simplex of dimension d.
std::vector<double> grid_projection(const std::vector<double>& v) {
  constexpr int kSteps = 1000;
  const std::size_t d = v.size();
  std::vector<int> best(d, 0), cur(d, 0);
  double best_dist = INFINITY;
  std::function<void(std::size_t, int, double)> recurse = [&](std::size_t i, int remaining, double partial) {
    if (partial >= best_dist) return;
    if (i + 1 == d) {
      cur[i] = remaining;
      const double diff = remaining / static_cast<double>(kSteps) - v[i];
      const double total = partial + diff * diff;
      if (total < best_dist) {
        best_dist = total;
        best = cur;
      }
      return;
    }
    for (int k = 0; k <= remaining; ++k) {
      cur[i] = k;
      const double diff = k / static_cast<double>(kSteps) - v[i];
      recurse(i + 1, remaining - k, partial + diff * diff);
    }
  };
  recurse(0, kSteps, 0.0);
  std::vector<double> out(d);
  for (std::size_t i = 0; i < d; ++i) out[i] = best[i] / static_cast<double>(kSteps);
  return out;
}

Outcome projection_oracle() {
  std::mt19937_64 rng(4004);
  std::normal_distribution<double> g(0.3, 0.6);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    std::vector<double> v(2 + i % 3);
    for (auto& x : v) x = g(rng);
    const auto p = project_simplex(v), q = grid_projection(v);
    double d2 = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) d2 += (p[k] - q[k]) * (p[k] - q[k]);
    worst = std::max(worst, std::sqrt(d2));
  }
  return {worst <= 2e-3, fmt("50 inputs (d=2..4), max Euclidean distance to grid optimum %.3g (tol 2e-3)", worst)};
}

// ---------------------------------------------------------------- 5

Outcome metric_identities() {
  std::mt19937_64 rng(5005);
  bool zero = true;
  for (int i = 0; i < 100; ++i) {
    const auto p = testing::random_simplex(rng, std::size_t{1} << (1 + i % 4));
    zero = zero && mse(p, p) == 0.0 && kld(p, p) == 0.0 && infidelity(p, p) == 0.0;
  }
  const double k = kld(std::vector<double>{1.0, 0.0}, std::vector<double>{0.5, 0.5});
  const double f = infidelity(std::vector<double>{0.5, 0.5}, std::vector<double>{1.0, 0.0});
  const bool pass = zero && std::abs(k - std::numbers::ln2) <= 1e-12 && f == 0.5;
  return {pass, fmt("identical pairs all zero: %s; KLD-ln2 = %.3g; IF = %.17g", zero ? "yes" : "no",
                    k - std::numbers::ln2, f)};
}

// ---------------------------------------------------------------- 6, 7, 8

std::string ratio_text(const BenchmarkReport& r, MetricKind k) {
  const auto v = r.ratio(k);
  return v ? fmt("%.1f", *v) : std::string("nn_exact");
}

bool ratio_positive(const BenchmarkReport& r, MetricKind k) {
  const auto v = r.ratio(k);
  return !v || *v > 0.0;
}

Outcome central_claim() {
  int wins = 0;
  std::string detail;
  for (std::uint64_t seed : {1, 2, 3}) {
    RunConfig c = preset("paper-a-n2");
    c.seed = seed;
    const BenchmarkReport r = run_standard(c);
    const bool win = ratio_positive(r, MetricKind::kKld) && ratio_positive(r, MetricKind::kIf);
    wins += win;
    detail += fmt("seed %d: R_KLD=%s R_IF=%s R_MSE=%s; ", static_cast<int>(seed),
                  ratio_text(r, MetricKind::kKld).c_str(), ratio_text(r, MetricKind::kIf).c_str(),
                  ratio_text(r, MetricKind::kMse).c_str());
  }
  return {wins >= 2, detail + fmt("%d/3 seeds with R_KLD>0 and R_IF>0", wins)};
}

Outcome linear_control() {
  RunConfig c = preset("paper-a-n2");
  c.channel = NoiseChannel::tensor({{0.05, 0.05}, {0.05, 0.05}});
  c.shots = std::nullopt;
  c.li_shots = std::nullopt;
  const BenchmarkReport r = run_standard(c);
  const double li = r.at(Method::kLi, MetricKind::kMse).mean;
  return {li < 1e-10, fmt("LI mean MSE %.3g (tol 1e-10); NN mean MSE %.3g; R_MSE=%s", li,
                          r.at(Method::kNn, MetricKind::kMse).mean, ratio_text(r, MetricKind::kMse).c_str())};
}

Outcome drift_check() {
  int wins = 0;
  std::string detail;
  for (std::uint64_t seed : {1, 2, 3}) {
    RunConfig c = preset("paper-a-n2");
    c.channel = NoiseChannel::drifting({{0.05, 0.05}, {0.05, 0.05}}, 0.2,
                                       {DriftParam::kEps10, DriftShape::kRamp, 0.002, 0.0});
    c.mode = RunMode::kDrift;
    c.seed = seed;
    const auto series = run_drift(c, 10);
    bool all = series.size() == 10;
    double lowest = INFINITY;
    for (const auto& r : series) {
      all = all && ratio_positive(r, MetricKind::kIf);
      if (r.ratio(MetricKind::kIf)) lowest = std::min(lowest, *r.ratio(MetricKind::kIf));
    }
    wins += all;
    detail += fmt("seed %d: min_t R_IF=%.1f; ", static_cast<int>(seed), lowest);
  }
  return {wins >= 2, detail + fmt("%d/3 seeds with R_IF(t)>0 for t=1..10", wins)};
}

// ---------------------------------------------------------------- 9

Outcome cross_validation() {
  // Sampling noise has to dominate the NN's approximation error for any
  // mitigator to beat the raw input on a noiseless channel; 64 shots does.
  const Dataset d = generate(2, 1000, NoiseChannel::identity(2), 64, derive_seed(9009, "data"));
  TrainingConfig c;
  c.seed = derive_seed(9009, "train");
  const std::vector<int> candidates{1, 2, 4};
  const CrossValidationResult r = cross_validate(d, candidates, 5, c);
  bool folds = r.fold_sizes == std::vector<std::size_t>(5, 200);
  bool below = true;
  std::string scores;
  for (const auto& s : r.scores) {
    below = below && s.mean_infidelity <= r.unmitigated_infidelity;
    scores += fmt("L=%d %.4g, ", s.hidden_layers, s.mean_infidelity);
  }
  return {folds && below, fmt("fold sizes %s; %sunmitigated %.4g; best L=%d", folds ? "5x200" : "WRONG",
                              scores.c_str(), r.unmitigated_infidelity, r.best_hidden_layers)};
}

// ---------------------------------------------------------------- 10

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / "qrem_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ofstream(dir / "run.json") << R"({"preset": "paper-a-n2", "seed": 10})";
  for (const char* out : {"first", "second"}) {
    const std::string cmd = "cd '" + dir.string() + "' && env -u QREM_SEED '" + QREM_CLI_PATH +
                            "' --config run.json --out " + out + " benchmark > /dev/null";
    const int status = std::system(cmd.c_str());
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) return {false, "benchmark invocation failed"};
  }
  const std::string a = slurp(dir / "first" / "report.json"), b = slurp(dir / "second" / "report.json");
  fs::remove_all(dir);
  return {!a.empty() && a == b, fmt("report.json %zu bytes, identical: %s", a.size(), a == b ? "yes" : "no")};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "ideal-distribution oracle", 10, ideal_oracle},
      {2, "gradient check", 60, gradient_check},
      {3, "LI exactness", 60, li_exactness},
      {4, "simplex projection oracle", 0, projection_oracle},
      {5, "metric identities", 0, metric_identities},
      {6, "NN beats LI on the nonlinear channel", 600, central_claim},
      {7, "linear-channel control", 0, linear_control},
      {8, "drift: R_IF(t) > 0", 0, drift_check},
      {9, "cross-validation harness", 0, cross_validation},
      {10, "benchmark determinism", 0, determinism},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0 && secs > c.budget_s) {
      o.pass = false;
      o.detail += fmt(" [over the %.0f s budget]", c.budget_s);
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << c.id << " (" << c.name << "): " << o.detail
              << fmt(" [%.2f s]", secs) << std::endl;
  }
  std::cout << (failures == 0 ? "ALL ACCEPTANCE CRITERIA PASS" : fmt("%d CRITERIA FAILED", failures)) << std::endl;
  return failures == 0 ? 0 : 1;
}
