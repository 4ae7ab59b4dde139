// Copyright 2026 The pooltest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pooltest/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pooltest/error.hpp"

namespace pooltest {
namespace {

constexpr int kMaxSecantIterations = 200;
constexpr double kSecantTolerance = 1e-8;

void require_rate(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidArgument("infection rate must lie in [0, 1], got " +
                          std::to_string(p));
  }
  if (p == 0.0) {
    throw NoFiniteOptimum(
        "no finite optimal batch size for an uninfected population");
  }
}

// Residual in closed form once ln q and the constant are known.
struct Residual {
  double log_q;
  double target;  // [-(1-alpha-beta) ln q]^(-1/2)

  explicit Residual(const ObjectiveSpec& spec)
      : log_q(std::log1p(-spec.p)),
        target(1.0 / std::sqrt(-spec.err.discrimination() * log_q)) {}

  double operator()(double x) const {
    return x * std::exp(0.5 * x * log_q) - target;
  }

  // The residual increases up to here and decreases beyond.
  double peak() const { return -2.0 / log_q; }
};

double bisect(const Residual& f, double lo, double hi) {
  for (int i = 0; i < 200 && hi - lo > kSecantTolerance; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// First local minimum of T over integers, scanning upward from 1.
int scan_first_local_minimum(const ObjectiveSpec& spec, int limit) {
  int n = 1;
  while (n < limit && expected_tests(n + 1, spec) < expected_tests(n, spec)) {
    ++n;
  }
  return n;
}

}  // namespace

double expected_tests(int n, const ObjectiveSpec& spec) {
  if (n < 1) {
    throw InvalidArgument("batch size must be at least 1");
  }
  const double q = 1.0 - spec.p;
  return spec.population * (1.0 / n + 1.0 - spec.err.beta() -
                            spec.err.discrimination() * pow_q(q, n));
}

double stationarity_residual(double x, const ObjectiveSpec& spec) {
  if (!(x > 0.0)) {
    throw InvalidArgument("stationarity residual needs x > 0");
  }
  require_rate(spec.p);
  if (spec.p == 1.0) {
    throw NoFiniteOptimum("q == 0: every batch is infected");
  }
  return Residual(spec)(x);
}

std::optional<OptimalBatch> find_optimal_batch(const ObjectiveSpec& spec) {
  require_rate(spec.p);
  if (spec.p == 1.0) return std::nullopt;

  const Residual f(spec);
  const double peak = f.peak();
  if (f(peak) < 0.0) {
    // T is decreasing everywhere; there is no interior optimum.
    return std::nullopt;
  }

  OptimalBatch out;
  double x0 = std::min(2.0, peak);
  double x1 = std::clamp(2.0 / std::sqrt(spec.p), 2.0,
                         static_cast<double>(kMaxBatchSize));
  x1 = std::min(x1, peak);
  if (x1 == x0) x1 = 0.5 * x0;

  double f0 = f(x0);
  double f1 = f(x1);
  bool converged = false;
  for (int it = 1; it <= kMaxSecantIterations; ++it) {
    out.secant_iterations = it;
    if (f1 == f0) break;
    const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
    if (!std::isfinite(x2) || x2 <= 0.0 || x2 > peak) break;
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = f(x1);
    if (std::abs(x1 - x0) < kSecantTolerance) {
      converged = true;
      break;
    }
  }

  int n_star = 0;
  if (converged) {
    out.x_real = x1;
    const double lo = std::floor(x1);
    const double hi = std::ceil(x1);
    if (lo >= kMaxBatchSize) {
      n_star = kMaxBatchSize;
    } else {
      const int a = std::max(1, static_cast<int>(lo));
      const int b = std::min(kMaxBatchSize, std::max(1, static_cast<int>(hi)));
      // Ties go to the smaller batch.
      n_star = expected_tests(b, spec) < expected_tests(a, spec) ? b : a;
    }
  } else {
    out.used_scan_fallback = true;
    out.x_real = bisect(f, 0.0, peak);
    const int limit = static_cast<int>(
        std::min(static_cast<double>(kMaxBatchSize), std::ceil(peak)));
    n_star = scan_first_local_minimum(spec, std::max(1, limit));
  }

  out.n_star = n_star;
  ObjectiveSpec per_person = spec;
  per_person.population = 1.0;
  out.expected_tests_per_person = expected_tests(n_star, per_person);
  if (n_star < kMinUsefulBatchSize || out.expected_tests_per_person >= 1.0) {
    return std::nullopt;
  }
  return out;
}

OptimalBatch optimal_batch_size(const ObjectiveSpec& spec) {
  auto found = find_optimal_batch(spec);
  if (!found) {
    throw BatchingNotBeneficial("pooling does not reduce the expected number "
                                "of tests at infection rate " +
                                std::to_string(spec.p));
  }
  return *found;
}

}  // namespace pooltest
