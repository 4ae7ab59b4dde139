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

#include "pooltest/probability.hpp"

#include <cmath>
#include <string>

#include "pooltest/error.hpp"

namespace pooltest {
namespace {

bool is_probability(double x) { return x >= 0.0 && x <= 1.0; }

void require_batch_size(int n) {
  if (n < 1) {
    throw InvalidArgument("batch size must be at least 1, got " +
                          std::to_string(n));
  }
}

void require_q(double q) {
  if (!is_probability(q)) {
    throw InvalidArgument("q must lie in [0, 1], got " + std::to_string(q));
  }
}

// 1 - q^n without cancellation when q is close to 1.
double one_minus_pow_q(double q, double n) {
  if (q == 0.0) return 1.0;
  return -std::expm1(n * std::log1p(-(1.0 - q)));
}

void require_state(const RoundState& s) {
  if (!is_probability(s.p)) {
    throw InvalidArgument("infection rate must lie in [0, 1], got " +
                          std::to_string(s.p));
  }
  if (!(s.size >= 0.0)) {
    throw InvalidArgument("subpopulation size must be non-negative");
  }
  require_batch_size(s.batch_size);
}

}  // namespace

ErrorModel::ErrorModel(double alpha, double beta) : alpha_(alpha), beta_(beta) {
  if (!(alpha >= 0.0 && alpha < 1.0) || !(beta >= 0.0 && beta < 1.0)) {
    throw InvalidArgument("error rates must lie in [0, 1)");
  }
  if (!(alpha + beta < 1.0)) {
    throw InvalidArgument("alpha + beta must be below 1");
  }
}

InfectionModel::InfectionModel(double p) : p_(p) {
  if (!is_probability(p)) {
    throw InvalidArgument("infection rate must lie in [0, 1], got " +
                          std::to_string(p));
  }
}

double pow_q(double q, double n) {
  if (q == 0.0) return n == 0.0 ? 1.0 : 0.0;
  return std::exp(n * std::log1p(-(1.0 - q)));
}

double binom_pmf(int n, double p, int k) {
  if (n < 0 || k < 0 || k > n) {
    throw InvalidArgument("binom_pmf needs 0 <= k <= n");
  }
  if (!is_probability(p)) {
    throw InvalidArgument("binom_pmf needs p in [0, 1]");
  }
  if (p == 0.0) return k == 0 ? 1.0 : 0.0;
  if (p == 1.0) return k == n ? 1.0 : 0.0;
  const double log_choose = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                            std::lgamma(n - k + 1.0);
  return std::exp(log_choose + k * std::log(p) + (n - k) * std::log1p(-p));
}

double p_batch_negative(int n, double q, const ErrorModel& err) {
  require_batch_size(n);
  require_q(q);
  return err.discrimination() * pow_q(q, n) + err.beta();
}

double p_batch_positive(int n, double q, const ErrorModel& err) {
  require_batch_size(n);
  require_q(q);
  return (1.0 - err.beta()) - err.discrimination() * pow_q(q, n);
}

BatchOutcomeProbs batch_outcome_probs(int n, double q, const ErrorModel& err) {
  return {p_batch_negative(n, q, err), p_batch_positive(n, q, err)};
}

double invert_batch_negative_rate(double A, int n, const ErrorModel& err) {
  require_batch_size(n);
  const double upper = 1.0 - err.alpha();
  if (A == upper) return 1.0;
  if (!(A > err.beta() && A < upper)) {
    throw OutOfInvertibleRange(
        "batch-negative rate " + std::to_string(A) +
        " is outside the invertible range (beta, 1 - alpha)");
  }
  const double base = (A - err.beta()) / err.discrimination();
  return std::exp(std::log(base) / n);
}

BranchEstimate subpop_after_negative(const RoundState& prev,
                                     const ErrorModel& err) {
  require_state(prev);
  const double q = 1.0 - prev.p;
  const double qn = pow_q(q, prev.batch_size);
  const double infected_batch = one_minus_pow_q(q, prev.batch_size);

  BranchEstimate out;
  out.size = prev.size * (err.discrimination() * qn + err.beta());
  if (prev.p == 0.0 || infected_batch == 0.0) {
    out.degenerate = true;
    return out;
  }
  const double missed = err.beta() * infected_batch;
  const double denom = (1.0 - err.alpha()) * qn + missed;
  if (denom == 0.0) {
    // no batch can come back negative: the branch is empty
    out.size = 0.0;
    out.degenerate = true;
    return out;
  }
  out.r = missed / denom;
  out.p = prev.p * out.r / infected_batch;
  return out;
}

BranchEstimate subpop_after_positive(const RoundState& prev,
                                     const ErrorModel& err) {
  require_state(prev);
  const double q = 1.0 - prev.p;
  const double qn = pow_q(q, prev.batch_size);
  const double infected_batch = one_minus_pow_q(q, prev.batch_size);

  BranchEstimate out;
  out.size = prev.size * ((1.0 - err.beta()) - err.discrimination() * qn);
  if (prev.p == 0.0 || infected_batch == 0.0) {
    out.degenerate = true;
    return out;
  }
  const double detected = (1.0 - err.beta()) * infected_batch;
  out.r = detected / (err.alpha() * qn + detected);
  out.p = prev.p * out.r / infected_batch;
  return out;
}

}  // namespace pooltest
