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

// Batch-size optimization for one round of Dorfman-style pooling.
//
// The expected number of tests when a population of size N is pooled in
// batches of n and every member of a positive batch is retested is
//
//     T(n) = N [1/n + 1 - beta - (1 - alpha - beta) q^n].
//
// T has a stationary point where x q^(x/2) = [-(1-alpha-beta) ln q]^(-1/2).
// With testing errors T(n) tends to N(1 - beta) as n grows, so at high
// infection rates the useful optimum is the first (smaller) stationary point,
// a local minimum, rather than the infimum at n -> infinity. We solve for that
// root with a safeguarded secant iteration and pick floor or ceiling.

#ifndef POOLTEST_OPTIMIZER_HPP_
#define POOLTEST_OPTIMIZER_HPP_

#include <optional>

#include "pooltest/probability.hpp"

namespace pooltest {

inline constexpr int kMinUsefulBatchSize = 2;
inline constexpr int kMaxBatchSize = 1000;

struct ObjectiveSpec {
  double p = 0.0;
  ErrorModel err;           ///< ErrorModel::Perfect() gives the no-error model
  double population = 1.0;  ///< N; scales T but not its argmin
};

struct OptimalBatch {
  int n_star = 0;
  double x_real = 0.0;  ///< real root of the stationarity condition
  double expected_tests_per_person = 0.0;
  int secant_iterations = 0;
  bool used_scan_fallback = false;
};

/// T(n) for the given spec.
double expected_tests(int n, const ObjectiveSpec& spec);

/// x q^(x/2) - [-(1-alpha-beta) ln q]^(-1/2). Negative below the optimizing
/// root, positive between it and the second (maximizing) root. Throws
/// NoFiniteOptimum when q == 1.
double stationarity_residual(double x, const ObjectiveSpec& spec);

/// Returns std::nullopt when pooling is not beneficial at this rate.
std::optional<OptimalBatch> find_optimal_batch(const ObjectiveSpec& spec);

/// As find_optimal_batch but throws BatchingNotBeneficial instead of
/// returning nullopt. Throws NoFiniteOptimum for p == 0 and InvalidArgument
/// for p outside (0, 1).
OptimalBatch optimal_batch_size(const ObjectiveSpec& spec);

}  // namespace pooltest

#endif  // POOLTEST_OPTIMIZER_HPP_
