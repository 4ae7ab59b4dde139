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

// Monte Carlo execution of the six testing strategies on one population.
//
//   A  individual test for everybody
//   B  one round of fixed-size pools, individual retest of positive pools
//   C  one round at the optimal pool size, sequential retests
//   D  parallel matrix pooling, sequential retests of flagged people
//   E  multi-step plan, one individual test at positive terminals
//   F  multi-step plan, sequential retests at positive terminals
//
// Every draw goes through Rng so a run is a pure function of its seed.

#ifndef POOLTEST_SIMULATION_HPP_
#define POOLTEST_SIMULATION_HPP_

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "pooltest/metrics.hpp"
#include "pooltest/probability.hpp"

namespace pooltest {

std::uint64_t splitmix64(std::uint64_t x);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  bool bernoulli(double p) { return uniform() < p; }
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

struct Population {
  std::vector<std::uint8_t> infected;
  double true_rate = 0.0;

  std::size_t size() const { return infected.size(); }
  std::size_t infected_count() const;
};

Population generate_population(std::size_t size, double p, std::uint64_t seed);

enum class StrategyKind { kA, kB, kC, kD, kE, kF };

/// How members of a subpopulation are split into pools each round.
enum class BatchAssignment {
  kOrderPreserving,  ///< consecutive members in population order
  kShuffle,          ///< fresh uniform permutation every round
};

/// When a person in a parallel matrix design counts as flagged.
enum class MatrixRule {
  kAxisUnion,     ///< row positive in some replicate and column in some
  kPerReplicate,  ///< row and column positive in the same replicate
};

struct Strategy {
  StrategyKind kind = StrategyKind::kA;
  std::string name;  ///< optional; defaults to the kind letter
  int fixed_batch_size = 10;  // B
  int matrix_dimension = 12;  // D
  int replicates = 3;         // D
  int sequential_cap = 3;
  double p_cut = 0.30;
  BatchAssignment assignment = BatchAssignment::kOrderPreserving;
  MatrixRule matrix_rule = MatrixRule::kAxisUnion;
  bool pilot = false;       // C, E, F: estimate the rate before planning
  int pilot_size = 10000;
  int pilot_batch_size = 10;

  /// `name` if set, else the kind letter. Seeds derive from this.
  std::string label() const;
  /// Throws InvalidArgument on inconsistent parameters.
  void validate() const;
};

/// Throws InvalidArgument for anything but A..F (case-insensitive).
Strategy strategy_from_label(std::string_view label);

/// Tests consumed so far.
struct TestLedger {
  long long batch_tests = 0;
  long long individual_tests = 0;
};

/// One pooled assay over `members`; returns true when positive.
bool run_batch_test(const Population& pop, std::span<const std::uint32_t> members,
                    const ErrorModel& err, Rng& rng, TestLedger& ledger);

bool run_individual_test(bool infected, const ErrorModel& err, Rng& rng,
                         TestLedger& ledger);

/// Up to `cap` tests, stopping at the first positive.
bool run_sequential_tests(bool infected, int cap, const ErrorModel& err,
                          Rng& rng, TestLedger& ledger);

struct StrategyResult {
  ConfusionMatrix confusion;
  long long batch_tests = 0;
  long long individual_tests = 0;
  long long total_tests() const { return batch_tests + individual_tests; }
};

StrategyResult run_strategy(const Population& pop, const Strategy& strat,
                            const ErrorModel& err, Rng& rng);

/// Pools the sample at n_guess (full pools only), inverts the observed
/// negative fraction and returns the implied infection rate, capped at p_max.
/// Throws InvalidArgument when the sample cannot fill one pool.
double estimate_pilot_rate(const Population& pop,
                           std::span<const std::uint32_t> sample, int n_guess,
                           const ErrorModel& err, Rng& rng, TestLedger& ledger,
                           double p_max = 0.5);

}  // namespace pooltest

#endif  // POOLTEST_SIMULATION_HPP_
