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

// Runs every (strategy, rate, repetition) cell of an experiment and
// aggregates the repetitions.
//
// Each repetition draws its population from hash(seed, rate, rep), so all
// strategies see the same people, and its test outcomes from
// hash(seed, strategy, rate, rep). Results are stored by index and reduced
// in a fixed order, so the parallel and serial runners agree bit for bit.

#ifndef POOLTEST_EXPERIMENT_HPP_
#define POOLTEST_EXPERIMENT_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "pooltest/config.hpp"
#include "pooltest/metrics.hpp"
#include "pooltest/simulation.hpp"

namespace pooltest {

/// A failure inside one cell, tagged with where it happened.
class SimulationError : public std::runtime_error {
 public:
  SimulationError(std::string strategy, double rate, int repetition,
                  const std::string& what);
  const std::string& strategy() const { return strategy_; }
  double rate() const { return rate_; }
  int repetition() const { return repetition_; }

 private:
  std::string strategy_;
  double rate_;
  int repetition_;
};

/// Mean and sample standard deviation over the repetitions where the value
/// was defined.
struct SummaryStat {
  Measure mean;
  Measure sd;
  int defined = 0;
};

SummaryStat summarize_values(const std::vector<Measure>& values);

struct CellSummary {
  std::string strategy;
  double rate = 0.0;
  SummaryStat accuracy;
  SummaryStat sensitivity;
  SummaryStat specificity;
  SummaryStat ppv;
  SummaryStat npv;
  SummaryStat total_tests;
  SummaryStat batch_tests;
  SummaryStat individual_tests;
};

struct RepetitionResult {
  StrategyResult result;
  AccuracyMeasures measures;
};

struct SimulationReport {
  ExperimentConfig config;
  std::vector<CellSummary> cells;  ///< strategy-major, then rate

  const CellSummary* find(const std::string& strategy, double rate) const;
};

std::uint64_t population_seed(std::uint64_t master, double rate, int rep);
std::uint64_t strategy_seed(std::uint64_t master, const std::string& label,
                            double rate, int rep);

/// One repetition of one strategy at one rate.
RepetitionResult run_repetition(const ExperimentConfig& config,
                                const Strategy& strat, double rate, int rep);

/// Parallel over cells when built with OpenMP.
SimulationReport run_experiment(const ExperimentConfig& config);
/// Same result, one thread; kept as the reference.
SimulationReport run_experiment_serial(const ExperimentConfig& config);

}  // namespace pooltest

#endif  // POOLTEST_EXPERIMENT_HPP_
