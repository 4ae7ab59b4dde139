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

#include "pooltest/experiment.hpp"

#include <bit>
#include <cmath>
#include <exception>
#include <optional>

#include "pooltest/error.hpp"

namespace pooltest {
namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  return splitmix64(h ^ splitmix64(v));
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

struct Task {
  std::size_t strategy;
  std::size_t rate;
  int rep;
};

std::vector<Task> flatten(const ExperimentConfig& c) {
  std::vector<Task> tasks;
  tasks.reserve(c.strategies.size() * c.rates.size() * c.repetitions);
  for (std::size_t s = 0; s < c.strategies.size(); ++s) {
    for (std::size_t r = 0; r < c.rates.size(); ++r) {
      for (int k = 0; k < c.repetitions; ++k) tasks.push_back({s, r, k});
    }
  }
  return tasks;
}

struct Outcome {
  RepetitionResult value;
  std::optional<SimulationError> error;
};

void run_task(const ExperimentConfig& c, const Task& t, Outcome& out) {
  const Strategy& s = c.strategies[t.strategy];
  const double rate = c.rates[t.rate];
  try {
    out.value = run_repetition(c, s, rate, t.rep);
  } catch (const std::exception& e) {
    out.error.emplace(s.label(), rate, t.rep, e.what());
  }
}

SimulationReport aggregate(const ExperimentConfig& c,
                           const std::vector<Task>& tasks,
                           const std::vector<Outcome>& outcomes) {
  // First failure in task order, so the report is the same on any schedule.
  for (const auto& o : outcomes) {
    if (o.error) throw *o.error;
  }
  SimulationReport report;
  report.config = c;
  const std::size_t reps = c.repetitions;
  for (std::size_t base = 0; base < tasks.size(); base += reps) {
    std::vector<Measure> acc, se, sp, ppv, npv, total, batch, indiv;
    for (std::size_t k = base; k < base + reps; ++k) {
      const auto& v = outcomes[k].value;
      acc.push_back(v.measures.accuracy);
      se.push_back(v.measures.sensitivity);
      sp.push_back(v.measures.specificity);
      ppv.push_back(v.measures.ppv);
      npv.push_back(v.measures.npv);
      total.push_back(static_cast<double>(v.result.total_tests()));
      batch.push_back(static_cast<double>(v.result.batch_tests));
      indiv.push_back(static_cast<double>(v.result.individual_tests));
    }
    CellSummary cell;
    cell.strategy = c.strategies[tasks[base].strategy].label();
    cell.rate = c.rates[tasks[base].rate];
    cell.accuracy = summarize_values(acc);
    cell.sensitivity = summarize_values(se);
    cell.specificity = summarize_values(sp);
    cell.ppv = summarize_values(ppv);
    cell.npv = summarize_values(npv);
    cell.total_tests = summarize_values(total);
    cell.batch_tests = summarize_values(batch);
    cell.individual_tests = summarize_values(indiv);
    report.cells.push_back(std::move(cell));
  }
  return report;
}

}  // namespace

SimulationError::SimulationError(std::string strategy, double rate,
                                 int repetition, const std::string& what)
    : std::runtime_error("strategy " + strategy + ", rate " +
                         std::to_string(rate) + ", repetition " +
                         std::to_string(repetition) + ": " + what),
      strategy_(std::move(strategy)),
      rate_(rate),
      repetition_(repetition) {}

SummaryStat summarize_values(const std::vector<Measure>& values) {
  SummaryStat s;
  double sum = 0.0;
  for (const auto& v : values) {
    if (!v) continue;
    sum += *v;
    ++s.defined;
  }
  if (s.defined == 0) return s;
  const double mean = sum / s.defined;
  s.mean = mean;
  if (s.defined < 2) return s;
  double ss = 0.0;
  for (const auto& v : values) {
    if (v) ss += (*v - mean) * (*v - mean);
  }
  s.sd = std::sqrt(ss / (s.defined - 1));
  return s;
}

const CellSummary* SimulationReport::find(const std::string& strategy,
                                          double rate) const {
  for (const auto& c : cells) {
    if (c.strategy == strategy && c.rate == rate) return &c;
  }
  return nullptr;
}

std::uint64_t population_seed(std::uint64_t master, double rate, int rep) {
  return mix(mix(mix(master, 0x706f70ULL), std::bit_cast<std::uint64_t>(rate)),
             static_cast<std::uint64_t>(rep));
}

std::uint64_t strategy_seed(std::uint64_t master, const std::string& label,
                            double rate, int rep) {
  return mix(mix(mix(master, fnv1a(label)), std::bit_cast<std::uint64_t>(rate)),
             static_cast<std::uint64_t>(rep));
}

RepetitionResult run_repetition(const ExperimentConfig& config,
                                const Strategy& strat, double rate, int rep) {
  const Population pop = generate_population(
      config.population_size, rate,
      population_seed(config.master_seed, rate, rep));
  Rng rng(strategy_seed(config.master_seed, strat.label(), rate, rep));
  RepetitionResult out;
  out.result = run_strategy(pop, strat, config.err, rng);
  out.measures = summarize(out.result.confusion);
  return out;
}

SimulationReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto tasks = flatten(config);
  std::vector<Outcome> outcomes(tasks.size());
  const long long count = static_cast<long long>(tasks.size());
#if defined(POOLTEST_HAVE_OPENMP)
#pragma omp parallel for schedule(dynamic, 1)
#endif
  for (long long i = 0; i < count; ++i) run_task(config, tasks[i], outcomes[i]);
  return aggregate(config, tasks, outcomes);
}

SimulationReport run_experiment_serial(const ExperimentConfig& config) {
  config.validate();
  const auto tasks = flatten(config);
  std::vector<Outcome> outcomes(tasks.size());
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    run_task(config, tasks[i], outcomes[i]);
  }
  return aggregate(config, tasks, outcomes);
}

}  // namespace pooltest
