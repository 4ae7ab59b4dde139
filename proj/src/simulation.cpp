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

#include "pooltest/simulation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <string>

#include "pooltest/error.hpp"
#include "pooltest/optimizer.hpp"
#include "pooltest/plan.hpp"

namespace pooltest {
namespace {

// Planning needs 0 < p < 1 even when the population was generated at 0.
constexpr double kMinPlanningRate = 1e-5;
constexpr double kPilotEpsilon = 1e-9;

using Members = std::vector<std::uint32_t>;

bool draw_pool(bool any_infected, const ErrorModel& err, Rng& rng,
               TestLedger& ledger) {
  ++ledger.batch_tests;
  return rng.bernoulli(any_infected ? 1.0 - err.beta() : err.alpha());
}

bool individual_verdict(bool infected, TerminalMode mode, int cap,
                        const ErrorModel& err, Rng& rng, TestLedger& ledger) {
  return mode == TerminalMode::kSingleIndividual
             ? run_individual_test(infected, err, rng, ledger)
             : run_sequential_tests(infected, cap, err, rng, ledger);
}

Members everyone(const Population& pop) {
  Members all(pop.size());
  std::iota(all.begin(), all.end(), 0u);
  return all;
}

void shuffle(Members& m, Rng& rng) {
  for (std::size_t i = m.size(); i > 1; --i) {
    std::swap(m[i - 1], m[rng.below(i)]);
  }
}

ConfusionMatrix tally(const Population& pop,
                      const std::vector<std::uint8_t>& verdict) {
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    const bool sick = pop.infected[i];
    if (verdict[i]) {
      (sick ? cm.true_positive : cm.false_positive) += 1.0;
    } else {
      (sick ? cm.false_negative : cm.true_negative) += 1.0;
    }
  }
  return cm;
}

double planning_rate(const Population& pop, const Strategy& strat,
                     const ErrorModel& err, Rng& rng, TestLedger& ledger) {
  double p = pop.true_rate;
  if (strat.pilot) {
    const std::size_t m =
        std::min(pop.size(), static_cast<std::size_t>(strat.pilot_size));
    const Members all = everyone(pop);
    p = estimate_pilot_rate(pop, std::span(all).first(m),
                            strat.pilot_batch_size, err, rng, ledger);
  }
  return std::clamp(p, kMinPlanningRate, 1.0 - kPilotEpsilon);
}

// One round of pools of size n; positives are retested per `mode`.
void one_round(const Population& pop, Members members, int n,
               const Strategy& strat, TerminalMode mode, const ErrorModel& err,
               Rng& rng, TestLedger& ledger,
               std::vector<std::uint8_t>& verdict) {
  if (strat.assignment == BatchAssignment::kShuffle) shuffle(members, rng);
  const std::span<const std::uint32_t> all(members);
  for (std::size_t start = 0; start < all.size(); start += n) {
    const auto pool = all.subspan(start, std::min<std::size_t>(n, all.size() - start));
    if (!run_batch_test(pop, pool, err, rng, ledger)) continue;
    for (auto id : pool) {
      verdict[id] = individual_verdict(pop.infected[id], mode,
                                       strat.sequential_cap, err, rng, ledger);
    }
  }
}

void run_individual(const Population& pop, const Strategy& strat,
                    TerminalMode mode, const ErrorModel& err, Rng& rng,
                    TestLedger& ledger, std::vector<std::uint8_t>& verdict) {
  for (std::size_t i = 0; i < pop.size(); ++i) {
    verdict[i] = individual_verdict(pop.infected[i], mode,
                                    strat.sequential_cap, err, rng, ledger);
  }
}

void run_optimal_single(const Population& pop, const Strategy& strat,
                        const ErrorModel& err, Rng& rng, TestLedger& ledger,
                        std::vector<std::uint8_t>& verdict) {
  const double p = planning_rate(pop, strat, err, rng, ledger);
  const auto best = find_optimal_batch({p, err, 1.0});
  if (!best) {
    run_individual(pop, strat, TerminalMode::kSequential, err, rng, ledger,
                   verdict);
    return;
  }
  one_round(pop, everyone(pop), best->n_star, strat, TerminalMode::kSequential,
            err, rng, ledger, verdict);
}

// Row and column pools over one grid of `count` people laid out k per row;
// the last row may be short.
void run_grid(const Population& pop, std::uint32_t offset, int count, int k,
              const Strategy& strat, const ErrorModel& err, Rng& rng,
              TestLedger& ledger, std::vector<std::uint8_t>& flagged) {
  const int rows = (count + k - 1) / k;
  const int cols = std::min(k, count);
  std::vector<std::uint8_t> row_inf(rows, 0), col_inf(cols, 0);
  for (int i = 0; i < count; ++i) {
    if (pop.infected[offset + i]) {
      row_inf[i / k] = 1;
      col_inf[i % k] = 1;
    }
  }
  std::vector<std::uint8_t> row_any(rows, 0), col_any(cols, 0);
  std::vector<std::uint8_t> rpos(rows), cpos(cols);
  std::vector<std::uint8_t> hit(count, 0);
  for (int rep = 0; rep < strat.replicates; ++rep) {
    for (int r = 0; r < rows; ++r) rpos[r] = draw_pool(row_inf[r], err, rng, ledger);
    for (int c = 0; c < cols; ++c) cpos[c] = draw_pool(col_inf[c], err, rng, ledger);
    for (int r = 0; r < rows; ++r) row_any[r] |= rpos[r];
    for (int c = 0; c < cols; ++c) col_any[c] |= cpos[c];
    if (strat.matrix_rule == MatrixRule::kPerReplicate) {
      for (int i = 0; i < count; ++i) hit[i] |= rpos[i / k] & cpos[i % k];
    }
  }
  for (int i = 0; i < count; ++i) {
    flagged[offset + i] = strat.matrix_rule == MatrixRule::kAxisUnion
                              ? (row_any[i / k] & col_any[i % k])
                              : hit[i];
  }
}

void run_matrix(const Population& pop, const Strategy& strat,
                const ErrorModel& err, Rng& rng, TestLedger& ledger,
                std::vector<std::uint8_t>& verdict) {
  const std::size_t d = strat.matrix_dimension;
  const std::size_t block = d * d;
  const std::size_t full = pop.size() / block;
  const std::size_t rem = pop.size() % block;
  std::vector<std::uint8_t> flagged(pop.size(), 0);
  for (std::size_t g = 0; g < full; ++g) {
    run_grid(pop, static_cast<std::uint32_t>(g * block), static_cast<int>(block),
             static_cast<int>(d), strat, err, rng, ledger, flagged);
  }
  if (rem > 0) {
    const int k = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(rem))));
    run_grid(pop, static_cast<std::uint32_t>(full * block), static_cast<int>(rem),
             k, strat, err, rng, ledger, flagged);
  }
  for (std::size_t i = 0; i < pop.size(); ++i) {
    if (!flagged[i]) continue;
    verdict[i] = run_sequential_tests(pop.infected[i], strat.sequential_cap,
                                      err, rng, ledger);
  }
}

void run_multistep(const Population& pop, const Strategy& strat,
                   TerminalMode mode, const ErrorModel& err, Rng& rng,
                   TestLedger& ledger, std::vector<std::uint8_t>& verdict) {
  const double p = planning_rate(pop, strat, err, rng, ledger);
  PlanOptions options;
  options.p_cut = strat.p_cut;
  options.prune_below = 0.0;  // realized groups can be larger than expected
  const Plan plan =
      build_plan(p, static_cast<double>(pop.size()), err, options);
  const auto nodes = plan.nodes();

  std::vector<Members> groups(nodes.size());
  groups[0] = everyone(pop);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    Members group = std::move(groups[i]);
    if (group.empty()) continue;
    const PlanNode& node = nodes[i];
    if (node.disposition == Disposition::kCleared) continue;
    if (node.disposition != Disposition::kContinue) {
      for (auto id : group) {
        verdict[id] = individual_verdict(pop.infected[id], mode,
                                         strat.sequential_cap, err, rng, ledger);
      }
      continue;
    }
    if (strat.assignment == BatchAssignment::kShuffle) shuffle(group, rng);
    Members& neg = groups[node.negative_child];
    Members& pos = groups[node.positive_child];
    const std::size_t n = node.state.batch_size;
    const std::span<const std::uint32_t> all(group);
    for (std::size_t start = 0; start < all.size(); start += n) {
      const auto pool = all.subspan(start, std::min(n, all.size() - start));
      Members& dest = run_batch_test(pop, pool, err, rng, ledger) ? pos : neg;
      dest.insert(dest.end(), pool.begin(), pool.end());
    }
  }
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  // Rejection sampling keeps the result exactly uniform.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

std::size_t Population::infected_count() const {
  return static_cast<std::size_t>(
      std::count(infected.begin(), infected.end(), std::uint8_t{1}));
}

Population generate_population(std::size_t size, double p,
                               std::uint64_t seed) {
  if (size == 0) throw InvalidArgument("population size must be positive");
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidArgument("infection rate must lie in [0, 1]");
  }
  Population pop;
  pop.true_rate = p;
  pop.infected.resize(size);
  Rng rng(seed);
  for (auto& x : pop.infected) x = rng.bernoulli(p);
  return pop;
}

std::string Strategy::label() const {
  if (!name.empty()) return name;
  return std::string(1, static_cast<char>('A' + static_cast<int>(kind)));
}

void Strategy::validate() const {
  if (fixed_batch_size < 1) throw InvalidArgument("fixed batch size must be >= 1");
  if (matrix_dimension < 2) throw InvalidArgument("matrix dimension must be >= 2");
  if (replicates < 1) throw InvalidArgument("replicates must be >= 1");
  if (sequential_cap < 1) throw InvalidArgument("sequential cap must be >= 1");
  if (!(p_cut > 0.0 && p_cut <= 1.0)) throw InvalidArgument("p_cut must lie in (0, 1]");
  if (pilot && (pilot_batch_size < 1 || pilot_size < pilot_batch_size)) {
    throw InvalidArgument("pilot sample must hold at least one pool");
  }
}

Strategy strategy_from_label(std::string_view label) {
  if (label.size() == 1) {
    const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(label[0])));
    if (c >= 'A' && c <= 'F') {
      Strategy s;
      s.kind = static_cast<StrategyKind>(c - 'A');
      return s;
    }
  }
  throw InvalidArgument("unknown strategy '" + std::string(label) +
                        "' (expected one of A-F)");
}

bool run_batch_test(const Population& pop,
                    std::span<const std::uint32_t> members,
                    const ErrorModel& err, Rng& rng, TestLedger& ledger) {
  if (members.empty()) throw InvalidArgument("a pool needs at least one member");
  bool any = false;
  for (auto id : members) any = any || pop.infected[id];
  return draw_pool(any, err, rng, ledger);
}

bool run_individual_test(bool infected, const ErrorModel& err, Rng& rng,
                         TestLedger& ledger) {
  ++ledger.individual_tests;
  return rng.bernoulli(infected ? 1.0 - err.beta() : err.alpha());
}

bool run_sequential_tests(bool infected, int cap, const ErrorModel& err,
                          Rng& rng, TestLedger& ledger) {
  for (int i = 0; i < cap; ++i) {
    if (run_individual_test(infected, err, rng, ledger)) return true;
  }
  return false;
}

StrategyResult run_strategy(const Population& pop, const Strategy& strat,
                            const ErrorModel& err, Rng& rng) {
  strat.validate();
  TestLedger ledger;
  std::vector<std::uint8_t> verdict(pop.size(), 0);
  switch (strat.kind) {
    case StrategyKind::kA:
      run_individual(pop, strat, TerminalMode::kSingleIndividual, err, rng,
                     ledger, verdict);
      break;
    case StrategyKind::kB:
      one_round(pop, everyone(pop), strat.fixed_batch_size, strat,
                TerminalMode::kSingleIndividual, err, rng, ledger, verdict);
      break;
    case StrategyKind::kC:
      run_optimal_single(pop, strat, err, rng, ledger, verdict);
      break;
    case StrategyKind::kD:
      run_matrix(pop, strat, err, rng, ledger, verdict);
      break;
    case StrategyKind::kE:
      run_multistep(pop, strat, TerminalMode::kSingleIndividual, err, rng,
                    ledger, verdict);
      break;
    case StrategyKind::kF:
      run_multistep(pop, strat, TerminalMode::kSequential, err, rng, ledger,
                    verdict);
      break;
  }
  StrategyResult out;
  out.confusion = tally(pop, verdict);
  out.batch_tests = ledger.batch_tests;
  out.individual_tests = ledger.individual_tests;
  return out;
}

double estimate_pilot_rate(const Population& pop,
                           std::span<const std::uint32_t> sample, int n_guess,
                           const ErrorModel& err, Rng& rng, TestLedger& ledger,
                           double p_max) {
  if (n_guess < 1) throw InvalidArgument("pilot batch size must be >= 1");
  const std::size_t pools = sample.size() / n_guess;
  if (pools == 0) {
    throw InvalidArgument("pilot sample is smaller than one pool");
  }
  std::size_t negatives = 0;
  for (std::size_t b = 0; b < pools; ++b) {
    if (!run_batch_test(pop, sample.subspan(b * n_guess, n_guess), err, rng,
                        ledger)) {
      ++negatives;
    }
  }
  const double observed = static_cast<double>(negatives) / pools;
  const double a = std::clamp(observed, err.beta() + kPilotEpsilon,
                              1.0 - err.alpha() - kPilotEpsilon);
  const double q = invert_batch_negative_rate(a, n_guess, err);
  return std::min(1.0 - q, p_max);
}

}  // namespace pooltest
