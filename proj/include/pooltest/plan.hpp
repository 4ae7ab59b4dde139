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

// Multi-step pooling plan.
//
// Each subpopulation is identified by the signs of the pooled results its
// members have seen so far ("-+-" = negative, positive, negative). A node is
// pooled again with a freshly optimized batch size until one of the stopping
// rules fires:
//
//   * three negatives          -> members are cleared
//   * three positives          -> members get individual tests
//   * infection rate > p_cut   -> members get individual tests
//   * optimal batch size <= 2  -> members get individual tests
//
// The tree therefore has depth at most five. Sizes are expected values and
// stay real-valued; only batch counts are rounded (up).

#ifndef POOLTEST_PLAN_HPP_
#define POOLTEST_PLAN_HPP_

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pooltest/probability.hpp"

namespace pooltest {

enum class Disposition {
  kContinue,        ///< pooled again next round
  kCleared,         ///< three negatives
  kThreePositives,  ///< individual tests after three positives
  kHighRate,        ///< individual tests, rate above p_cut
  kSmallBatch,      ///< individual tests, optimal batch size <= 2
  kEmpty,           ///< expected size below the pruning threshold
};

std::string_view to_string(Disposition d);

/// How members of an individually-tested terminal are examined.
enum class TerminalMode {
  kSingleIndividual,  ///< one individual test each
  kSequential,        ///< up to three tests, stopping at the first positive
};

struct PlanNode {
  std::string pattern;  ///< batch results so far; empty for the root
  RoundState state;     ///< batch_size is 0 unless disposition is kContinue
  double r = 0.0;       ///< P(infected batch) on the branch that created it
  Disposition disposition = Disposition::kContinue;
  long long batch_tests = 0;  ///< ceil(size / batch_size), charged once
  int parent = -1;
  int negative_child = -1;
  int positive_child = -1;

  int round() const { return static_cast<int>(pattern.size()) + 1; }
  int negatives() const;
  int positives() const;
  bool is_terminal() const { return disposition != Disposition::kContinue; }
  bool needs_individual_tests() const;
};

struct PlanOptions {
  double p_cut = 0.30;
  /// Children whose expected size is below this many people are pruned.
  double prune_below = 1.0;
};

class Plan {
 public:
  const ErrorModel& error_model() const { return err_; }
  double initial_rate() const { return nodes_.front().state.p; }
  double population() const { return nodes_.front().state.size; }
  const PlanOptions& options() const { return options_; }

  const PlanNode& root() const { return nodes_.front(); }
  /// Nodes in breadth-first order; the root is first.
  std::span<const PlanNode> nodes() const { return nodes_; }
  const PlanNode* find(std::string_view pattern) const;
  std::vector<const PlanNode*> terminals() const;

 private:
  friend Plan build_plan(double, double, const ErrorModel&, const PlanOptions&);

  ErrorModel err_;
  PlanOptions options_;
  std::vector<PlanNode> nodes_;
};

/// Throws InvalidArgument unless 0 < p1 < 1, N1 > 0 and 0 < p_cut <= 1.
Plan build_plan(double p1, double N1, const ErrorModel& err,
                const PlanOptions& options);
Plan build_plan(double p1, double N1, const ErrorModel& err,
                double p_cut = 0.30);

struct TestCounts {
  double batch_tests = 0.0;
  double individual_tests = 0.0;
  double total = 0.0;
};

TestCounts expected_test_counts(const Plan& plan, TerminalMode mode);

/// Up to three individual tests, stopping at the first positive.
struct SequentialTestModel {
  double s1 = 0.0;  ///< P(first test positive)
  double s2 = 0.0;  ///< P(negative, then positive)
  double s3 = 0.0;  ///< P(first two negative); a third test is always run
  double expected_tests_per_person = 0.0;
  double detection = 0.0;        ///< 1 - beta^3
  double false_positive = 0.0;   ///< 1 - (1 - alpha)^3
};

SequentialTestModel sequential_model(double p, const ErrorModel& err);

/// Probability that an infected person who follows `pattern` is missed.
/// Each negative batch contributes beta and each positive (1 - beta); an
/// individually tested terminal multiplies by beta (single) or beta^3
/// (sequential).
double path_false_negative_rate(std::string_view pattern,
                                bool individually_tested, TerminalMode mode,
                                const ErrorModel& err);

struct TerminalCase {
  int number = 0;  ///< 1..20
  std::string_view pattern;
  bool individually_tested = false;
  double false_negative_rate = 0.0;
};

/// The twenty terminal patterns reachable under the three-of-a-kind rule,
/// with their false negative rates under sequential individual testing.
std::array<TerminalCase, 20> case_false_negative_rates(const ErrorModel& err);

enum class AccuracyBasis {
  kExact,      ///< propagated expectations as computed
  kTabulated,  ///< sizes rounded to whole people, rates to two digits
};

struct ProcedureAccuracy {
  double sensitivity = 0.0;
  double specificity = 0.0;
  double infected_individually_tested = 0.0;
  double uninfected_individually_tested = 0.0;
  /// sum over terminals of path_false_negative_rate * size, over N1.
  double case_weighted_false_negative_rate = 0.0;
};

ProcedureAccuracy analytic_procedure_accuracy(
    const Plan& plan, TerminalMode mode,
    AccuracyBasis basis = AccuracyBasis::kExact);

/// Rounds to two significant digits, as plan tables display rates.
double tabulated_rate(double p);

}  // namespace pooltest

#endif  // POOLTEST_PLAN_HPP_
