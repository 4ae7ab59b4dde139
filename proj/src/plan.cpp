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

#include "pooltest/plan.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pooltest/error.hpp"
#include "pooltest/optimizer.hpp"

namespace pooltest {
namespace {

constexpr int kSameSignLimit = 3;
constexpr int kSequentialCap = 3;

constexpr std::array<std::string_view, 20> kCasePatterns = {
    "---",   "--+-",  "-+--",  "+---",  "--++-", "-+-+-", "-++--",
    "+--+-", "+-+--", "++---", "+++",   "++-+",  "+-++",  "-+++",
    "++--+", "+-+-+", "+--++", "-++-+", "-+-++", "--+++"};

// Stopping rules other than pruning, in priority order.
Disposition classify(const PlanNode& node, const PlanOptions& options,
                     const ErrorModel& err, int* batch_size) {
  if (node.negatives() >= kSameSignLimit) return Disposition::kCleared;
  if (node.positives() >= kSameSignLimit) return Disposition::kThreePositives;
  if (node.state.p > options.p_cut) return Disposition::kHighRate;
  if (node.state.p == 0.0) {
    // Nothing left to find; an uninfected group is pooled at the cap.
    *batch_size = kMaxBatchSize;
    return Disposition::kContinue;
  }
  const auto best = find_optimal_batch({node.state.p, err, 1.0});
  if (!best || best->n_star <= kMinUsefulBatchSize) {
    return Disposition::kSmallBatch;
  }
  *batch_size = best->n_star;
  return Disposition::kContinue;
}

double individual_tests_per_person(double p, const ErrorModel& err,
                                   TerminalMode mode) {
  return mode == TerminalMode::kSingleIndividual
             ? 1.0
             : sequential_model(p, err).expected_tests_per_person;
}

double detection_probability(const ErrorModel& err, TerminalMode mode) {
  return mode == TerminalMode::kSingleIndividual
             ? 1.0 - err.beta()
             : 1.0 - std::pow(err.beta(), kSequentialCap);
}

double false_flag_probability(const ErrorModel& err, TerminalMode mode) {
  return mode == TerminalMode::kSingleIndividual
             ? err.alpha()
             : 1.0 - std::pow(1.0 - err.alpha(), kSequentialCap);
}

}  // namespace

std::string_view to_string(Disposition d) {
  switch (d) {
    case Disposition::kContinue:
      return "continue";
    case Disposition::kCleared:
      return "cleared";
    case Disposition::kThreePositives:
      return "individual-tests (3 positives)";
    case Disposition::kHighRate:
      return "individual-tests (rate above cut)";
    case Disposition::kSmallBatch:
      return "individual-tests (batch size <= 2)";
    case Disposition::kEmpty:
      return "empty";
  }
  return "unknown";
}

int PlanNode::negatives() const {
  return static_cast<int>(std::count(pattern.begin(), pattern.end(), '-'));
}

int PlanNode::positives() const {
  return static_cast<int>(std::count(pattern.begin(), pattern.end(), '+'));
}

bool PlanNode::needs_individual_tests() const {
  return disposition == Disposition::kThreePositives ||
         disposition == Disposition::kHighRate ||
         disposition == Disposition::kSmallBatch;
}

const PlanNode* Plan::find(std::string_view pattern) const {
  for (const auto& node : nodes_) {
    if (node.pattern == pattern) return &node;
  }
  return nullptr;
}

std::vector<const PlanNode*> Plan::terminals() const {
  std::vector<const PlanNode*> out;
  for (const auto& node : nodes_) {
    if (node.is_terminal() && node.disposition != Disposition::kEmpty) {
      out.push_back(&node);
    }
  }
  return out;
}

Plan build_plan(double p1, double N1, const ErrorModel& err,
                const PlanOptions& options) {
  if (!(p1 > 0.0 && p1 < 1.0)) {
    throw InvalidArgument("initial infection rate must lie in (0, 1)");
  }
  if (!(N1 > 0.0)) {
    throw InvalidArgument("population size must be positive");
  }
  if (!(options.p_cut > 0.0 && options.p_cut <= 1.0)) {
    throw InvalidArgument("p_cut must lie in (0, 1]");
  }

  Plan plan;
  plan.err_ = err;
  plan.options_ = options;
  plan.nodes_.push_back(PlanNode{.pattern = "", .state = {p1, N1, 0}});

  // nodes_ grows while we walk it, which yields breadth-first order.
  for (std::size_t i = 0; i < plan.nodes_.size(); ++i) {
    PlanNode& node = plan.nodes_[i];
    if (i != 0 && node.state.size < options.prune_below) {
      node.disposition = Disposition::kEmpty;
      continue;
    }
    int batch_size = 0;
    node.disposition = classify(node, options, err, &batch_size);
    if (node.disposition != Disposition::kContinue) continue;

    node.state.batch_size = batch_size;
    node.batch_tests =
        static_cast<long long>(std::ceil(node.state.size / batch_size));

    const RoundState parent_state = node.state;
    const std::string parent_pattern = node.pattern;
    const auto neg = subpop_after_negative(parent_state, err);
    const auto pos = subpop_after_positive(parent_state, err);

    const int parent = static_cast<int>(i);
    const int neg_index = static_cast<int>(plan.nodes_.size());
    // push_back may reallocate; `node` is not used past this point.
    plan.nodes_.push_back(PlanNode{.pattern = parent_pattern + '-',
                                   .state = {neg.p, neg.size, 0},
                                   .r = neg.r,
                                   .parent = parent});
    plan.nodes_.push_back(PlanNode{.pattern = parent_pattern + '+',
                                   .state = {pos.p, pos.size, 0},
                                   .r = pos.r,
                                   .parent = parent});
    plan.nodes_[i].negative_child = neg_index;
    plan.nodes_[i].positive_child = neg_index + 1;
  }
  return plan;
}

Plan build_plan(double p1, double N1, const ErrorModel& err, double p_cut) {
  PlanOptions options;
  options.p_cut = p_cut;
  return build_plan(p1, N1, err, options);
}

TestCounts expected_test_counts(const Plan& plan, TerminalMode mode) {
  TestCounts out;
  for (const auto& node : plan.nodes()) {
    if (node.disposition == Disposition::kContinue) {
      out.batch_tests += static_cast<double>(node.batch_tests);
    } else if (node.needs_individual_tests()) {
      out.individual_tests +=
          node.state.size *
          individual_tests_per_person(node.state.p, plan.error_model(), mode);
    }
  }
  out.total = out.batch_tests + out.individual_tests;
  return out;
}

SequentialTestModel sequential_model(double p, const ErrorModel& err) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidArgument("infection rate must lie in [0, 1]");
  }
  const double a = err.alpha();
  const double b = err.beta();
  SequentialTestModel m;
  m.s1 = (1.0 - b) * p + a * (1.0 - p);
  m.s2 = b * (1.0 - b) * p + (1.0 - a) * a * (1.0 - p);
  m.s3 = 1.0 - m.s1 - m.s2;
  m.expected_tests_per_person = m.s1 + 2.0 * m.s2 + 3.0 * m.s3;
  m.detection = 1.0 - b * b * b;
  m.false_positive = 1.0 - (1.0 - a) * (1.0 - a) * (1.0 - a);
  return m;
}

double path_false_negative_rate(std::string_view pattern,
                                bool individually_tested, TerminalMode mode,
                                const ErrorModel& err) {
  const double b = err.beta();
  double rate = 1.0;
  for (char c : pattern) rate *= (c == '-') ? b : 1.0 - b;
  if (individually_tested) rate *= 1.0 - detection_probability(err, mode);
  return rate;
}

std::array<TerminalCase, 20> case_false_negative_rates(const ErrorModel& err) {
  std::array<TerminalCase, 20> out;
  for (std::size_t i = 0; i < kCasePatterns.size(); ++i) {
    const bool individual = i >= 10;
    out[i] = {static_cast<int>(i) + 1, kCasePatterns[i], individual,
              path_false_negative_rate(kCasePatterns[i], individual,
                                       TerminalMode::kSequential, err)};
  }
  return out;
}

double tabulated_rate(double p) {
  if (p <= 0.0 || !std::isfinite(p)) return p;
  const double magnitude = std::floor(std::log10(p));
  const double scale = std::pow(10.0, 1.0 - magnitude);
  return std::round(p * scale) / scale;
}

ProcedureAccuracy analytic_procedure_accuracy(const Plan& plan,
                                              TerminalMode mode,
                                              AccuracyBasis basis) {
  const ErrorModel& err = plan.error_model();
  const bool tabulated = basis == AccuracyBasis::kTabulated;
  ProcedureAccuracy out;
  double weighted_misses = 0.0;
  for (const PlanNode* node : plan.terminals()) {
    const double size =
        tabulated ? std::round(node->state.size) : node->state.size;
    const double p = tabulated ? tabulated_rate(node->state.p) : node->state.p;
    const bool individual = node->needs_individual_tests();
    if (individual) {
      out.infected_individually_tested += size * p;
      out.uninfected_individually_tested += size * (1.0 - p);
    }
    weighted_misses +=
        size * path_false_negative_rate(node->pattern, individual, mode, err);
  }
  const double n1 = plan.population();
  const double infected = n1 * plan.initial_rate();
  const double uninfected = n1 - infected;
  out.sensitivity =
      out.infected_individually_tested * detection_probability(err, mode) /
      infected;
  out.specificity = 1.0 - out.uninfected_individually_tested *
                              false_flag_probability(err, mode) / uninfected;
  out.case_weighted_false_negative_rate = weighted_misses / n1;
  return out;
}

}  // namespace pooltest
