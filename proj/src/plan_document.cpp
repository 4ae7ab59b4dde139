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

#include "pooltest/plan_document.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

namespace pooltest {
namespace {

constexpr int kMaxRounds = 5;

// '-' sorts before '+' among cleared rows and after it among the rest.
bool row_less(const PlanNode* a, const PlanNode* b) {
  const bool ai = a->needs_individual_tests();
  const bool bi = b->needs_individual_tests();
  if (ai != bi) return !ai;
  if (a->pattern.size() != b->pattern.size()) {
    return a->pattern.size() < b->pattern.size();
  }
  const char first = ai ? '+' : '-';
  for (std::size_t i = 0; i < a->pattern.size(); ++i) {
    if (a->pattern[i] != b->pattern[i]) return a->pattern[i] == first;
  }
  return false;
}

std::string rate_text(double p) { return fmt::format("{:.2g}", tabulated_rate(p)); }

std::string size_text(double n) { return fmt::format("{}", std::llround(n)); }

std::string pct(double x, int digits) {
  return fmt::format("{:.{}f}%", 100.0 * x, digits);
}

}  // namespace

std::vector<const PlanNode*> display_order(const Plan& plan) {
  auto rows = plan.terminals();
  std::stable_sort(rows.begin(), rows.end(), row_less);
  return rows;
}

std::string plan_document_text(const Plan& plan) {
  const PlanNode& root = plan.root();
  const auto& err = plan.error_model();
  std::string out;
  out += "Multi-step pooling plan\n";
  out += fmt::format(
      "population {} | infection rate {} | alpha {} | beta {} | p_cut {}\n",
      size_text(plan.population()), plan.initial_rate(), err.alpha(),
      err.beta(), plan.options().p_cut);
  if (root.disposition == Disposition::kContinue) {
    out += fmt::format("Round 1: {} tests with batch size {}\n\n",
                       root.batch_tests, root.state.batch_size);
  } else {
    out += fmt::format("Round 1: no pooling, {}\n\n", to_string(root.disposition));
  }

  const auto rows = display_order(plan);
  if (!rows.empty() && !rows.front()->pattern.empty()) {
    out += fmt::format("{:<8}", "pattern");
    for (int r = 2; r <= kMaxRounds; ++r) {
      out += fmt::format("| {:<7}{:>7}{:>5} ", fmt::format("p{}", r),
                         fmt::format("N{}", r), fmt::format("n{}", r));
    }
    out += fmt::format("| {:<7}{:>7}  {}\n", "p", "N", "disposition");
    std::set<const PlanNode*> shown;
    for (const PlanNode* row : rows) {
      out += fmt::format("{:<8}", row->pattern);
      for (std::size_t len = 1; len < kMaxRounds; ++len) {
        if (len >= row->pattern.size()) {
          out += fmt::format("| {:<7}{:>7}{:>5} ", "", "", "");
          continue;
        }
        const PlanNode* n = plan.find(std::string_view(row->pattern).substr(0, len));
        // '*' marks where a round's pooled tests are counted.
        const bool first = shown.insert(n).second;
        out += fmt::format("| {:<7}{:>7}{:>5} ", rate_text(n->state.p),
                           size_text(n->state.size) + (first ? "*" : " "),
                           n->state.batch_size);
      }
      out += fmt::format("| {:<7}{:>7}  {}\n", rate_text(row->state.p),
                         size_text(row->state.size), to_string(row->disposition));
    }
    out += "* first appearance; pooled tests for that round are counted here\n\n";
  }

  for (const auto mode : {TerminalMode::kSingleIndividual, TerminalMode::kSequential}) {
    const bool single = mode == TerminalMode::kSingleIndividual;
    const auto counts = expected_test_counts(plan, mode);
    const auto exact = analytic_procedure_accuracy(plan, mode);
    const auto shown = analytic_procedure_accuracy(plan, mode, AccuracyBasis::kTabulated);
    out += fmt::format("{} follow-up\n",
                       single ? "Single individual" : "Sequential (up to 3 tests)");
    out += fmt::format("  expected tests: {} ({} batch + {} individual)\n",
                       std::llround(counts.total), std::llround(counts.batch_tests),
                       std::llround(counts.individual_tests));
    out += fmt::format("  sensitivity {} (tabulated {}), specificity {} (tabulated {})\n",
                       pct(exact.sensitivity, 2), pct(shown.sensitivity, 2),
                       pct(exact.specificity, 3), pct(shown.specificity, 3));
  }
  const auto fn = analytic_procedure_accuracy(plan, TerminalMode::kSequential);
  out += fmt::format("Case-weighted false negative rate (sequential): {:.5f}\n",
                     fn.case_weighted_false_negative_rate);
  return out;
}

nlohmann::ordered_json plan_document_json(const Plan& plan) {
  using nlohmann::ordered_json;
  ordered_json nodes = ordered_json::array();
  for (const auto& n : plan.nodes()) {
    ordered_json j = {{"pattern", n.pattern},
                      {"round", n.round()},
                      {"p", n.state.p},
                      {"size", n.state.size},
                      {"r", n.r},
                      {"disposition", std::string(to_string(n.disposition))}};
    if (n.disposition == Disposition::kContinue) {
      j["batch_size"] = n.state.batch_size;
      j["batch_tests"] = n.batch_tests;
    }
    nodes.push_back(std::move(j));
  }
  ordered_json modes = ordered_json::object();
  for (const auto mode : {TerminalMode::kSingleIndividual, TerminalMode::kSequential}) {
    const auto c = expected_test_counts(plan, mode);
    const auto a = analytic_procedure_accuracy(plan, mode);
    const auto t = analytic_procedure_accuracy(plan, mode, AccuracyBasis::kTabulated);
    modes[mode == TerminalMode::kSingleIndividual ? "single" : "sequential"] = {
        {"batch_tests", c.batch_tests},
        {"individual_tests", c.individual_tests},
        {"total_tests", c.total},
        {"sensitivity", a.sensitivity},
        {"specificity", a.specificity},
        {"tabulated_sensitivity", t.sensitivity},
        {"tabulated_specificity", t.specificity},
        {"case_weighted_false_negative_rate", a.case_weighted_false_negative_rate}};
  }
  return {{"population", plan.population()},
          {"infection_rate", plan.initial_rate()},
          {"alpha", plan.error_model().alpha()},
          {"beta", plan.error_model().beta()},
          {"p_cut", plan.options().p_cut},
          {"nodes", nodes},
          {"totals", modes}};
}

}  // namespace pooltest
