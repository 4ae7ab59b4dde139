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

// pooltest: plan, tables and simulate subcommands.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "pooltest/config.hpp"
#include "pooltest/error.hpp"
#include "pooltest/experiment.hpp"
#include "pooltest/metrics.hpp"
#include "pooltest/optimizer.hpp"
#include "pooltest/plan.hpp"
#include "pooltest/plan_document.hpp"
#include "pooltest/report.hpp"

namespace {

using namespace pooltest;

struct PlanArgs {
  double p = 0.0;
  double n = 100000;
  double alpha = 0.01;
  double beta = 0.15;
  double p_cut = 0.30;
  bool json = false;
};

struct TableArgs {
  std::vector<double> alpha, beta, p;
  std::vector<int> n;
  std::vector<double> sensitivity;
  double specificity = 0.99;
};

struct SimulateArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> reps;
  std::optional<std::string> out_dir;
  std::optional<std::string> strategies;
  std::optional<double> alpha, beta, p_cut;
  std::optional<std::size_t> n;
  std::vector<double> p;
  bool pilot = false;
  bool serial = false;
  bool quiet = false;
};

int cmd_plan(const PlanArgs& a) {
  const Plan plan = build_plan(a.p, a.n, ErrorModel(a.alpha, a.beta), a.p_cut);
  if (a.json) {
    std::cout << plan_document_json(plan).dump(2) << '\n';
  } else {
    std::cout << plan_document_text(plan);
  }
  return 0;
}

std::string opt(const Measure& m) { return format_measure(m); }

void batch_row(double alpha, double beta, double p, std::optional<int> n,
               const char* sizing) {
  const ErrorModel err(alpha, beta);
  std::string size = "NA", per_person = "NA", sp = "NA", ppv = "NA", npv = "NA";
  if (n) {
    size = std::to_string(*n);
    per_person = fmt::format("{:.4f}", expected_tests(*n, {p, err, 1.0}));
    sp = fmt::format("{:.4f}", single_batch_specificity(*n, p, err));
    const auto pv = single_batch_ppv_npv(*n, p, err);
    ppv = opt(pv.ppv);
    npv = opt(pv.npv);
  }
  std::cout << fmt::format("{},{},{},{},{},{},{:.4f},{},{},{}\n", alpha, beta, p,
                           sizing, size, per_person,
                           single_batch_sensitivity(err), sp, ppv, npv);
}

int cmd_tables(TableArgs a) {
  if (!a.sensitivity.empty()) {
    if (a.p.empty()) a.p = {.001, .002, .004, .006, .008, .01, .02, .03, .05, .08, .1, .15, .2};
    std::cout << "p,sensitivity,specificity,ppv,npv\n";
    for (double p : a.p) {
      for (double se : a.sensitivity) {
        const auto pv = ppv_npv(p, se, a.specificity);
        std::cout << fmt::format("{},{},{},{},{}\n", p, se, a.specificity,
                                 opt(pv.ppv), opt(pv.npv));
      }
    }
    return 0;
  }

  struct Block {
    std::vector<double> alpha, beta, p;
    std::vector<int> n;
  };
  std::vector<Block> blocks;
  if (a.alpha.empty() && a.beta.empty() && a.p.empty() && a.n.empty()) {
    const std::vector<double> table1_rates = {
        .001, .002, .003, .004, .005, .006, .007, .008, .009, .01, .02, .03, .04,
        .05,  .06,  .07,  .08,  .09,  .1,   .11,  .12,  .13,  .14, .15, .16, .17,
        .18,  .19,  .2,   .21,  .22,  .23,  .24,  .25};
    blocks.push_back({{0.0}, {0.0}, table1_rates, {}});
    blocks.push_back({{.01}, {.15}, table1_rates, {}});
    blocks.push_back({{.01, .03}, {.1, .15, .2, .25}, {.001, .01, .03, .05, .1}, {10}});
  } else {
    if (a.alpha.empty()) a.alpha = {.01};
    if (a.beta.empty()) a.beta = {.15};
    if (a.p.empty()) a.p = {.001, .01, .03, .05, .1};
    blocks.push_back({a.alpha, a.beta, a.p, a.n});
  }
  std::cout << "alpha,beta,p,sizing,batch_size,tests_per_person,sensitivity,"
               "specificity,ppv,npv\n";
  for (const auto& b : blocks) {
    for (double alpha : b.alpha) {
      for (double beta : b.beta) {
        for (double p : b.p) {
          for (int n : b.n) batch_row(alpha, beta, p, n, "fixed");
          const auto best = find_optimal_batch({p, ErrorModel(alpha, beta), 1.0});
          batch_row(alpha, beta, p,
                    best ? std::optional<int>(best->n_star) : std::nullopt,
                    "optimal");
        }
      }
    }
  }
  return 0;
}

int cmd_simulate(const SimulateArgs& a) {
  ExperimentConfig cfg;
  if (!a.config.empty()) {
    cfg = load_config(a.config);
  } else {
    cfg.strategies = default_strategies();
  }
  if (a.seed) cfg.master_seed = *a.seed;
  if (a.reps) cfg.repetitions = *a.reps;
  if (a.out_dir) cfg.out_dir = *a.out_dir;
  if (a.strategies) cfg.strategies = parse_strategy_list(*a.strategies);
  if (a.alpha || a.beta) {
    cfg.err = ErrorModel(a.alpha.value_or(cfg.err.alpha()),
                         a.beta.value_or(cfg.err.beta()));
  }
  if (a.p_cut) cfg.p_cut = *a.p_cut;
  if (a.n) cfg.population_size = *a.n;
  if (!a.p.empty()) cfg.rates = a.p;
  if (a.pilot) cfg.pilot = true;
  cfg.apply_shared_settings();
  cfg.validate();

  const SimulationReport report =
      a.serial ? run_experiment_serial(cfg) : run_experiment(cfg);
  write_report_files(report, cfg.out_dir);
  if (!a.quiet) std::cout << report_text(report);
  std::cerr << "wrote " << (std::filesystem::path(cfg.out_dir) / "results.csv").string()
            << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Planner and Monte Carlo simulator for multi-step pooled testing"};
  app.require_subcommand(1);

  PlanArgs plan_args;
  auto* plan = app.add_subcommand("plan", "Build and print a multi-step pooling plan");
  plan->add_option("--p", plan_args.p, "Initial infection rate")->required();
  plan->add_option("--n", plan_args.n, "Population size")->capture_default_str();
  plan->add_option("--alpha", plan_args.alpha, "False positive rate")->capture_default_str();
  plan->add_option("--beta", plan_args.beta, "False negative rate")->capture_default_str();
  plan->add_option("--p-cut", plan_args.p_cut, "Rate above which groups are tested individually")
      ->capture_default_str();
  plan->add_flag("--json", plan_args.json, "Emit JSON instead of text");

  TableArgs table_args;
  auto* tables = app.add_subcommand("tables", "Analytic single-batch tables as CSV");
  tables->add_option("--alpha", table_args.alpha, "False positive rates")->delimiter(',');
  tables->add_option("--beta", table_args.beta, "False negative rates")->delimiter(',');
  tables->add_option("--p", table_args.p, "Infection rates")->delimiter(',');
  tables->add_option("--n", table_args.n, "Fixed batch sizes (optimal is always included)")
      ->delimiter(',');
  tables->add_option("--sensitivity", table_args.sensitivity,
                     "Individual-test sensitivities; switches to the PPV/NPV table")
      ->delimiter(',');
  tables->add_option("--specificity", table_args.specificity, "Specificity for the PPV/NPV table")
      ->capture_default_str();

  SimulateArgs sim_args;
  auto* simulate = app.add_subcommand("simulate", "Run the strategy comparison");
  simulate->add_option("--config", sim_args.config, "JSON experiment config");
  simulate->add_option("--seed", sim_args.seed, "Master seed");
  simulate->add_option("--reps", sim_args.reps, "Repetitions per cell");
  simulate->add_option("--out-dir", sim_args.out_dir, "Output directory");
  simulate->add_option("--strategies", sim_args.strategies, "Comma-separated labels, e.g. A,C,F");
  simulate->add_option("--alpha", sim_args.alpha, "False positive rate");
  simulate->add_option("--beta", sim_args.beta, "False negative rate");
  simulate->add_option("--p-cut", sim_args.p_cut, "Individual-testing rate threshold");
  simulate->add_option("--n", sim_args.n, "Population size");
  simulate->add_option("--p", sim_args.p, "Infection rates")->delimiter(',');
  simulate->add_flag("--pilot", sim_args.pilot, "Estimate the rate with a pilot before planning");
  simulate->add_flag("--serial", sim_args.serial, "Use the single-threaded reference runner");
  simulate->add_flag("--quiet", sim_args.quiet, "Do not print the report");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*plan) return cmd_plan(plan_args);
    if (*tables) return cmd_tables(table_args);
    if (*simulate) return cmd_simulate(sim_args);
  } catch (const SimulationError& e) {
    std::cerr << "pooltest: simulation failed at " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "pooltest: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
