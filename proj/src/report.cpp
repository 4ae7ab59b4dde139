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

#include "pooltest/report.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <fmt/format.h>

#include "pooltest/config.hpp"
#include "pooltest/error.hpp"

namespace pooltest {
namespace {

const SummaryStat& stat_of(const CellSummary& c, const std::string& measure) {
  if (measure == "accuracy") return c.accuracy;
  if (measure == "sensitivity") return c.sensitivity;
  if (measure == "specificity") return c.specificity;
  if (measure == "ppv") return c.ppv;
  if (measure == "npv") return c.npv;
  if (measure == "tests") return c.total_tests;
  throw InvalidArgument("unknown plot measure '" + measure + "'");
}

std::vector<std::string> strategy_order(const SimulationReport& r) {
  std::vector<std::string> out;
  for (const auto& s : r.config.strategies) out.push_back(s.label());
  return out;
}

// ".9689" in the style of the published tables.
std::string short_measure(const Measure& m) {
  if (!m) return "NA";
  std::string s = fmt::format("{:.4f}", *m);
  if (s.rfind("0.", 0) == 0) s.erase(0, 1);
  return s;
}

std::string mean_sd(const SummaryStat& s, bool count) {
  const auto f = count ? format_count : short_measure;
  return fmt::format("{} ({})", f(s.mean), f(s.sd));
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace

std::string format_measure(const Measure& m) {
  return m ? fmt::format("{:.4f}", *m) : "NA";
}

std::string format_count(const Measure& m) {
  return m ? fmt::format("{}", std::llround(*m)) : "NA";
}

std::string report_csv(const SimulationReport& report) {
  std::string out =
      "strategy,rate,acc_mean,acc_std,sens_mean,sens_std,spec_mean,spec_std,"
      "ppv_mean,ppv_std,npv_mean,npv_std,tests_mean,tests_std,batch_tests,"
      "individual_tests\n";
  for (const auto& c : report.cells) {
    out += fmt::format(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", c.strategy, c.rate,
        format_measure(c.accuracy.mean), format_measure(c.accuracy.sd),
        format_measure(c.sensitivity.mean), format_measure(c.sensitivity.sd),
        format_measure(c.specificity.mean), format_measure(c.specificity.sd),
        format_measure(c.ppv.mean), format_measure(c.ppv.sd),
        format_measure(c.npv.mean), format_measure(c.npv.sd),
        format_count(c.total_tests.mean), format_count(c.total_tests.sd),
        format_count(c.batch_tests.mean), format_count(c.individual_tests.mean));
  }
  return out;
}

std::string report_text(const SimulationReport& report) {
  const auto& cfg = report.config;
  std::string out;
  out += "pooltest simulation report\n";
  out += fmt::format("master seed: {}\n", cfg.master_seed);
  out += fmt::format(
      "population {} | repetitions {} | alpha {} | beta {} | p_cut {} | "
      "pilot {}\n",
      cfg.population_size, cfg.repetitions, cfg.err.alpha(), cfg.err.beta(),
      cfg.p_cut, cfg.pilot ? "on" : "off");
  out += "values are mean (standard deviation) over repetitions\n\n";

  constexpr int kLabel = 8;
  constexpr int kCol = 18;
  for (const auto& label : strategy_order(report)) {
    out += fmt::format("strategy {}\n", label);
    out += fmt::format("{:<{}}", "rate", kLabel);
    for (double r : cfg.rates) out += fmt::format("{:>{}}", r, kCol);
    out += '\n';
    const auto row = [&](const char* name, auto&& cell_text) {
      out += fmt::format("{:<{}}", name, kLabel);
      for (double r : cfg.rates) {
        const CellSummary* c = report.find(label, r);
        out += fmt::format("{:>{}}", c ? cell_text(*c) : "-", kCol);
      }
      out += '\n';
    };
    row("Acc.", [](const CellSummary& c) { return mean_sd(c.accuracy, false); });
    row("Sens.", [](const CellSummary& c) { return mean_sd(c.sensitivity, false); });
    row("Spec.", [](const CellSummary& c) { return mean_sd(c.specificity, false); });
    row("PPV", [](const CellSummary& c) { return mean_sd(c.ppv, false); });
    row("NPV", [](const CellSummary& c) { return mean_sd(c.npv, false); });
    row("#Tests", [](const CellSummary& c) { return mean_sd(c.total_tests, true); });
    row("B+Ind", [](const CellSummary& c) {
      return fmt::format("{}+{}", format_count(c.batch_tests.mean),
                         format_count(c.individual_tests.mean));
    });
    out += '\n';
  }
  out += "config\n";
  out += to_json(cfg).dump(2);
  out += '\n';
  return out;
}

const std::vector<std::string>& plot_measures() {
  static const std::vector<std::string> names = {
      "accuracy", "sensitivity", "specificity", "ppv", "npv", "tests"};
  return names;
}

std::string plot_csv(const SimulationReport& report,
                     const std::string& measure) {
  const auto labels = strategy_order(report);
  std::string out = "rate";
  for (const auto& l : labels) out += "," + l;
  out += '\n';
  for (double r : report.config.rates) {
    out += fmt::format("{}", r);
    for (const auto& l : labels) {
      const CellSummary* c = report.find(l, r);
      const Measure m = c ? stat_of(*c, measure).mean : std::nullopt;
      out += "," + (measure == "tests" ? format_count(m) : format_measure(m));
    }
    out += '\n';
  }
  return out;
}

void write_report_files(const SimulationReport& report,
                        const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file(dir / "results.csv", report_csv(report));
  write_file(dir / "report.txt", report_text(report));
  write_file(dir / "config.json", to_json(report.config).dump(2) + "\n");
  if (report.config.plot_data) {
    for (const auto& m : plot_measures()) {
      write_file(dir / ("plot_" + m + ".csv"), plot_csv(report, m));
    }
  }
}

}  // namespace pooltest
