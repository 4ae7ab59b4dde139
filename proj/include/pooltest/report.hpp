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

// Serialization of simulation reports: the per-cell CSV, a readable text
// report and per-measure plot data.

#ifndef POOLTEST_REPORT_HPP_
#define POOLTEST_REPORT_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "pooltest/experiment.hpp"

namespace pooltest {

/// Four decimals, or "NA".
std::string format_measure(const Measure& m);
/// Rounded to a whole number, or "NA".
std::string format_count(const Measure& m);

std::string report_csv(const SimulationReport& report);
std::string report_text(const SimulationReport& report);

/// Measure names accepted by plot_csv.
const std::vector<std::string>& plot_measures();
/// rate, then one column per strategy.
std::string plot_csv(const SimulationReport& report, const std::string& measure);

/// Writes results.csv, report.txt, config.json and (optionally) plot_*.csv.
void write_report_files(const SimulationReport& report,
                        const std::filesystem::path& dir);

}  // namespace pooltest

#endif  // POOLTEST_REPORT_HPP_
