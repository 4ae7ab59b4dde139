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

// Experiment configuration and its JSON form.

#ifndef POOLTEST_CONFIG_HPP_
#define POOLTEST_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "pooltest/probability.hpp"
#include "pooltest/simulation.hpp"

namespace pooltest {

struct ExperimentConfig {
  std::size_t population_size = 100000;
  std::vector<double> rates = {0.001, 0.01, 0.03, 0.05, 0.1};
  ErrorModel err{0.01, 0.15};
  std::vector<Strategy> strategies;
  int repetitions = 100;
  std::uint64_t master_seed = 20200917;
  std::string out_dir = "out";
  bool pilot = false;
  double p_cut = 0.30;
  bool plot_data = true;

  /// Throws InvalidArgument when a field is out of range.
  void validate() const;
  /// Pushes the shared pilot and p_cut settings into every strategy.
  void apply_shared_settings();
};

/// All six strategies with default parameters.
std::vector<Strategy> default_strategies();

/// Comma-separated labels, e.g. "A,C,F".
std::vector<Strategy> parse_strategy_list(const std::string& labels);

nlohmann::ordered_json to_json(const Strategy& s);
Strategy strategy_from_json(const nlohmann::json& j);

/// out_dir is left out so an echoed config reproduces a run anywhere.
nlohmann::ordered_json to_json(const ExperimentConfig& c);
/// Missing keys keep their defaults; unknown keys are rejected.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

}  // namespace pooltest

#endif  // POOLTEST_CONFIG_HPP_
