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

#include "pooltest/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "pooltest/error.hpp"

namespace pooltest {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

template <typename T>
void read_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void reject_unknown(const json& j, const std::set<std::string>& known,
                    const char* where) {
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) {
      throw InvalidArgument(std::string("unknown key '") + key + "' in " + where);
    }
  }
}

std::string to_string(BatchAssignment a) {
  return a == BatchAssignment::kShuffle ? "shuffle" : "order-preserving";
}

std::string to_string(MatrixRule r) {
  return r == MatrixRule::kPerReplicate ? "per-replicate" : "axis-union";
}

}  // namespace

void ExperimentConfig::validate() const {
  if (population_size == 0) throw InvalidArgument("population_size must be positive");
  if (population_size > UINT32_MAX) throw InvalidArgument("population_size too large");
  if (rates.empty()) throw InvalidArgument("at least one infection rate is required");
  for (double p : rates) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw InvalidArgument("infection rates must lie in [0, 1]");
    }
  }
  if (strategies.empty()) throw InvalidArgument("at least one strategy is required");
  if (repetitions < 1) throw InvalidArgument("repetitions must be >= 1");
  if (!(p_cut > 0.0 && p_cut <= 1.0)) throw InvalidArgument("p_cut must lie in (0, 1]");
  std::set<std::string> labels;
  for (const auto& s : strategies) {
    s.validate();
    if (!labels.insert(s.label()).second) {
      throw InvalidArgument("duplicate strategy label '" + s.label() +
                            "'; give one of them a name");
    }
  }
}

void ExperimentConfig::apply_shared_settings() {
  for (auto& s : strategies) {
    s.pilot = pilot;
    s.p_cut = p_cut;
  }
}

std::vector<Strategy> default_strategies() {
  return parse_strategy_list("A,B,C,D,E,F");
}

std::vector<Strategy> parse_strategy_list(const std::string& labels) {
  std::vector<Strategy> out;
  std::stringstream ss(labels);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(strategy_from_label(item));
  }
  if (out.empty()) throw InvalidArgument("empty strategy list");
  return out;
}

ordered_json to_json(const Strategy& s) {
  ordered_json j = {{"kind", std::string(1, static_cast<char>('A' + static_cast<int>(s.kind)))}};
  if (!s.name.empty()) j["name"] = s.name;
  j.update(ordered_json{
          {"fixed_batch_size", s.fixed_batch_size},
          {"matrix_dimension", s.matrix_dimension},
          {"replicates", s.replicates},
          {"sequential_cap", s.sequential_cap},
          {"assignment", to_string(s.assignment)},
          {"matrix_rule", to_string(s.matrix_rule)},
          {"pilot_size", s.pilot_size},
          {"pilot_batch_size", s.pilot_batch_size}});
  return j;
}

Strategy strategy_from_json(const json& j) {
  if (j.is_string()) return strategy_from_label(j.get<std::string>());
  if (!j.is_object() || !j.contains("kind")) {
    throw InvalidArgument("a strategy is a label or an object with 'kind'");
  }
  reject_unknown(j,
                 {"kind", "name", "fixed_batch_size", "matrix_dimension", "replicates",
                  "sequential_cap", "assignment", "matrix_rule", "pilot_size",
                  "pilot_batch_size"},
                 "strategy");
  Strategy s = strategy_from_label(j.at("kind").get<std::string>());
  read_if(j, "name", s.name);
  read_if(j, "fixed_batch_size", s.fixed_batch_size);
  read_if(j, "matrix_dimension", s.matrix_dimension);
  read_if(j, "replicates", s.replicates);
  read_if(j, "sequential_cap", s.sequential_cap);
  read_if(j, "pilot_size", s.pilot_size);
  read_if(j, "pilot_batch_size", s.pilot_batch_size);
  if (j.contains("assignment")) {
    const auto a = j.at("assignment").get<std::string>();
    if (a == "shuffle") {
      s.assignment = BatchAssignment::kShuffle;
    } else if (a == "order-preserving") {
      s.assignment = BatchAssignment::kOrderPreserving;
    } else {
      throw InvalidArgument("assignment must be 'order-preserving' or 'shuffle'");
    }
  }
  if (j.contains("matrix_rule")) {
    const auto r = j.at("matrix_rule").get<std::string>();
    if (r == "per-replicate") {
      s.matrix_rule = MatrixRule::kPerReplicate;
    } else if (r == "axis-union") {
      s.matrix_rule = MatrixRule::kAxisUnion;
    } else {
      throw InvalidArgument("matrix_rule must be 'axis-union' or 'per-replicate'");
    }
  }
  return s;
}

ordered_json to_json(const ExperimentConfig& c) {
  ordered_json strategies = ordered_json::array();
  for (const auto& s : c.strategies) strategies.push_back(to_json(s));
  return {{"population_size", c.population_size},
          {"rates", c.rates},
          {"alpha", c.err.alpha()},
          {"beta", c.err.beta()},
          {"strategies", strategies},
          {"repetitions", c.repetitions},
          {"seed", c.master_seed},
          {"pilot", c.pilot},
          {"p_cut", c.p_cut},
          {"plot_data", c.plot_data}};
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
  reject_unknown(j,
                 {"population_size", "rates", "alpha", "beta", "strategies",
                  "repetitions", "seed", "out_dir", "pilot", "p_cut",
                  "plot_data"},
                 "config");
  ExperimentConfig c;
  try {
    read_if(j, "population_size", c.population_size);
    read_if(j, "rates", c.rates);
    double alpha = c.err.alpha();
    double beta = c.err.beta();
    read_if(j, "alpha", alpha);
    read_if(j, "beta", beta);
    c.err = ErrorModel(alpha, beta);
    if (j.contains("strategies")) {
      c.strategies.clear();
      for (const auto& s : j.at("strategies")) {
        c.strategies.push_back(strategy_from_json(s));
      }
    } else {
      c.strategies = default_strategies();
    }
    read_if(j, "repetitions", c.repetitions);
    read_if(j, "seed", c.master_seed);
    read_if(j, "out_dir", c.out_dir);
    read_if(j, "pilot", c.pilot);
    read_if(j, "p_cut", c.p_cut);
    read_if(j, "plot_data", c.plot_data);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("bad config value: ") + e.what());
  }
  c.apply_shared_settings();
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw InvalidArgument("cannot parse " + path + ": " + e.what());
  }
  return config_from_json(j);
}

}  // namespace pooltest
