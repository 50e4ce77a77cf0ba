// Copyright 2026 The kalls Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Experiment configuration for the command-line tool: a single JSON object
// describing one problem, the budget and seed grid and the learner settings.

#pragma once

#include "kalls/synth.hpp"
#include "kalls/thresholds.hpp"
#include "kalls/types.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kalls {

#ifndef KALLS_VERSION
#define KALLS_VERSION "0.0.0"
#endif

inline constexpr const char* kVersion = KALLS_VERSION;

/// Malformed or invalid configuration. The message names the offending line
/// when one can be located.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  ProblemSpec problem;
  Index pool_size = 4000;
  std::vector<std::int64_t> budgets{1000};
  double epsilon = 0.2;
  double delta = 0.05;
  double c_const = 8.0;
  int u_const = 50;
  double lb_factor = 0.1;
  BudgetMode budget_mode = BudgetMode::kStrictPaper;
  PoolSampling pool_sampling = PoolSampling::kBinomial;
  std::vector<std::uint64_t> seeds{1};
  std::int64_t n_test = 20000;
  std::string output = "out";

  /// Learner settings for one budget.
  KallsConfig kalls(std::int64_t budget) const;
  /// Throws ConfigError.
  void validate() const;
  bool operator==(const ExperimentConfig&) const = default;
};

/// Every key is optional; unknown keys and wrongly typed values are errors.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

nlohmann::ordered_json to_json(const ExperimentConfig& config);
/// Pretty-printed JSON that parse_config maps back to an equal config.
std::string serialize_config(const ExperimentConfig& config);

}  // namespace kalls
