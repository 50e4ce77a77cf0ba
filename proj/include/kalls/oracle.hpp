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

// Budgeted access to noisy labels of pool points.

#pragma once

#include "kalls/thresholds.hpp"
#include "kalls/types.hpp"

#include <cstdint>
#include <vector>

namespace kalls {

/// Noisy labeling oracle over a fixed pool.
///
/// The label of pool point i is a single Bernoulli(eta_i) realization keyed
/// by (seed, i): it is drawn on the first request and every later request
/// returns the same value. Not thread-safe; calls must be serialized.
class LabelOracle {
 public:
  LabelOracle(Vector eta_at_pool, std::uint64_t seed, std::int64_t budget,
              BudgetMode mode = BudgetMode::kStrictPaper);

  /// Throws BudgetExhausted when the call would need budget that is not left.
  Label request_label(Index index);

  std::int64_t initial_budget() const { return initial_budget_; }
  std::int64_t remaining_budget() const { return remaining_; }
  std::int64_t spent() const { return initial_budget_ - remaining_; }
  std::int64_t fresh_requests() const { return fresh_requests_; }
  std::int64_t total_requests() const { return total_requests_; }
  BudgetMode mode() const { return mode_; }
  Index size() const { return eta_.size(); }
  /// True regression value at a pool point (diagnostics only).
  double eta(Index index) const { return eta_(index); }

 private:
  Vector eta_;
  std::uint64_t seed_;
  std::int64_t initial_budget_;
  std::int64_t remaining_;
  BudgetMode mode_;
  std::vector<std::int8_t> cache_;  // -1 until realized
  std::int64_t fresh_requests_ = 0;
  std::int64_t total_requests_ = 0;
};

}  // namespace kalls
