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

#include "kalls/oracle.hpp"

#include <stdexcept>

namespace kalls {

LabelOracle::LabelOracle(Vector eta_at_pool, std::uint64_t seed,
                         std::int64_t budget, BudgetMode mode)
    : eta_(std::move(eta_at_pool)),
      seed_(seed),
      initial_budget_(budget),
      remaining_(budget),
      mode_(mode),
      cache_(static_cast<std::size_t>(eta_.size()), -1) {
  if (budget < 0) throw std::invalid_argument("budget must be non-negative");
  if ((eta_.array() < 0.0).any() || (eta_.array() > 1.0).any()) {
    throw std::invalid_argument("eta values must lie in [0, 1]");
  }
}

Label LabelOracle::request_label(Index index) {
  if (index < 0 || index >= eta_.size()) {
    throw std::out_of_range("label request outside the pool");
  }
  auto& slot = cache_[static_cast<std::size_t>(index)];
  const bool fresh = slot < 0;
  if ((fresh || mode_ == BudgetMode::kStrictPaper) && remaining_ < 1) {
    throw BudgetExhausted("label budget exhausted");
  }
  if (fresh) {
    const std::uint64_t key =
        mix64(seed_ ^ mix64(static_cast<std::uint64_t>(index)));
    slot = unit_interval(key) < eta_(index) ? 1 : 0;
    ++fresh_requests_;
    --remaining_;
  } else if (mode_ == BudgetMode::kStrictPaper) {
    --remaining_;
  }
  ++total_requests_;
  return slot;
}

}  // namespace kalls
