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

// The KALLS active learner: the Reliable informativeness test, the
// ConfidentLabel adaptive neighbor-label inference, the main scan over the
// pool and the final 1-NN rule over the active set.

#pragma once

#include "kalls/oracle.hpp"
#include "kalls/pool.hpp"
#include "kalls/thresholds.hpp"
#include "kalls/types.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace kalls {

/// An informative point with its inferred label and lower-bound guarantee.
struct ActiveRecord {
  Vector point;
  Label inferred_label = 0;
  double lb = 0;  // lower bound on |eta(point) - 1/2|, up to constants
  Index source_index = 0;
};

struct ActiveSet {
  std::vector<ActiveRecord> records;

  bool empty() const { return records.empty(); }
  std::size_t size() const { return records.size(); }
};

struct ConfidentOutcome {
  Label y_hat = 0;
  std::vector<std::pair<Index, Label>> q;  // in neighbor order
  bool cut_off_fired = false;
  double eta_hat = 0;
};

enum class StopReason { kBudgetExhausted, kPoolExhausted };

const char* to_string(StopReason reason);

/// One ConfidentLabel call inside the scan.
struct PointLog {
  std::int64_t s = 0;  // 1-based scan position
  Index index = 0;     // pool column
  double delta_s = 0;
  std::int64_t k_prime = 0;
  std::int64_t queries = 0;  // |Q_s|
  double eta_hat = 0;
  Label y_hat = 0;
  double radius = 0;  // b_{delta_s, |Q_s|}
  double lb = 0;
  bool cut_off = false;
  bool accepted = false;
  // Adaptive budget at the true regression gap; empty when eta = 1/2.
  std::optional<double> k_tilde;
};

struct RunTrace {
  std::vector<Index> informative_indices;
  std::int64_t budget = 0;
  std::int64_t labels_spent = 0;
  std::int64_t fresh_requests = 0;
  std::int64_t points_scanned = 0;
  std::int64_t reliable_skips = 0;
  StopReason stopped_reason = StopReason::kBudgetExhausted;
  std::vector<PointLog> points;
};

struct KallsResult {
  ActiveSet active;
  RunTrace trace;
};

struct ReliableOptions {
  int u_const = 50;
  PoolSampling sampling = PoolSampling::kBinomial;
  bool full_evaluation = false;
};

/// Requests labels of the successive nearest neighbors of `center_index`
/// until min(k_prime, t_budget, w - 1) labels are held or the cut-off
/// |mean - 1/2| > 2 b_{delta_s,k} fires. Throws AbstainEmpty when no request
/// is possible.
ConfidentOutcome confident_label(const Pool& pool, LabelOracle& oracle,
                                 Index center_index, std::int64_t k_prime,
                                 std::int64_t t_budget, double delta_s);

/// True when some record certifies pool point `x_index`: with
/// eps_o = (lb/(64L))^(d/alpha) and r = |x - x'|, the estimated mass of
/// B(x', r) or of B(x, r) is at most eps_o / g(u). False on an empty set.
bool reliable(const Pool& pool, Index x_index, double delta_s,
              const SmoothnessParams& smooth, const ActiveSet& active,
              const ReliableOptions& options, Rng& rng);

/// Runs the scan. The oracle must hold exactly config.n units of budget;
/// `rng` feeds the pool-sampling draws of Reliable.
KallsResult run_kalls(const Pool& pool, LabelOracle& oracle,
                      const KallsConfig& config,
                      const SmoothnessParams& smooth,
                      const MarginParams& margin, Rng& rng);

/// Label of the record nearest to `query`, ties to the lowest source index.
Label one_nn_classify(const ActiveSet& active, const Vector& query);

}  // namespace kalls
