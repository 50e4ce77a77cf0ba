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

#include "kalls/kalls.hpp"

#include "kalls/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kalls {

const char* to_string(StopReason reason) {
  return reason == StopReason::kBudgetExhausted ? "budget_exhausted"
                                                : "pool_exhausted";
}

ConfidentOutcome confident_label(const Pool& pool, LabelOracle& oracle,
                                 Index center_index, std::int64_t k_prime,
                                 std::int64_t t_budget, double delta_s) {
  const std::int64_t cap = std::min(
      {k_prime, t_budget, static_cast<std::int64_t>(pool.size() - 1)});
  if (cap < 1) throw AbstainEmpty("no label request allowed");
  // Validates delta_s before any budget is spent.
  (void)confidence_radius(delta_s, 1);

  const NeighborList near = k_nearest(pool, center_index, cap);
  ConfidentOutcome out;
  out.q.reserve(near.neighbors.size());
  std::int64_t ones = 0;
  for (const Neighbor& nb : near.neighbors) {
    const Label y = oracle.request_label(nb.index);
    out.q.emplace_back(nb.index, y);
    ones += y;
    const auto k = static_cast<std::int64_t>(out.q.size());
    const double mean = static_cast<double>(ones) / static_cast<double>(k);
    if (std::abs(mean - 0.5) > 2.0 * confidence_radius(delta_s, k)) {
      out.cut_off_fired = true;
      break;
    }
  }
  out.eta_hat = static_cast<double>(ones) / static_cast<double>(out.q.size());
  out.y_hat = out.eta_hat >= 0.5 ? 1 : 0;
  return out;
}

bool reliable(const Pool& pool, Index x_index, double delta_s,
              const SmoothnessParams& smooth, const ActiveSet& active,
              const ReliableOptions& options, Rng& rng) {
  if (active.empty()) return false;
  const double volume_exp = smooth.d / smooth.alpha;
  const double accept = 1.0 / g_factor(options.u_const);
  const Vector x = pool.point(x_index);
  bool found = false;
  for (const ActiveRecord& rec : active.records) {
    const double eps_o = std::pow(rec.lb / (64.0 * smooth.L), volume_exp);
    const double threshold = accept * eps_o;
    const double r = euclidean_distance(x, rec.point);
    const auto estimate = [&](const Vector& center) {
      return est_prob(pool, center, r, eps_o, options.u_const, delta_s, rng,
                      options.sampling)
          .p_hat;
    };
    if (options.full_evaluation) {
      const double p_record = estimate(rec.point);
      const double p_x = estimate(x);
      found = found || p_record <= threshold || p_x <= threshold;
    } else if (estimate(rec.point) <= threshold || estimate(x) <= threshold) {
      return true;
    }
  }
  return found;
}

KallsResult run_kalls(const Pool& pool, LabelOracle& oracle,
                      const KallsConfig& config,
                      const SmoothnessParams& smooth,
                      const MarginParams& margin, Rng& rng) {
  config.validate();
  smooth.validate();
  margin.validate();
  if (smooth.d != pool.dim()) {
    throw std::invalid_argument("smoothness dimension differs from the pool");
  }
  if (pool.size() < 2) throw std::invalid_argument("pool needs two points");
  if (oracle.size() != pool.size()) {
    throw std::invalid_argument("oracle and pool sizes differ");
  }
  if (oracle.remaining_budget() != config.n) {
    throw std::invalid_argument("oracle budget must equal config.n");
  }

  const ReliableOptions reliable_options{config.u_const, config.pool_sampling,
                                         config.reliable_full_evaluation};
  KallsResult result;
  RunTrace& trace = result.trace;
  trace.budget = config.n;

  const auto w = static_cast<std::int64_t>(pool.size());
  std::int64_t t = oracle.remaining_budget();
  for (std::int64_t s = 1; t > 0 && s < w; ++s) {
    const Index idx = s - 1;
    const double delta_s = per_point_delta(config.delta, s);
    ++trace.points_scanned;
    if (reliable(pool, idx, delta_s, smooth, result.active, reliable_options,
                 rng)) {
      ++trace.reliable_skips;
      continue;
    }
    const std::int64_t k_prime =
        label_budget_k(config.epsilon, delta_s, margin, config.c_const);
    const ConfidentOutcome out =
        confident_label(pool, oracle, idx, k_prime, t, delta_s);
    const auto queries = static_cast<std::int64_t>(out.q.size());
    const double radius = confidence_radius(delta_s, queries);
    const double lb = std::abs(out.eta_hat - 0.5) - radius;
    t = oracle.remaining_budget();
    trace.informative_indices.push_back(idx);

    PointLog log;
    log.s = s;
    log.index = idx;
    log.delta_s = delta_s;
    log.k_prime = k_prime;
    log.queries = queries;
    log.eta_hat = out.eta_hat;
    log.y_hat = out.y_hat;
    log.radius = radius;
    log.lb = lb;
    log.cut_off = out.cut_off_fired;
    log.accepted = lb >= config.lb_factor * radius;
    const double gap = std::abs(oracle.eta(idx) - 0.5);
    if (gap > 0.0) {
      log.k_tilde = adaptive_label_bound(gap, delta_s, config.c_const);
    }
    if (log.accepted) {
      result.active.records.push_back(
          {pool.point(idx), out.y_hat, lb, idx});
    }
    trace.points.push_back(log);
  }
  trace.labels_spent = oracle.spent();
  trace.fresh_requests = oracle.fresh_requests();
  trace.stopped_reason =
      t <= 0 ? StopReason::kBudgetExhausted : StopReason::kPoolExhausted;
  return result;
}

Label one_nn_classify(const ActiveSet& active, const Vector& query) {
  if (active.empty()) throw EmptyActiveSet("active set is empty");
  const ActiveRecord* best = nullptr;
  double best_distance = 0;
  for (const ActiveRecord& rec : active.records) {
    if (rec.point.size() != query.size()) {
      throw std::invalid_argument("query dimension mismatch");
    }
    const double dist = euclidean_distance(rec.point, query);
    if (best == nullptr || dist < best_distance ||
        (dist == best_distance && rec.source_index < best->source_index)) {
      best = &rec;
      best_distance = dist;
    }
  }
  return best->inferred_label;
}

}  // namespace kalls
