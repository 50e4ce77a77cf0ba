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

#include "kalls/estimation.hpp"

#include <random>
#include <stdexcept>

namespace kalls {

BerEstSchedule ber_est_schedule(double epsilon_o, double delta_prime, int u) {
  if (!(epsilon_o > 0.0 && epsilon_o < 1.0)) {
    throw std::domain_error("epsilon_o must lie in (0, 1)");
  }
  if (!(delta_prime > 0.0 && delta_prime < 1.0)) {
    throw std::domain_error("delta' must lie in (0, 1)");
  }
  if (u < 7) throw std::domain_error("u must be at least 7");
  BerEstSchedule s;
  s.K = 4.0 * u / epsilon_o * std::log(8.0 * u / (delta_prime * epsilon_o));
  const double top =
      std::floor(std::log2(u * std::log(2.0 * s.K / delta_prime) / epsilon_o));
  if (top > 62.0) throw std::domain_error("epsilon_o too small for BerEst");
  s.last_stage = static_cast<int>(top);
  s.max_draws = s.last_stage >= 3 ? (std::int64_t{1} << s.last_stage) : 4;
  return s;
}

double g_factor(int t) {
  if (t < 7) throw std::domain_error("g(t) requires t >= 7");
  const double td = t;
  return 1.0 + 8.0 / (3.0 * td) + std::sqrt(2.0 / td);
}

bool ber_est_conclusion_holds(double p_hat, double p, double epsilon_o,
                              int u) {
  const double g = g_factor(u);
  if (p_hat <= epsilon_o / g) return p <= epsilon_o;
  return p >= (2.0 - g) / g * epsilon_o;
}

BerEstResult est_prob(const Pool& pool, const Vector& center, double radius,
                      double epsilon_o, int u, double delta_prime, Rng& rng,
                      PoolSampling mode) {
  if (radius < 0.0) throw std::domain_error("radius must be non-negative");
  if (center.size() != pool.dim()) {
    throw std::invalid_argument("center dimension mismatch");
  }
  if (mode == PoolSampling::kPerDraw) {
    std::uniform_int_distribution<Index> pick(0, pool.size() - 1);
    auto draw = [&]() {
      return euclidean_distance(pool.point(pick(rng)), center) < radius;
    };
    return ber_est(draw, epsilon_o, delta_prime, u);
  }
  const Index inside =
      radius > 0.0 ? count_in_open_ball(pool.points(), center, radius) : 0;
  const double mass =
      static_cast<double>(inside) / static_cast<double>(pool.size());
  auto blocks = [&](std::int64_t count) -> std::int64_t {
    if (inside == 0) return 0;
    if (inside == pool.size()) return count;
    return std::binomial_distribution<std::int64_t>(count, mass)(rng);
  };
  return ber_est_blocks(blocks, epsilon_o, delta_prime, u);
}

}  // namespace kalls
