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

// Adaptive Bernoulli-mean estimation and its use for estimating the pool mass
// of an open ball.

#pragma once

#include "kalls/pool.hpp"
#include "kalls/thresholds.hpp"
#include "kalls/types.hpp"

#include <cmath>
#include <concepts>
#include <cstdint>
#include <optional>
#include <type_traits>

namespace kalls {

struct BerEstResult {
  double p_hat = 0;
  std::int64_t draws_used = 0;
  std::int64_t ones = 0;  // p_hat * draws_used, exactly
  bool terminated_early = false;
};

/// The doubling schedule fixed by (eps_o, delta', u).
struct BerEstSchedule {
  double K = 0;              // (4u/eps_o) log(8u/(delta' eps_o))
  int last_stage = 0;        // floor(log2(u log(2K/delta') / eps_o))
  std::int64_t max_draws = 0;
};

/// Validates the parameters: eps_o, delta' in (0,1), u >= 7.
BerEstSchedule ber_est_schedule(double epsilon_o, double delta_prime, int u);

/// g(t) = 1 + 8/(3t) + sqrt(2/t), t >= 7.
double g_factor(int t);

/// True when the estimator's high-probability conclusion holds for the true
/// mean p: p_hat <= eps_o/g(u) implies p <= eps_o, otherwise
/// p >= ((2 - g(u))/g(u)) eps_o.
bool ber_est_conclusion_holds(double p_hat, double p, double epsilon_o, int u);

/// Core estimator over a block source: `draw_block(count)` returns the number
/// of ones among `count` fresh draws. Four draws come first (the first half of
/// the m = 8 block); stage i then tops the sample up to m = 2^i draws and stops
/// once the running mean exceeds u log(2m/delta') / m.
template <typename BlockSource>
  requires std::invocable<BlockSource&, std::int64_t>
BerEstResult ber_est_blocks(BlockSource&& draw_block, double epsilon_o,
                            double delta_prime, int u) {
  const BerEstSchedule schedule =
      ber_est_schedule(epsilon_o, delta_prime, u);
  BerEstResult r;
  r.ones = draw_block(std::int64_t{4});
  r.draws_used = 4;
  for (int i = 3; i <= schedule.last_stage; ++i) {
    const std::int64_t m = std::int64_t{1} << i;
    r.ones += draw_block(m - r.draws_used);
    r.draws_used = m;
    const double md = static_cast<double>(m);
    if (static_cast<double>(r.ones) / md >
        u * std::log(2.0 * md / delta_prime) / md) {
      r.terminated_early = true;
      break;
    }
  }
  r.p_hat = static_cast<double>(r.ones) / static_cast<double>(r.draws_used);
  return r;
}

/// Estimator over a single-draw source returning bool, or std::optional<bool>
/// where std::nullopt signals exhaustion (raised as SamplerExhausted).
template <typename Sampler>
  requires std::invocable<Sampler&>
BerEstResult ber_est(Sampler&& sampler, double epsilon_o, double delta_prime,
                     int u) {
  auto blocks = [&sampler](std::int64_t count) {
    std::int64_t ones = 0;
    for (std::int64_t i = 0; i < count; ++i) {
      const auto draw = sampler();
      if constexpr (std::is_same_v<std::remove_cvref_t<decltype(draw)>,
                                   std::optional<bool>>) {
        if (!draw) throw SamplerExhausted("Bernoulli source exhausted");
        ones += *draw ? 1 : 0;
      } else {
        ones += draw ? 1 : 0;
      }
    }
    return ones;
  };
  return ber_est_blocks(blocks, epsilon_o, delta_prime, u);
}

/// Estimate of the pool mass of the open ball B(center, radius): each draw
/// picks a pool point uniformly with replacement and reports membership.
BerEstResult est_prob(const Pool& pool, const Vector& center, double radius,
                      double epsilon_o, int u, double delta_prime, Rng& rng,
                      PoolSampling mode = PoolSampling::kPerDraw);

}  // namespace kalls
