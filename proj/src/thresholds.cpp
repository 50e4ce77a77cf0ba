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

#include "kalls/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kalls {
namespace {

constexpr double kInvE = 1.0 / std::numbers::e;

void require(bool ok, const char* what) {
  if (!ok) throw std::domain_error(what);
}

void require_unit_open(double v, const char* what) {
  require(v > 0.0 && v < 1.0, what);
}

void require_small_delta(double delta) {
  require(delta > 0.0 && delta < kInvE, "confidence must lie in (0, 1/e)");
}

// log(1/delta) + loglog(1/delta)
double confidence_log_terms(double delta) {
  const double l = -std::log(delta);
  return l + std::log(l);
}

}  // namespace

void SmoothnessParams::validate() const {
  require(alpha > 0.0 && alpha <= 1.0, "smoothness alpha must lie in (0, 1]");
  require(L > 1.0, "smoothness L must exceed 1");
  require(d >= 1, "dimension must be positive");
}

void MarginParams::validate() const {
  require(beta >= 0.0, "margin beta must be non-negative");
  require(C >= 1.0, "margin C must be at least 1");
}

void DoublingParams::validate() const {
  require(c_db > 0.0, "doubling constant must be positive");
  require(mass_floor > 0.0 && mass_floor <= 1.0,
          "mass floor must lie in (0, 1]");
}

std::string to_string(BudgetMode mode) {
  return mode == BudgetMode::kStrictPaper ? "strict_paper" : "cached_labels";
}

std::string to_string(PoolSampling mode) {
  return mode == PoolSampling::kPerDraw ? "per_draw" : "binomial";
}

BudgetMode budget_mode_from_string(const std::string& name) {
  if (name == "strict_paper") return BudgetMode::kStrictPaper;
  if (name == "cached_labels") return BudgetMode::kCachedLabels;
  throw std::invalid_argument("unknown budget_mode '" + name + "'");
}

PoolSampling pool_sampling_from_string(const std::string& name) {
  if (name == "per_draw") return PoolSampling::kPerDraw;
  if (name == "binomial") return PoolSampling::kBinomial;
  throw std::invalid_argument("unknown pool_sampling '" + name + "'");
}

void KallsConfig::validate() const {
  require_unit_open(epsilon, "epsilon must lie in (0, 1)");
  require_unit_open(delta, "delta must lie in (0, 1)");
  require(n >= 0, "label budget must be non-negative");
  require(c_const >= 1.0, "c_const must be at least 1");
  require(u_const >= 7, "u_const must be at least 7");
  require(lb_factor > 0.0, "lb_factor must be positive");
}

double margin_delta(double epsilon, const MarginParams& margin) {
  require_unit_open(epsilon, "epsilon must lie in (0, 1)");
  margin.validate();
  const double tsybakov =
      std::pow(epsilon / (2.0 * margin.C), 1.0 / (margin.beta + 1.0));
  return std::max(epsilon / 2.0, tsybakov);
}

double confidence_radius(double delta, std::int64_t k) {
  require_small_delta(delta);
  require(k >= 1, "k must be at least 1");
  const double kd = static_cast<double>(k);
  // loglog(e k) = log(1 + log k)
  const double sum = confidence_log_terms(delta) + std::log1p(std::log(kd));
  return std::sqrt(2.0 * sum / kd);
}

std::int64_t min_k_radius_below(double delta, double level) {
  require_small_delta(delta);
  require(level > 0.0, "level must be positive");
  std::int64_t hi = 1;
  while (confidence_radius(delta, hi) >= level) {
    require(hi < (std::int64_t{1} << 61), "level too small");
    hi *= 2;
  }
  if (hi == 1) return 1;
  std::int64_t lo = hi / 2;  // radius(lo) >= level
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (confidence_radius(delta, mid) < level) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double label_budget_real(double epsilon, double delta,
                         const MarginParams& margin, double c_const) {
  require_small_delta(delta);
  require(c_const > 0.0, "c_const must be positive");
  const double gap = margin_delta(epsilon, margin);
  const double bracket =
      confidence_log_terms(delta) +
      std::log(std::log(512.0 * std::sqrt(std::numbers::e) / gap));
  return c_const / (gap * gap) * bracket;
}

std::int64_t label_budget_k(double epsilon, double delta,
                            const MarginParams& margin, double c_const) {
  const double k = std::ceil(label_budget_real(epsilon, delta, margin, c_const));
  // 2^63 is the first double that does not fit.
  if (!(k < 9223372036854775808.0)) return kInfeasibleBudget;
  return static_cast<std::int64_t>(k);
}

double adaptive_label_bound(double eta_gap, double delta_s, double c_const) {
  require_small_delta(delta_s);
  require(eta_gap > 0.0 && eta_gap <= 0.5, "eta gap must lie in (0, 1/2]");
  const double bracket =
      confidence_log_terms(delta_s) +
      std::log(std::log(256.0 * std::sqrt(std::numbers::e) / eta_gap));
  return c_const / (4.0 * eta_gap * eta_gap) * bracket;
}

double phi_n(std::int64_t n, double delta) {
  require_small_delta(delta);
  require(n >= 1, "n must be at least 1");
  return std::sqrt(confidence_log_terms(delta) / static_cast<double>(n));
}

double per_point_delta(double delta, std::int64_t s) {
  require(s >= 1, "s must be at least 1");
  const double sd = static_cast<double>(s);
  return delta / (32.0 * sd * sd);
}

FeasibilityReport feasibility_report(const KallsConfig& config,
                                     const SmoothnessParams& smooth,
                                     const MarginParams& margin,
                                     std::int64_t w) {
  FeasibilityReport r;
  const double a = smooth.alpha;
  const double b = margin.beta;
  const double d = smooth.d;
  const double eps = config.epsilon;
  const double delta = config.delta;
  const double volume_exp = d / a;

  r.delta_margin = margin_delta(eps, margin);
  r.alpha_beta_below_d = a * b < d;
  r.budget_bound = std::pow(1.0 / eps, (2 * a + d - a * b) / (a * (b + 1)));
  r.pool_rate_bound = std::pow(1.0 / eps, (2 * a + d) / (a * (b + 1)));
  r.p_eps = std::pow(31.0 * r.delta_margin / (1024.0 * smooth.L), volume_exp);
  r.p_tilde_eps = std::pow(r.delta_margin / (128.0 * smooth.L), volume_exp);
  r.covering_T = std::log(8.0 / delta) / r.p_tilde_eps;

  const bool small_delta = delta < kInvE;
  r.k_eps_delta = small_delta
                      ? label_budget_real(eps, delta, margin, config.c_const)
                      : std::numeric_limits<double>::quiet_NaN();
  r.budget_ok = static_cast<double>(config.n) >= r.budget_bound;

  if (small_delta && config.n >= 1) {
    constexpr double kBarC = 0.1;
    r.phi_n = phi_n(config.n, delta);
    const double v =
        std::pow(kBarC * r.phi_n / (64.0 * smooth.L), volume_exp);
    const auto rhs = [&](double pool) {
      return 400.0 * std::log(12800.0 * pool * pool / (delta * v)) / v;
    };
    // w -> rhs(w) grows only logarithmically, so the iteration contracts.
    double fixed = 400.0 / v;
    for (int i = 0; i < 200; ++i) {
      const double next = rhs(fixed);
      if (std::abs(next - fixed) <= 1e-12 * next) break;
      fixed = next;
    }
    r.pool_estprob_min = fixed;
    if (w >= 1) {
      r.pool_estprob_rhs = rhs(static_cast<double>(w));
      r.pool_estprob_ok = static_cast<double>(w) >= r.pool_estprob_rhs;
    } else {
      r.pool_estprob_rhs = std::numeric_limits<double>::infinity();
    }
  } else {
    r.phi_n = std::numeric_limits<double>::quiet_NaN();
    r.pool_estprob_rhs = std::numeric_limits<double>::quiet_NaN();
    r.pool_estprob_min = std::numeric_limits<double>::quiet_NaN();
  }

  const double wd = static_cast<double>(w);
  r.pool_rate_ok = w >= 1 && wd >= r.pool_rate_bound;
  r.pool_covers_T = w >= 1 && wd >= r.covering_T;
  return r;
}

}  // namespace kalls
