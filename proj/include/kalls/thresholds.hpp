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

// Closed-form quantities of the KALLS analysis: confidence radii, the
// margin width, adaptive label budgets and the feasibility diagnostics.
//
// Every function here is pure. Parameters outside their mathematical domain
// raise std::domain_error at this boundary; inside KALLS every per-point
// confidence level is at most delta/32 and therefore always admissible.

#pragma once

#include <cstdint>
#include <limits>
#include <string>

namespace kalls {

/// (alpha, L)-smoothness with respect to the marginal, in ambient dimension d.
struct SmoothnessParams {
  double alpha = 1.0;
  double L = 2.0;
  int d = 1;

  void validate() const;
  bool operator==(const SmoothnessParams&) const = default;
};

/// Margin-noise exponent beta and constant C.
struct MarginParams {
  double beta = 1.0;
  double C = 1.0;

  void validate() const;
  bool operator==(const MarginParams&) const = default;
};

/// Doubling constant; balls of mass below mass_floor are exempt.
struct DoublingParams {
  double c_db = 2.0;
  double mass_floor = 1e-3;

  void validate() const;
  bool operator==(const DoublingParams&) const = default;
};

enum class BudgetMode {
  kStrictPaper,   // every request costs one unit, cached or not
  kCachedLabels,  // only fresh draws cost
};

// How EstProb realizes its ball-membership draws. Both produce the same law:
// per-draw samples pool points one at a time, binomial counts the pool ball
// once and draws each doubling block as a Binomial(block, mass) variate.
enum class PoolSampling {
  kPerDraw,
  kBinomial,
};

std::string to_string(BudgetMode mode);
std::string to_string(PoolSampling mode);
BudgetMode budget_mode_from_string(const std::string& name);
PoolSampling pool_sampling_from_string(const std::string& name);

struct KallsConfig {
  double epsilon = 0.2;
  double delta = 0.05;
  std::int64_t n = 1000;
  double c_const = 8.0;
  int u_const = 50;
  double lb_factor = 0.1;
  BudgetMode budget_mode = BudgetMode::kStrictPaper;
  PoolSampling pool_sampling = PoolSampling::kBinomial;
  // Evaluate every active-set record in Reliable instead of stopping at the
  // first one that certifies the point.
  bool reliable_full_evaluation = false;

  void validate() const;
  bool operator==(const KallsConfig&) const = default;
};

/// Returned by label_budget_k when the budget does not fit in int64.
inline constexpr std::int64_t kInfeasibleBudget =
    std::numeric_limits<std::int64_t>::max();

/// Delta = max(eps/2, (eps/(2C))^(1/(beta+1))).
double margin_delta(double epsilon, const MarginParams& margin);

/// Anytime confidence radius b_{delta,k}. Requires 0 < delta < 1/e, k >= 1.
double confidence_radius(double delta, std::int64_t k);

/// Smallest k >= 1 with confidence_radius(delta, k) < level.
std::int64_t min_k_radius_below(double delta, double level);

/// Unrounded k(eps, delta): (c/Delta^2)[log 1/d + loglog 1/d + loglog(512 sqrt(e)/Delta)].
double label_budget_real(double epsilon, double delta,
                         const MarginParams& margin, double c_const);

/// Ceiling of label_budget_real, saturating at kInfeasibleBudget.
std::int64_t label_budget_k(double epsilon, double delta,
                            const MarginParams& margin, double c_const);

/// Adaptive budget at a point whose regression gap |eta - 1/2| is eta_gap:
/// (c/(4 gap^2))[log 1/d + loglog 1/d + loglog(256 sqrt(e)/gap)].
double adaptive_label_bound(double eta_gap, double delta_s, double c_const);

/// phi_n = sqrt((log 1/delta + loglog 1/delta) / n).
double phi_n(std::int64_t n, double delta);

/// delta_s = delta / (32 s^2), s >= 1.
double per_point_delta(double delta, std::int64_t s);

struct FeasibilityReport {
  double delta_margin = 0;
  double k_eps_delta = 0;      // k(eps, delta), unrounded
  double phi_n = 0;
  // Polynomial parts only; the polylog factors hidden in O~ are omitted.
  double budget_bound = 0;     // (1/eps)^((2a+d-ab)/(a(b+1)))
  double pool_rate_bound = 0;  // (1/eps)^((2a+d)/(a(b+1)))
  // Right-hand side of the EstProb pool condition evaluated at the given w,
  // and the smallest w satisfying it.
  double pool_estprob_rhs = 0;
  double pool_estprob_min = 0;
  double p_eps = 0;            // (31 Delta / (1024 L))^(d/alpha)
  double p_tilde_eps = 0;      // (Delta / (128 L))^(d/alpha)
  double covering_T = 0;       // log(8/delta) / p_tilde_eps
  bool alpha_beta_below_d = false;
  bool budget_ok = false;
  bool pool_rate_ok = false;
  bool pool_estprob_ok = false;
  bool pool_covers_T = false;
};

/// Diagnostic only: never throws on infeasible inputs, reports instead.
FeasibilityReport feasibility_report(const KallsConfig& config,
                                     const SmoothnessParams& smooth,
                                     const MarginParams& margin,
                                     std::int64_t w);

}  // namespace kalls
