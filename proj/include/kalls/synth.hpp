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

// Synthetic binary problems with an analytic regression function, their Bayes
// classifier, certified assumption constants and empirical checkers for the
// smoothness, margin and doubling assumptions.

#pragma once

#include "kalls/thresholds.hpp"
#include "kalls/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kalls {

enum class Family {
  kPowerMarginUniform1d,   // P_X = U[0,1]
  kPowerMarginGaussian1d,  // P_X = N(0,1)
  kDiscreteAtoms,          // M equal atoms at (j + 1/2)/M
  kProductUniformNd,       // P_X = U[0,1]^d, margin on the first coordinate
};

std::string to_string(Family family);
Family family_from_string(std::string_view name);

/// Everything needed to rebuild a problem.
struct ProblemSpec {
  Family family = Family::kPowerMarginUniform1d;
  double kappa = 1.0;
  int d = 1;
  int atoms = 64;  // discrete family only; must be even

  bool operator==(const ProblemSpec&) const = default;
};

struct CertifiedConstants {
  std::optional<SmoothnessParams> smoothness;
  std::optional<MarginParams> margin;
  std::optional<DoublingParams> doubling;
};

/// Immutable synthetic problem.
///
/// Each family maps a point to a score t(x) in [0,1] whose law under P_X is
/// uniform (or uniform on a grid), and sets
///   eta(x) = 1/2 + (1/2) sign(2t - 1) |2t - 1|^kappa.
/// Because |eta(x) - eta(z)| is controlled by |t(x) - t(z)|, and the latter by
/// the marginal mass of B(x, |x - z|), the smoothness constants hold exactly.
/// kappa = 0 is the noiseless step eta = 1{t >= 1/2}; it carries no certified
/// smoothness constants.
class SyntheticProblem {
 public:
  SyntheticProblem(const ProblemSpec& spec, std::uint64_t seed);

  const ProblemSpec& spec() const { return spec_; }
  Family family() const { return spec_.family; }
  double kappa() const { return spec_.kappa; }
  int dim() const { return spec_.d; }
  std::uint64_t seed() const { return seed_; }
  const CertifiedConstants& certified() const { return certified_; }

  double score(const Vector& x) const;
  double eta(const Vector& x) const;
  Label bayes(const Vector& x) const { return eta(x) >= 0.5 ? 1 : 0; }

  Vector sample(Rng& rng) const;
  /// n draws as the columns of a d x n matrix.
  Matrix sample(Rng& rng, Index n) const;
  /// Stream derived from the problem seed, e.g. sampler("pool").
  Rng sampler(std::string_view stream) const { return make_rng(seed_, stream); }

  /// Exact P_X of the open ball B(x, r).
  double ball_mass(const Vector& x, double r) const;
  /// Exact P_X(|eta - 1/2| <= eps).
  double margin_mass(double eps) const;
  /// Centers whose balls the doubling check exempts regardless of radius
  /// (the Gaussian tails beyond the mass_floor quantiles).
  bool doubling_exempt_center(const Vector& x, double mass_floor) const;

 private:
  ProblemSpec spec_;
  std::uint64_t seed_;
  CertifiedConstants certified_;
};

SyntheticProblem make_problem(Family family, double kappa, int d,
                              std::uint64_t seed, int atoms = 64);

/// Volume of B(center, r) intersected with the unit cube [0,1]^d.
double ball_cube_volume(const Vector& center, double r);

enum class Assumption { kH1a, kH1b, kH2, kH3, kH4 };
const char* to_string(Assumption a);

struct AssumptionReport {
  Assumption assumption = Assumption::kH3;
  std::int64_t checked = 0;  // pairs, epsilons or balls examined
  std::int64_t skipped = 0;  // balls exempt from the doubling check
  double max_violation = 0;  // <= tolerance means the assumption held
  double tolerance = 0;
  bool passed = false;
};

/// |eta(x) - eta(z)| - L P_X(B(x, |x - z|))^(alpha/d).
double smoothness_violation(const SyntheticProblem& problem, const Vector& x,
                            const Vector& z, const SmoothnessParams& params);

/// Samples n_pairs pairs from P_X. Uses the certified constants unless
/// `params` is given.
AssumptionReport check_smoothness(
    const SyntheticProblem& problem, std::int64_t n_pairs, Rng& rng,
    const std::optional<SmoothnessParams>& params = std::nullopt);

/// Compares P_X(|eta - 1/2| <= eps) with C eps^beta, with "<=" in place of the
/// strict inequality (the uniform family attains equality).
AssumptionReport check_margin(
    const SyntheticProblem& problem, const std::vector<double>& eps_grid,
    const std::optional<MarginParams>& params = std::nullopt);

/// Checks P_X(B(x,r)) <= C_db P_X(B(x,r/2)) on balls of mass >= mass_floor.
AssumptionReport check_doubling(
    const SyntheticProblem& problem,
    const std::vector<std::pair<Vector, double>>& grid,
    const std::optional<DoublingParams>& params = std::nullopt);

/// n points of (0,1], geometric below 0.05 and linear above.
std::vector<double> margin_grid(int n);

/// Centers drawn from P_X, each paired with n_radii geometric radii spanning
/// the support.
std::vector<std::pair<Vector, double>> doubling_grid(
    const SyntheticProblem& problem, int n_centers, int n_radii, Rng& rng);

}  // namespace kalls
