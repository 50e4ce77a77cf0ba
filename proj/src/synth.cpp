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

#include "kalls/synth.hpp"

#include "kalls/neighbors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace kalls {
namespace {

constexpr double kCheckTolerance = 1e-9;

double normal_upper_tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }
double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// P(a < Z < b) for Z ~ N(0,1), evaluated on the side that avoids cancellation.
double normal_interval(double a, double b) {
  if (b <= a) return 0.0;
  if (a >= 0.0) return normal_upper_tail(a) - normal_upper_tail(b);
  if (b <= 0.0) return normal_upper_tail(-b) - normal_upper_tail(-a);
  return 1.0 - normal_upper_tail(b) - normal_upper_tail(-a);
}

double unit_ball_volume(int d) {
  return std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

// 24-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
  static constexpr int kPoints = 24;
  std::array<double, kPoints> nodes{};
  std::array<double, kPoints> weights{};

  GaussLegendre() {
    for (int i = 0; i < kPoints; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (kPoints + 0.5));
      double dp = 0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= kPoints; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = kPoints * (x * p1 - p0) / (x * x - 1.0);
        const double step = p1 / dp;
        x -= step;
        if (std::abs(step) < 1e-16) break;
      }
      nodes[i] = x;
      weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }
};

const GaussLegendre& gauss_legendre() {
  static const GaussLegendre rule;
  return rule;
}

// Integral over t in [a, b] of sqrt(r^2 - t^2), for -r <= a <= b <= r.
double half_chord_integral(double a, double b, double r) {
  auto primitive = [r](double t) {
    const double h = std::sqrt(std::max(0.0, r * r - t * t));
    return 0.5 * (t * h + r * r * std::asin(std::clamp(t / r, -1.0, 1.0)));
  };
  return b > a ? primitive(b) - primitive(a) : 0.0;
}

// Area of the disc of radius r at the origin within {u <= x, v <= y}.
double disc_quadrant_area(double x, double y, double r) {
  x = std::clamp(x, -r, r);
  const double s = std::sqrt(std::max(0.0, r * r - y * y));
  auto clip = [&](double a, double b) { return std::pair{std::max(a, -r), std::min(b, x)}; };
  if (y >= r) {
    const auto [a, b] = clip(-r, r);
    return 2 * half_chord_integral(a, b, r);
  }
  if (y <= -r) return 0.0;
  // Inside |t| < s the slice is [-h, y]; outside, y >= 0 keeps the full chord.
  const auto [a, b] = clip(-s, s);
  double area = half_chord_integral(a, b, r) + y * std::max(0.0, b - a);
  if (y >= 0) {
    const auto [a1, b1] = clip(-r, -s);
    const auto [a2, b2] = clip(s, r);
    area += 2 * (half_chord_integral(a1, b1, r) + half_chord_integral(a2, b2, r));
  }
  return area;
}

// Volume of the ball of radius r centred at the origin intersected with the
// box prod [lo_j, hi_j], lo_j <= 0 <= hi_j. Slices along the first axis with
// t = r sin(theta); the integrand is analytic between the angles at which the
// slice radius touches a face, edge or corner of the remaining box, so each
// such piece gets its own Gauss-Legendre rule. Two dimensions are closed form.
double box_ball_volume(const double* lo, const double* hi, int d, double r) {
  if (r <= 0.0) return 0.0;
  if (d == 1) return std::max(0.0, std::min(hi[0], r) - std::max(lo[0], -r));
  if (d == 2) {
    return disc_quadrant_area(hi[0], hi[1], r) - disc_quadrant_area(lo[0], hi[1], r) -
           disc_quadrant_area(hi[0], lo[1], r) + disc_quadrant_area(lo[0], lo[1], r);
  }
  bool inside = true;
  for (int j = 0; j < d; ++j) inside = inside && -lo[j] >= r && hi[j] >= r;
  if (inside) return unit_ball_volume(d) * std::pow(r, d);

  const double a = std::max(lo[0], -r);
  const double b = std::min(hi[0], r);
  if (a >= b) return 0.0;
  const double theta_a = std::asin(std::clamp(a / r, -1.0, 1.0));
  const double theta_b = std::asin(std::clamp(b / r, -1.0, 1.0));

  std::vector<double> cuts{theta_a, theta_b};
  const int sub = d - 1;
  int combos = 1;
  for (int j = 0; j < sub; ++j) combos *= 3;
  for (int code = 1; code < combos; ++code) {
    double sq = 0;
    int c = code;
    for (int j = 1; j <= sub; ++j, c /= 3) {
      if (c % 3 == 1) sq += lo[j] * lo[j];
      if (c % 3 == 2) sq += hi[j] * hi[j];
    }
    const double rho = std::sqrt(sq);
    if (rho > 0.0 && rho < r) {
      const double th = std::acos(rho / r);
      for (const double cut : {th, -th}) {
        if (cut > theta_a && cut < theta_b) cuts.push_back(cut);
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());

  const GaussLegendre& gl = gauss_legendre();
  double total = 0;
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double half = 0.5 * (cuts[p + 1] - cuts[p]);
    if (half <= 0.0) continue;
    const double mid = 0.5 * (cuts[p + 1] + cuts[p]);
    double piece = 0;
    for (int i = 0; i < GaussLegendre::kPoints; ++i) {
      // u -> (3u - u^3)/2 flattens the (theta - cut)^(3/2) behaviour at the
      // piece ends.
      const double u = gl.nodes[i];
      const double th = mid + half * 0.5 * u * (3.0 - u * u);
      const double jacobian = 1.5 * (1.0 - u * u);
      const double slice = r * std::cos(th);
      piece += gl.weights[i] * jacobian * slice *
               box_ball_volume(lo + 1, hi + 1, sub, slice);
    }
    total += half * piece;
  }
  return total;
}

double power_eta(double t, double kappa) {
  if (kappa == 0.0) return t >= 0.5 ? 1.0 : 0.0;
  const double u = 2.0 * t - 1.0;
  const double mag = std::pow(std::abs(u), kappa);
  return 0.5 + 0.5 * (u > 0 ? mag : (u < 0 ? -mag : 0.0));
}

CertifiedConstants certify(const ProblemSpec& spec) {
  CertifiedConstants c;
  const double kappa = spec.kappa;
  const int d = spec.d;
  DoublingParams doubling;
  switch (spec.family) {
    case Family::kPowerMarginUniform1d: doubling = {2.0, 1e-3}; break;
    case Family::kPowerMarginGaussian1d: doubling = {10.0, 1e-3}; break;
    case Family::kDiscreteAtoms: doubling = {3.0, 1e-3}; break;
    case Family::kProductUniformNd: doubling = {std::pow(2.0, d), 1e-3}; break;
  }
  c.doubling = doubling;

  if (kappa == 0.0) {
    // |eta - 1/2| = 1/2 everywhere: mass 0 below eps = 1/2, mass 1 from there.
    c.margin = MarginParams{1.0, 2.0};
    return c;
  }
  // eta is alpha-Hoelder in the score with constant `hoelder`.
  const double alpha = std::min(kappa, 1.0);
  const double hoelder = kappa <= 1.0 ? 1.0 : kappa;
  double L = std::max(2.0, hoelder);
  if (spec.family == Family::kProductUniformNd) {
    // Ball mass in the cube is at least (V_d / 2^d) min(rho, 1/2)^d.
    const double corner = unit_ball_volume(d) / std::pow(2.0, d);
    const double scale = std::pow(corner, -alpha / d);
    L = std::max({L, hoelder * scale, std::pow(2.0, alpha) * scale});
  }
  c.smoothness = SmoothnessParams{alpha, L, d};
  const double margin_c = spec.family == Family::kDiscreteAtoms
                              ? std::pow(2.0, 1.0 + 1.0 / kappa)
                              : std::pow(2.0, 1.0 / kappa);
  c.margin = MarginParams{1.0 / kappa, margin_c};
  return c;
}

AssumptionReport finish(Assumption which, std::int64_t checked,
                        std::int64_t skipped, double worst) {
  AssumptionReport r;
  r.assumption = which;
  r.checked = checked;
  r.skipped = skipped;
  r.max_violation = worst;
  r.tolerance = kCheckTolerance;
  r.passed = worst <= kCheckTolerance;
  return r;
}

}  // namespace

std::string to_string(Family family) {
  switch (family) {
    case Family::kPowerMarginUniform1d: return "power_margin_uniform_1d";
    case Family::kPowerMarginGaussian1d: return "power_margin_gaussian_1d";
    case Family::kDiscreteAtoms: return "discrete_atoms";
    case Family::kProductUniformNd: return "product_uniform_nd";
  }
  return "unknown";
}

Family family_from_string(std::string_view name) {
  for (const Family f :
       {Family::kPowerMarginUniform1d, Family::kPowerMarginGaussian1d,
        Family::kDiscreteAtoms, Family::kProductUniformNd}) {
    if (to_string(f) == name) return f;
  }
  throw std::invalid_argument("unknown problem family '" + std::string(name) +
                              "'");
}

const char* to_string(Assumption a) {
  switch (a) {
    case Assumption::kH1a: return "H1a";
    case Assumption::kH1b: return "H1b";
    case Assumption::kH2: return "H2";
    case Assumption::kH3: return "H3";
    case Assumption::kH4: return "H4";
  }
  return "?";
}

SyntheticProblem::SyntheticProblem(const ProblemSpec& spec, std::uint64_t seed)
    : spec_(spec), seed_(seed) {
  if (!(spec.kappa >= 0.0) || !std::isfinite(spec.kappa)) {
    throw std::domain_error("kappa must be a finite non-negative number");
  }
  if (spec.d < 1) throw std::domain_error("dimension must be positive");
  if (spec.family != Family::kProductUniformNd && spec.d != 1) {
    throw std::domain_error(to_string(spec.family) + " is one-dimensional");
  }
  if (spec.family == Family::kDiscreteAtoms &&
      (spec.atoms < 2 || spec.atoms % 2 != 0)) {
    throw std::domain_error("discrete_atoms needs an even atom count >= 2");
  }
  certified_ = certify(spec_);
}

SyntheticProblem make_problem(Family family, double kappa, int d,
                              std::uint64_t seed, int atoms) {
  return SyntheticProblem(ProblemSpec{family, kappa, d, atoms}, seed);
}

double SyntheticProblem::score(const Vector& x) const {
  if (x.size() != spec_.d) throw std::invalid_argument("point dimension mismatch");
  if (spec_.family == Family::kPowerMarginGaussian1d) return normal_cdf(x(0));
  return std::clamp(x(0), 0.0, 1.0);
}

double SyntheticProblem::eta(const Vector& x) const {
  return power_eta(score(x), spec_.kappa);
}

Vector SyntheticProblem::sample(Rng& rng) const {
  Vector x(spec_.d);
  switch (spec_.family) {
    case Family::kPowerMarginGaussian1d:
      x(0) = std::normal_distribution<double>(0.0, 1.0)(rng);
      break;
    case Family::kDiscreteAtoms: {
      const int j = std::uniform_int_distribution<int>(0, spec_.atoms - 1)(rng);
      x(0) = (j + 0.5) / spec_.atoms;
      break;
    }
    case Family::kPowerMarginUniform1d:
    case Family::kProductUniformNd: {
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      for (int j = 0; j < spec_.d; ++j) x(j) = unit(rng);
      break;
    }
  }
  return x;
}

Matrix SyntheticProblem::sample(Rng& rng, Index n) const {
  Matrix out(spec_.d, n);
  for (Index i = 0; i < n; ++i) out.col(i) = sample(rng);
  return out;
}

double SyntheticProblem::ball_mass(const Vector& x, double r) const {
  if (x.size() != spec_.d) throw std::invalid_argument("point dimension mismatch");
  if (r <= 0.0) return 0.0;
  switch (spec_.family) {
    case Family::kPowerMarginUniform1d:
      return std::max(0.0, std::min(x(0) + r, 1.0) - std::max(x(0) - r, 0.0));
    case Family::kPowerMarginGaussian1d:
      return normal_interval(x(0) - r, x(0) + r);
    case Family::kDiscreteAtoms: {
      int inside = 0;
      for (int j = 0; j < spec_.atoms; ++j) {
        if (std::abs((j + 0.5) / spec_.atoms - x(0)) < r) ++inside;
      }
      return static_cast<double>(inside) / spec_.atoms;
    }
    case Family::kProductUniformNd:
      return ball_cube_volume(x, r);
  }
  return 0.0;
}

double SyntheticProblem::margin_mass(double eps) const {
  if (spec_.family == Family::kDiscreteAtoms) {
    int inside = 0;
    for (int j = 0; j < spec_.atoms; ++j) {
      const double t = (j + 0.5) / spec_.atoms;
      if (std::abs(power_eta(t, spec_.kappa) - 0.5) <= eps) ++inside;
    }
    return static_cast<double>(inside) / spec_.atoms;
  }
  if (spec_.kappa == 0.0) return eps >= 0.5 ? 1.0 : 0.0;
  // The score is uniform and |eta - 1/2| = |2t - 1|^kappa / 2.
  return std::min(1.0, std::pow(2.0 * eps, 1.0 / spec_.kappa));
}

bool SyntheticProblem::doubling_exempt_center(const Vector& x,
                                              double mass_floor) const {
  if (spec_.family != Family::kPowerMarginGaussian1d) return false;
  return std::abs(normal_cdf(x(0)) - 0.5) > 0.5 - mass_floor;
}

double ball_cube_volume(const Vector& center, double r) {
  const int d = static_cast<int>(center.size());
  std::vector<double> lo(d);
  std::vector<double> hi(d);
  for (int j = 0; j < d; ++j) {
    const double c = std::clamp(center(j), 0.0, 1.0);
    lo[j] = -c;
    hi[j] = 1.0 - c;
  }
  return std::clamp(box_ball_volume(lo.data(), hi.data(), d, r), 0.0, 1.0);
}

double smoothness_violation(const SyntheticProblem& problem, const Vector& x,
                            const Vector& z, const SmoothnessParams& params) {
  const double rho = euclidean_distance(x, z);
  const double mass = problem.ball_mass(x, rho);
  return std::abs(problem.eta(x) - problem.eta(z)) -
         params.L * std::pow(mass, params.alpha / params.d);
}

AssumptionReport check_smoothness(const SyntheticProblem& problem,
                                  std::int64_t n_pairs, Rng& rng,
                                  const std::optional<SmoothnessParams>& params) {
  if (n_pairs < 1) throw std::invalid_argument("n_pairs must be positive");
  const auto& chosen = params ? params : problem.certified().smoothness;
  if (!chosen) throw std::invalid_argument("problem has no certified smoothness");
  double worst = -std::numeric_limits<double>::infinity();
  for (std::int64_t i = 0; i < n_pairs; ++i) {
    const Vector x = problem.sample(rng);
    const Vector z = problem.sample(rng);
    worst = std::max(worst, smoothness_violation(problem, x, z, *chosen));
  }
  return finish(Assumption::kH3, n_pairs, 0, worst);
}

AssumptionReport check_margin(const SyntheticProblem& problem,
                              const std::vector<double>& eps_grid,
                              const std::optional<MarginParams>& params) {
  if (eps_grid.empty()) throw std::invalid_argument("empty epsilon grid");
  const auto& chosen = params ? params : problem.certified().margin;
  if (!chosen) throw std::invalid_argument("problem has no certified margin");
  double worst = -std::numeric_limits<double>::infinity();
  for (const double eps : eps_grid) {
    const double bound = chosen->C * std::pow(eps, chosen->beta);
    worst = std::max(worst, problem.margin_mass(eps) - bound);
  }
  return finish(Assumption::kH2, static_cast<std::int64_t>(eps_grid.size()), 0,
                worst);
}

AssumptionReport check_doubling(
    const SyntheticProblem& problem,
    const std::vector<std::pair<Vector, double>>& grid,
    const std::optional<DoublingParams>& params) {
  if (grid.empty()) throw std::invalid_argument("empty doubling grid");
  const auto& chosen = params ? params : problem.certified().doubling;
  if (!chosen) throw std::invalid_argument("problem has no certified doubling");
  double worst = -std::numeric_limits<double>::infinity();
  std::int64_t checked = 0;
  std::int64_t skipped = 0;
  for (const auto& [x, r] : grid) {
    const double mass = problem.ball_mass(x, r);
    if (mass < chosen->mass_floor ||
        problem.doubling_exempt_center(x, chosen->mass_floor)) {
      ++skipped;
      continue;
    }
    ++checked;
    // Relative violation: ratios sit exactly at C_db for the uniform families.
    const double half = problem.ball_mass(x, r / 2.0);
    worst = std::max(worst, (mass - chosen->c_db * half) / mass);
  }
  if (checked == 0) worst = 0.0;
  return finish(Assumption::kH4, checked, skipped, worst);
}

std::vector<double> margin_grid(int n) {
  if (n < 4) throw std::invalid_argument("margin grid needs at least 4 points");
  std::vector<double> grid;
  const int low = n / 2;
  for (int i = 0; i < low; ++i) {
    grid.push_back(1e-4 * std::pow(0.05 / 1e-4, static_cast<double>(i) / low));
  }
  const int high = n - low;
  for (int i = 0; i < high; ++i) {
    grid.push_back(0.05 + 0.95 * static_cast<double>(i + 1) / high);
  }
  return grid;
}

std::vector<std::pair<Vector, double>> doubling_grid(
    const SyntheticProblem& problem, int n_centers, int n_radii, Rng& rng) {
  if (n_centers < 1 || n_radii < 2) {
    throw std::invalid_argument("doubling grid needs centers and two radii");
  }
  const double span = problem.family() == Family::kPowerMarginGaussian1d
                          ? 12.0
                          : 2.0 * std::sqrt(static_cast<double>(problem.dim()));
  const double smallest = 1e-4;
  std::vector<std::pair<Vector, double>> grid;
  grid.reserve(static_cast<std::size_t>(n_centers) * n_radii);
  for (int c = 0; c < n_centers; ++c) {
    const Vector x = problem.sample(rng);
    for (int k = 0; k < n_radii; ++k) {
      const double r =
          smallest * std::pow(span / smallest, static_cast<double>(k) / (n_radii - 1));
      grid.emplace_back(x, r);
    }
  }
  return grid;
}

}  // namespace kalls
