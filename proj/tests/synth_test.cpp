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

#include <algorithm>
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

namespace kalls {
namespace {

Vector pt(std::initializer_list<double> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

TEST_CASE("regression function values") {
  const auto uniform = make_problem(Family::kPowerMarginUniform1d, 1.0, 1, 0);
  CHECK(uniform.eta(pt({0.75})) == doctest::Approx(0.75));
  CHECK(uniform.bayes(pt({0.75})) == 1);
  CHECK(uniform.eta(pt({0.5})) == 0.5);
  CHECK(uniform.bayes(pt({0.5})) == 1);
  CHECK(uniform.bayes(pt({0.49})) == 0);

  const auto sqrt_margin = make_problem(Family::kPowerMarginUniform1d, 0.5, 1, 0);
  CHECK(sqrt_margin.eta(pt({0.875})) == doctest::Approx(0.5 + 0.5 * std::sqrt(0.75)));
  CHECK(sqrt_margin.eta(pt({0.875})) == doctest::Approx(0.93301).epsilon(1e-5));

  const auto gaussian = make_problem(Family::kPowerMarginGaussian1d, 1.0, 1, 0);
  CHECK(gaussian.eta(pt({0.0})) == 0.5);
  for (double kappa : {0.3, 2.0}) {
    CHECK(make_problem(Family::kPowerMarginGaussian1d, kappa, 1, 0).eta(pt({0.0})) == 0.5);
  }

  const auto step = make_problem(Family::kPowerMarginUniform1d, 0.0, 1, 0);
  CHECK(step.eta(pt({0.2})) == 0.0);
  CHECK(step.eta(pt({0.7})) == 1.0);

  const auto nd = make_problem(Family::kProductUniformNd, 1.0, 3, 0);
  CHECK(nd.eta(pt({0.75, 0.1, 0.9})) == doctest::Approx(0.75));
}

TEST_CASE("eta stays in [0, 1] and is seed independent") {
  for (Family f : {Family::kPowerMarginUniform1d, Family::kPowerMarginGaussian1d,
                   Family::kDiscreteAtoms}) {
    for (double kappa : {0.0, 0.25, 1.0, 3.0}) {
      const auto a = make_problem(f, kappa, 1, 1);
      const auto b = make_problem(f, kappa, 1, 2);
      Rng rng(4);
      for (int i = 0; i < 1000; ++i) {
        const Vector x = a.sample(rng);
        const double e = a.eta(x);
        REQUIRE(e >= 0.0);
        REQUIRE(e <= 1.0);
        REQUIRE(e == b.eta(x));
      }
    }
  }
}

TEST_CASE("Bayes risk of the uniform kappa = 1 problem") {
  const auto p = make_problem(Family::kPowerMarginUniform1d, 1.0, 1, 0);
  Rng rng(12);
  double sum = 0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    const double e = p.eta(p.sample(rng));
    sum += std::min(e, 1 - e);
  }
  CHECK(std::abs(sum / n - 0.25) < 1e-3);
}

TEST_CASE("sampling is reproducible") {
  const auto p = make_problem(Family::kProductUniformNd, 1.0, 4, 77);
  Rng a = p.sampler("pool"), b = p.sampler("pool"), c = p.sampler("oracle");
  const Matrix x = p.sample(a, 50);
  CHECK(x == p.sample(b, 50));
  CHECK(x != p.sample(c, 50));
}

TEST_CASE("certified constants") {
  const auto u = make_problem(Family::kPowerMarginUniform1d, 0.5, 1, 0).certified();
  CHECK(u.smoothness->alpha == 0.5);
  CHECK(u.smoothness->L == 2.0);
  CHECK(u.margin->beta == 2.0);
  CHECK(u.margin->C == 4.0);
  CHECK(u.doubling->c_db == 2.0);
  const auto step = make_problem(Family::kPowerMarginUniform1d, 0.0, 1, 0).certified();
  CHECK_FALSE(step.smoothness.has_value());
  REQUIRE(step.margin.has_value());
  CHECK(make_problem(Family::kProductUniformNd, 1.0, 3, 0).certified().doubling->c_db == 8.0);
}

TEST_CASE("problem validation") {
  CHECK_THROWS(make_problem(Family::kPowerMarginUniform1d, -1.0, 1, 0));
  CHECK_THROWS(make_problem(Family::kPowerMarginUniform1d, 1.0, 2, 0));
  CHECK_THROWS(make_problem(Family::kDiscreteAtoms, 1.0, 1, 0, 7));
  CHECK_THROWS(make_problem(Family::kProductUniformNd, 1.0, 0, 0));
  CHECK_THROWS(family_from_string("gaussian"));
  CHECK(family_from_string("discrete_atoms") == Family::kDiscreteAtoms);
}

TEST_CASE("ball_cube_volume against closed forms and Monte Carlo") {
  CHECK(ball_cube_volume(pt({0.5, 0.5}), 0.4) == doctest::Approx(std::numbers::pi * 0.16));
  CHECK(ball_cube_volume(pt({0.5, 0.5, 0.5}), 0.3) ==
        doctest::Approx(4.0 / 3 * std::numbers::pi * 0.027));
  CHECK(ball_cube_volume(pt({0.0, 0.0}), 0.5) == doctest::Approx(std::numbers::pi * 0.25 / 4));
  CHECK(ball_cube_volume(pt({0.0, 0.0, 0.0}), 1.0) == doctest::Approx(std::numbers::pi / 6));
  CHECK(ball_cube_volume(pt({0.3, 0.9}), 2.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(ball_cube_volume(pt({0.3, 0.9, 0.5}), 2.0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(ball_cube_volume(pt({0.3, 0.9, 0.5, 0.1}), 2.5) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(ball_cube_volume(pt({0.3}), 0.5) == doctest::Approx(0.8));

  Rng rng(8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int d : {2, 3, 4}) {
    for (int trial = 0; trial < 4; ++trial) {
      Vector c(d);
      for (int j = 0; j < d; ++j) c(j) = unit(rng);
      const double r = 0.2 + unit(rng);
      const int n = 200000;
      int inside = 0;
      Vector x(d);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j) x(j) = unit(rng);
        inside += (x - c).norm() < r ? 1 : 0;
      }
      const double mc = static_cast<double>(inside) / n;
      // Floor the standard error so a sample that never hits a thin sliver
      // does not demand an exact match.
      const double se = std::max(std::sqrt(mc * (1 - mc) / n), 1.0 / n);
      CHECK(std::abs(ball_cube_volume(c, r) - mc) < 5 * se);
    }
  }
}

TEST_CASE("margin check on the uniform kappa = 1 problem") {
  const auto p = make_problem(Family::kPowerMarginUniform1d, 1.0, 1, 0);
  CHECK(p.margin_mass(0.25) == doctest::Approx(0.5));
  // Equality at C = 2, beta = 1 is accepted.
  CHECK(check_margin(p, {0.25}).passed);
  CHECK(check_margin(p, margin_grid(1000)).passed);
  CHECK_FALSE(check_margin(p, {0.25}, MarginParams{1.0, 1.9}).passed);
}

TEST_CASE("smoothness check") {
  const auto p = make_problem(Family::kPowerMarginUniform1d, 1.0, 1, 0);
  CHECK(smoothness_violation(p, pt({0.3}), pt({0.3}), {1.0, 2.0, 1}) == 0.0);
  // |eta(0.2) - eta(0.8)| = 0.6 > 0.4 * 0.6.
  CHECK(smoothness_violation(p, pt({0.2}), pt({0.8}), {1.0, 0.4, 1}) > 0);
  Rng rng(3);
  CHECK(check_smoothness(p, 100000, rng).passed);
  CHECK_FALSE(check_smoothness(p, 100000, rng, SmoothnessParams{1.0, 0.4, 1}).passed);
  const auto step = make_problem(Family::kPowerMarginUniform1d, 0.0, 1, 0);
  CHECK_THROWS(check_smoothness(step, 10, rng));
}

TEST_CASE("doubling check") {
  const auto p = make_problem(Family::kPowerMarginUniform1d, 1.0, 1, 0);
  for (double r : {0.01, 0.1, 0.3}) {
    CHECK(p.ball_mass(pt({0.5}), r) / p.ball_mass(pt({0.5}), r / 2) == doctest::Approx(2.0));
  }
  const auto g = make_problem(Family::kPowerMarginGaussian1d, 1.0, 1, 0);
  const AssumptionReport tail = check_doubling(g, {{pt({5.0}), 0.01}});
  CHECK(tail.checked == 0);
  CHECK(tail.skipped == 1);
  CHECK(tail.passed);
  CHECK_FALSE(check_doubling(p, {{pt({0.5}), 0.2}}, DoublingParams{1.5, 1e-3}).passed);
}

TEST_CASE("every family passes at its certified constants") {
  const std::pair<Family, int> families[] = {{Family::kPowerMarginUniform1d, 1},
                                             {Family::kPowerMarginGaussian1d, 1},
                                             {Family::kDiscreteAtoms, 1},
                                             {Family::kProductUniformNd, 2}};
  for (const auto& [family, d] : families) {
    for (double kappa : {0.0, 0.4, 1.0, 2.5}) {
      CAPTURE(to_string(family));
      CAPTURE(kappa);
      const auto p = make_problem(family, kappa, d, 1);
      Rng rng(9);
      CHECK(check_margin(p, margin_grid(1000)).passed);
      CHECK(check_doubling(p, doubling_grid(p, 500, 20, rng)).passed);
      if (kappa > 0) CHECK(check_smoothness(p, 10000, rng).passed);
    }
  }
}

}  // namespace
}  // namespace kalls
