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

#include "kalls/config.hpp"

#include <doctest.h>

#include <string>

namespace kalls {
namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

bool contains(const std::string& s, const std::string& part) {
  return s.find(part) != std::string::npos;
}

TEST_CASE("empty object gives the defaults") {
  const ExperimentConfig c = parse_config("{}");
  CHECK(c == ExperimentConfig{});
  CHECK(c.c_const == 8.0);
  CHECK(c.budget_mode == BudgetMode::kStrictPaper);
}

TEST_CASE("serialize and parse round trip") {
  ExperimentConfig c;
  c.problem = {Family::kDiscreteAtoms, 0.5, 1, 16};
  c.pool_size = 1234;
  c.budgets = {10, 200, 3000};
  c.epsilon = 0.15;
  c.delta = 1.0 / 30;
  c.c_const = 12.5;
  c.u_const = 40;
  c.lb_factor = 0.2;
  c.budget_mode = BudgetMode::kCachedLabels;
  c.pool_sampling = PoolSampling::kPerDraw;
  c.seeds = {1, 18446744073709551615ull};
  c.n_test = 777;
  c.output = "some/dir";
  const std::string text = serialize_config(c);
  CHECK(parse_config(text) == c);
  CHECK(serialize_config(parse_config(text)) == text);
}

TEST_CASE("partial configs keep the remaining defaults") {
  const auto c = parse_config(R"({"problem": {"family": "product_uniform_nd", "d": 3},
                                  "budgets": [500]})");
  CHECK(c.problem.family == Family::kProductUniformNd);
  CHECK(c.problem.d == 3);
  CHECK(c.problem.kappa == 1.0);
  CHECK(c.budgets == std::vector<std::int64_t>{500});
  CHECK(c.pool_size == 4000);
}

TEST_CASE("unknown keys are rejected with their line") {
  const std::string e = error_of("{\n  \"epsilon\": 0.2,\n  \"epsilonn\": 0.3\n}");
  CHECK(contains(e, "line 3"));
  CHECK(contains(e, "epsilonn"));
  CHECK(contains(e, "unknown key"));
  const std::string nested =
      error_of("{\n  \"problem\": {\n    \"family\": \"discrete_atoms\",\n    \"M\": 8\n  }\n}");
  CHECK(contains(nested, "line 4"));
  CHECK(contains(nested, "problem.M"));
}

TEST_CASE("type errors name the key") {
  CHECK(contains(error_of(R"({"epsilon": "0.2"})"), "epsilon: expected a number"));
  CHECK(contains(error_of(R"({"pool_size": 10.5})"), "pool_size: expected an integer"));
  CHECK(contains(error_of(R"({"budgets": 100})"), "budgets"));
  CHECK(contains(error_of(R"({"seeds": [-1]})"), "seeds"));
  CHECK(contains(error_of(R"({"budget_mode": "lazy"})"), "budget_mode"));
  CHECK(contains(error_of(R"({"problem": {"family": "cauchy"}})"), "problem.family"));
  CHECK(contains(error_of(R"({"u_const": 99999999999})"), "out of range"));
}

TEST_CASE("syntax errors and invalid values") {
  CHECK(contains(error_of("{\n  \"epsilon\": 0.2,\n  oops\n}"), "line 3"));
  CHECK(contains(error_of("[1, 2]"), "expected an object"));
  CHECK_FALSE(error_of(R"({"epsilon": 0})").empty());
  CHECK_FALSE(error_of(R"({"delta": 1.5})").empty());
  CHECK_FALSE(error_of(R"({"seeds": []})").empty());
  CHECK_FALSE(error_of(R"({"pool_size": 1})").empty());
  CHECK_FALSE(error_of(R"({"problem": {"family": "discrete_atoms", "atoms": 3}})").empty());
}

TEST_CASE("kalls() carries the learner settings") {
  ExperimentConfig c;
  c.epsilon = 0.3;
  c.lb_factor = 0.25;
  const KallsConfig k = c.kalls(512);
  CHECK(k.n == 512);
  CHECK(k.epsilon == 0.3);
  CHECK(k.lb_factor == 0.25);
  CHECK(k.c_const == 8.0);
}

}  // namespace
}  // namespace kalls
