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

#include "kalls/cli.hpp"

#include "kalls/config.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace kalls {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(KALLS_TEST_TMPDIR) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path path = dir / "config.json";
  std::ofstream(path) << text;
  return path;
}

struct Outcome {
  int code = 0;
  std::string out;
};

// Runs the CLI in-process with stdout and stderr captured.
Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "kalls");
  std::vector<char*> argv;
  for (std::string& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  auto* old_out = std::cout.rdbuf(out.rdbuf());
  auto* old_err = std::cerr.rdbuf(err.rdbuf());
  Outcome o;
  o.code = cli_run(static_cast<int>(argv.size()), argv.data());
  std::cout.rdbuf(old_out);
  std::cerr.rdbuf(old_err);
  o.out = out.str() + err.str();
  return o;
}

constexpr const char* kSmall = R"({
  "problem": {"family": "power_margin_uniform_1d", "kappa": 1},
  "pool_size": 1000,
  "budgets": [2000],
  "seeds": [3],
  "n_test": 2000
})";

int count_data_rows(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  int rows = -1;  // header
  while (std::getline(in, line)) {
    if (!line.empty() && line.front() != '#') ++rows;
  }
  return rows;
}

TEST_CASE("run writes a reproducible trace and active set") {
  const fs::path dir = scratch("cli_run");
  const fs::path cfg = write_config(dir, kSmall);
  const fs::path a = dir / "a";
  const fs::path b = dir / "b";
  REQUIRE(invoke({"run", "--config", cfg.string(), "--out", a.string()}).code == kExitOk);
  REQUIRE(invoke({"run", "--config", cfg.string(), "--out", b.string()}).code == kExitOk);
  const std::string trace = slurp(a / "trace.json");
  CHECK(trace == slurp(b / "trace.json"));
  CHECK(slurp(a / "active_set.csv") == slurp(b / "active_set.csv"));

  const auto doc = nlohmann::json::parse(trace);
  CHECK(doc["version"] == kVersion);
  CHECK(doc["budget"] == 2000);
  CHECK(doc["seed"] == 3);
  CHECK(doc["run"]["labels_spent"].get<int>() <= 2000);
  CHECK(doc["config"]["pool_size"] == 1000);

  const fs::path c = dir / "c";
  REQUIRE(invoke({"run", "--config", cfg.string(), "--out", c.string(),
                  "--seed-override", "4"}).code == kExitOk);
  CHECK(nlohmann::json::parse(slurp(c / "trace.json"))["seed"] == 4);
}

TEST_CASE("eval re-scores a saved active set") {
  const fs::path dir = scratch("cli_eval");
  const fs::path cfg = write_config(dir, kSmall);
  std::ofstream(dir / "two.csv") << "# hand made\nx0,label,lb,source_index\n"
                                     "0.25,0,0.1,0\n0.75,1,0.1,1\n";
  REQUIRE(invoke({"eval", "--config", cfg.string(), "--out", dir.string(),
                  "--active-set", (dir / "two.csv").string()}).code == kExitOk);
  const auto doc = nlohmann::json::parse(slurp(dir / "eval.json"));
  // The 1-NN rule of these two points is the Bayes rule on eta(x) = x.
  CHECK(doc["records"] == 2);
  CHECK(doc["excess_risk"] == 0.0);

  std::ofstream(dir / "empty.csv") << "x0,label,lb,source_index\n";
  CHECK(invoke({"eval", "--config", cfg.string(), "--out", dir.string(),
                "--active-set", (dir / "empty.csv").string()}).code == kExitRuntimeError);
}

TEST_CASE("sweep writes one row per budget and seed") {
  const fs::path dir = scratch("cli_sweep");
  const fs::path cfg = write_config(dir, R"({"pool_size": 800, "budgets": [400, 1500],
                                             "seeds": [1, 2], "n_test": 1000})");
  const Outcome o = invoke({"sweep", "--config", cfg.string(), "--out", dir.string(),
                            "--threads", "2"});
  REQUIRE(o.code == kExitOk);
  const std::string csv = slurp(dir / "comparison.csv");
  CHECK(csv.rfind("# ", 0) == 0);
  CHECK(count_data_rows(csv) == 4);
  CHECK(o.out.find("median_excess_active") != std::string::npos);
}

TEST_CASE("check-assumptions passes on the uniform problem") {
  const fs::path dir = scratch("cli_check");
  const fs::path cfg = write_config(dir, kSmall);
  REQUIRE(invoke({"check-assumptions", "--config", cfg.string(), "--out",
                  dir.string()}).code == kExitOk);
  const auto doc = nlohmann::json::parse(slurp(dir / "assumptions.json"));
  CHECK(doc["all_passed"] == true);
  CHECK(doc["reports"].size() == 3);
}

TEST_CASE("feasibility prints a table") {
  const fs::path dir = scratch("cli_feas");
  const fs::path cfg = write_config(dir, kSmall);
  const Outcome o = invoke({"feasibility", "--config", cfg.string()});
  CHECK(o.code == kExitOk);
  CHECK_FALSE(o.out.empty());
}

TEST_CASE("bad input maps to exit codes") {
  const fs::path dir = scratch("cli_bad");
  const fs::path cfg = write_config(dir, R"({"epsilonn": 0.2})");
  const Outcome bad = invoke({"run", "--config", cfg.string(), "--out", dir.string()});
  CHECK(bad.code == kExitConfigError);
  CHECK(bad.out.find("epsilonn") != std::string::npos);
  CHECK(invoke({"run", "--config", (dir / "missing.json").string()}).code ==
        kExitConfigError);
  CHECK(invoke({"frobnicate"}).code == kExitConfigError);
  CHECK(invoke({}).code == kExitConfigError);
  const fs::path good = write_config(dir, kSmall);
  std::ofstream(dir / "broken.csv") << "x0,label,lb,source_index\n0.5,7,0.1,3\n";
  CHECK(invoke({"eval", "--config", good.string(), "--out", dir.string(),
                "--active-set", (dir / "broken.csv").string()}).code == kExitRuntimeError);
}

}  // namespace
}  // namespace kalls
