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
#include "kalls/evaluate.hpp"
#include "kalls/io.hpp"
#include "kalls/kalls.hpp"
#include "kalls/synth.hpp"
#include "kalls/thresholds.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace kalls {
namespace {

// printf-style formatting onto std::cout, so callers can redirect it.
template <typename... Args>
void print(const char* fmt, Args... args) {
  const int n = std::snprintf(nullptr, 0, fmt, args...);
  std::string buf(static_cast<std::size_t>(n) + 1, '\0');
  std::snprintf(buf.data(), buf.size(), fmt, args...);
  buf.pop_back();
  std::cout << buf;
}

namespace fs = std::filesystem;
using OJson = nlohmann::ordered_json;

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed_override;
  std::string out_dir;
  unsigned threads = 1;
};

struct Resolved {
  ExperimentConfig config;
  fs::path out;
};

Resolved resolve(const CommonOptions& opts) {
  Resolved r;
  r.config = opts.config_path.empty() ? ExperimentConfig{}
                                      : load_config(opts.config_path);
  if (opts.seed_override) r.config.seeds = {*opts.seed_override};
  r.config.validate();
  r.out = opts.out_dir.empty() ? fs::path(r.config.output) : fs::path(opts.out_dir);
  return r;
}

OJson provenance(const ExperimentConfig& config) {
  OJson j;
  j["version"] = kVersion;
  j["config"] = to_json(config);
  return j;
}

// One-line "# kalls <version> config <json>" header for CSV outputs.
std::string csv_preamble(const ExperimentConfig& config) {
  return std::string("kalls ") + kVersion + " config " + to_json(config).dump();
}

std::ofstream open_output(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  const fs::path path = dir / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

SyntheticProblem problem_of(const ExperimentConfig& config) {
  return SyntheticProblem(config.problem, config.seeds.front());
}

int cmd_run(const Resolved& r) {
  const ExperimentConfig& c = r.config;
  const SyntheticProblem problem = problem_of(c);
  const std::int64_t budget = c.budgets.front();
  const std::uint64_t seed = c.seeds.front();
  const SeededRun run = run_seeded(problem, c.pool_size, c.kalls(budget), seed);

  OJson doc = provenance(c);
  doc["budget"] = budget;
  doc["seed"] = seed;
  const OJson trace = trace_to_json(run.result.trace);
  doc["run"] = trace["run"];
  doc["points"] = trace["points"];
  open_output(r.out, "trace.json") << doc.dump(2) << '\n';

  std::ofstream csv = open_output(r.out, "active_set.csv");
  write_active_set_csv(csv, run.result.active, problem.dim(), csv_preamble(c));

  const RunTrace& t = run.result.trace;
  std::cout << "labels_spent " << t.labels_spent << " of " << t.budget
            << ", informative " << run.result.active.size() << ", scanned "
            << t.points_scanned << ", stopped: " << to_string(t.stopped_reason)
            << '\n';
  return kExitOk;
}

int cmd_sweep(const Resolved& r, unsigned threads) {
  const ExperimentConfig& c = r.config;
  const SyntheticProblem problem = problem_of(c);
  CompareOptions options;
  options.pool_size = c.pool_size;
  options.n_test = c.n_test;
  options.threads = threads;
  const ComparisonTable table =
      compare(problem, c.budgets, c.kalls(c.budgets.front()), c.seeds, options);

  std::ostringstream body;
  write_comparison_csv(body, table);
  std::ofstream csv = open_output(r.out, "comparison.csv");
  csv << "# " << csv_preamble(c) << '\n' << body.str();

  auto cell = [](const std::optional<double>& v) {
    return v ? format_real(*v) : std::string("-");
  };
  std::cout << "budget,median_excess_active,median_excess_passive,"
               "median_deep_margin_agreement\n";
  for (const ComparisonSummary& s : table.summary) {
    std::cout << s.budget << ',' << cell(s.median_excess_active) << ','
              << cell(s.median_excess_passive) << ','
              << cell(s.median_deep_margin_agreement) << '\n';
  }
  for (const ComparisonRow& row : table.rows) {
    if (!row.error.empty()) {
      std::cerr << "budget " << row.budget << " seed " << row.seed << ": "
                << row.error << '\n';
    }
  }
  return kExitOk;
}

OJson report_json(const AssumptionReport& rep) {
  OJson j;
  j["assumption"] = to_string(rep.assumption);
  j["status"] = rep.passed ? "passed" : "failed";
  j["passed"] = rep.passed;
  j["checked"] = rep.checked;
  j["skipped"] = rep.skipped;
  j["max_violation"] = rep.max_violation;
  j["tolerance"] = rep.tolerance;
  return j;
}

int cmd_check(const Resolved& r) {
  const ExperimentConfig& c = r.config;
  const SyntheticProblem problem = problem_of(c);
  Rng rng = make_rng(c.seeds.front(), "assumptions");
  OJson doc = provenance(c);
  OJson reports = OJson::array();
  reports.push_back(report_json(check_margin(problem, margin_grid(400))));
  if (problem.certified().smoothness) {
    reports.push_back(report_json(check_smoothness(problem, 100000, rng)));
  } else {
    reports.push_back({{"assumption", to_string(Assumption::kH3)},
                       {"status", "not_applicable"},
                       {"passed", nullptr}});
  }
  reports.push_back(
      report_json(check_doubling(problem, doubling_grid(problem, 5000, 20, rng))));
  doc["reports"] = reports;
  bool all = true;
  for (const OJson& rep : reports) all = all && rep["passed"] != false;
  doc["all_passed"] = all;
  const std::string text = doc.dump(2) + "\n";
  open_output(r.out, "assumptions.json") << text;
  std::cout << text;
  return kExitOk;
}

int cmd_feasibility(const Resolved& r) {
  const ExperimentConfig& c = r.config;
  const SyntheticProblem problem = problem_of(c);
  const auto [smooth, margin] = kalls_parameters(problem);
  print("kalls %s feasibility, family %s kappa %g d %d, w = %lld\n",
              kVersion, to_string(problem.family()).c_str(), problem.kappa(),
              problem.dim(), static_cast<long long>(c.pool_size));
  print("alpha %g  L %g  beta %g  C %g\n", smooth.alpha, smooth.L,
              margin.beta, margin.C);
  print("%10s %12s %14s %10s %14s %14s %12s %12s %8s %8s %8s %8s\n", "n",
              "Delta", "k(eps,delta)", "phi_n", "budget_bound", "pool_bound",
              "estprob_min", "covering_T", "ab<d", "n_ok", "w_rate", "w_cover");
  for (const std::int64_t n : c.budgets) {
    const FeasibilityReport f =
        feasibility_report(c.kalls(n), smooth, margin, c.pool_size);
    print("%10lld %12.6g %14.6g %10.6g %14.6g %14.6g %12.6g %12.6g %8s %8s %8s %8s\n",
                static_cast<long long>(n), f.delta_margin, f.k_eps_delta,
                f.phi_n, f.budget_bound, f.pool_rate_bound, f.pool_estprob_min,
                f.covering_T, f.alpha_beta_below_d ? "yes" : "no",
                f.budget_ok ? "yes" : "no", f.pool_rate_ok ? "yes" : "no",
                f.pool_covers_T ? "yes" : "no");
  }
  print("config %s\n", to_json(c).dump().c_str());
  return kExitOk;
}

int cmd_eval(const Resolved& r, const std::string& active_path) {
  const ExperimentConfig& c = r.config;
  const SyntheticProblem problem = problem_of(c);
  const ActiveSet active = read_active_set_csv(fs::path(active_path));
  const auto [smooth, margin] = kalls_parameters(problem);
  Rng rng = make_rng(c.seeds.front(), "evaluation");
  const RiskEstimate risk = excess_risk(
      [&active](const Vector& x) { return one_nn_classify(active, x); }, problem,
      c.n_test, margin_delta(c.epsilon, margin), rng);
  OJson doc = provenance(c);
  doc["active_set"] = active_path;
  doc["records"] = active.size();
  doc["excess_risk"] = risk.excess_risk;
  doc["std_error"] = risk.std_error;
  doc["n_test"] = risk.n_test;
  doc["deep_margin_agreement"] = risk.deep_margin_agreement;
  doc["deep_margin_count"] = risk.deep_margin_count;
  const std::string text = doc.dump(2) + "\n";
  open_output(r.out, "eval.json") << text;
  std::cout << text;
  return kExitOk;
}

}  // namespace

int cli_run(int argc, char** argv) {
  CLI::App app{"kalls: pool-based active learning experiments"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  CommonOptions opts;
  std::uint64_t seed_override = 0;
  std::string active_path;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config_path, "experiment JSON")
        ->check(CLI::ExistingFile);
    sub->add_option("--seed-override", seed_override,
                    "replace the seed list with this seed");
    sub->add_option("--out", opts.out_dir, "output directory");
    sub->add_option("--threads", opts.threads, "worker threads")
        ->check(CLI::PositiveNumber);
  };
  CLI::App* run = app.add_subcommand("run", "single run: trace JSON and active-set CSV");
  CLI::App* sweep = app.add_subcommand("sweep", "budget x seed grid to comparison CSV");
  CLI::App* check = app.add_subcommand("check-assumptions", "assumption report JSON");
  CLI::App* feas = app.add_subcommand("feasibility", "theoretical requirements table");
  CLI::App* eval = app.add_subcommand("eval", "re-evaluate a saved active set");
  for (CLI::App* sub : {run, sweep, check, feas, eval}) add_common(sub);
  eval->add_option("--active-set", active_path, "active-set CSV")
      ->required()
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  }

  Resolved resolved;
  try {
    if (app.get_subcommands().front()->count("--seed-override") > 0) {
      opts.seed_override = seed_override;
    }
    resolved = resolve(opts);
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kExitConfigError;
  }

  try {
    if (*run) return cmd_run(resolved);
    if (*sweep) return cmd_sweep(resolved, opts.threads);
    if (*check) return cmd_check(resolved);
    if (*feas) return cmd_feasibility(resolved);
    if (*eval) return cmd_eval(resolved, active_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntimeError;
  }
  return kExitRuntimeError;
}

}  // namespace kalls
