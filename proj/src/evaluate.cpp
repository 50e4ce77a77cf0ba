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

#include "kalls/evaluate.hpp"

#include "kalls/io.hpp"
#include "kalls/neighbors.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace kalls {

RiskEstimate excess_risk(const Classifier& classifier,
                         const SyntheticProblem& problem, std::int64_t n_test,
                         double delta_margin, Rng& rng) {
  if (n_test < 1) throw std::invalid_argument("n_test must be positive");
  double sum = 0, sum_sq = 0;
  std::int64_t deep = 0, deep_agree = 0;
  for (std::int64_t i = 0; i < n_test; ++i) {
    const Vector x = problem.sample(rng);
    const double eta = problem.eta(x);
    const Label bayes = problem.bayes(x);
    const Label got = classifier(x);
    const double loss = got != bayes ? std::abs(2 * eta - 1) : 0.0;
    sum += loss;
    sum_sq += loss * loss;
    if (std::abs(eta - 0.5) > delta_margin) {
      ++deep;
      deep_agree += got == bayes ? 1 : 0;
    }
  }
  RiskEstimate out;
  out.n_test = n_test;
  const double n = static_cast<double>(n_test);
  out.excess_risk = sum / n;
  const double var = std::max(0.0, sum_sq / n - out.excess_risk * out.excess_risk);
  out.std_error = std::sqrt(var / n);
  out.deep_margin_count = deep;
  out.deep_margin_agreement =
      deep > 0 ? static_cast<double>(deep_agree) / static_cast<double>(deep) : 1.0;
  return out;
}

PassiveKnn::PassiveKnn(Matrix points, std::vector<Label> labels, Index k)
    : points_(std::move(points)), labels_(std::move(labels)), k_(k) {
  if (points_.cols() == 0) throw EmptyActiveSet("passive k-NN has no labels");
  if (static_cast<Index>(labels_.size()) != points_.cols()) {
    throw std::invalid_argument("label count does not match point count");
  }
  if (k_ < 1 || k_ > points_.cols()) {
    throw std::invalid_argument("k must lie in [1, number of labels]");
  }
}

Label PassiveKnn::operator()(const Vector& query) const {
  const auto nn = nearest_columns(points_, query, k_);
  Index ones = 0;
  for (const auto& n : nn) ones += labels_[static_cast<std::size_t>(n.index)];
  return 2 * ones >= k_ ? 1 : 0;
}

PassiveKnn passive_knn(const SyntheticProblem& problem, std::int64_t n_labels,
                       std::int64_t k_n, Rng& rng) {
  if (n_labels < 1) throw std::invalid_argument("n_labels must be positive");
  Matrix points = problem.sample(rng, n_labels);
  std::vector<Label> labels(static_cast<std::size_t>(n_labels));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (Index i = 0; i < n_labels; ++i) {
    const Vector x = points.col(i);
    labels[static_cast<std::size_t>(i)] = unif(rng) < problem.eta(x) ? 1 : 0;
  }
  return PassiveKnn(std::move(points), std::move(labels),
                    std::min<std::int64_t>(k_n, n_labels));
}

std::int64_t default_passive_k(std::int64_t n_labels, double alpha, int d) {
  if (n_labels < 1) throw std::invalid_argument("n_labels must be positive");
  if (!(alpha > 0) || d < 1) throw std::invalid_argument("bad alpha or d");
  const double x = std::pow(static_cast<double>(n_labels), 2 * alpha / (2 * alpha + d));
  const double r = std::round(x);
  const double k = std::abs(x - r) <= 1e-9 * std::max(1.0, x) ? r : std::ceil(x);
  return std::clamp<std::int64_t>(static_cast<std::int64_t>(k), 1, n_labels);
}

std::pair<SmoothnessParams, MarginParams> kalls_parameters(
    const SyntheticProblem& problem) {
  const CertifiedConstants& c = problem.certified();
  if (!c.margin) throw std::logic_error("problem has no margin constants");
  SmoothnessParams smooth =
      c.smoothness ? *c.smoothness : SmoothnessParams{1.0, 2.0, problem.dim()};
  return {smooth, *c.margin};
}

SeededRun run_seeded(const SyntheticProblem& problem, Index pool_size,
                     const KallsConfig& config, std::uint64_t seed) {
  config.validate();
  Rng pool_rng = make_rng(seed, "pool");
  Pool pool(problem.sample(pool_rng, pool_size));
  Vector eta(pool.size());
  for (Index i = 0; i < pool.size(); ++i) eta(i) = problem.eta(pool.point(i));
  LabelOracle oracle(std::move(eta), derive_seed(seed, "oracle"), config.n,
                     config.budget_mode);
  Rng est_rng = make_rng(seed, "estimation");
  const auto [smooth, margin] = kalls_parameters(problem);
  KallsResult result = run_kalls(pool, oracle, config, smooth, margin, est_rng);
  return {std::move(pool), std::move(result)};
}

std::optional<double> median(std::vector<double> values) {
  if (values.empty()) return std::nullopt;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

namespace {

void append_error(std::string& error, const std::string& what) {
  if (!error.empty()) error += "; ";
  error += what;
}

ComparisonRow run_cell(const SyntheticProblem& problem, std::int64_t budget,
                       const KallsConfig& base, std::uint64_t seed,
                       const CompareOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  ComparisonRow row;
  row.family = to_string(problem.family());
  row.kappa = problem.kappa();
  row.budget = budget;
  row.seed = seed;
  KallsConfig config = base;
  config.n = budget;
  const auto [smooth, margin] = kalls_parameters(problem);
  const double delta_margin = margin_delta(config.epsilon, margin);
  try {
    const SeededRun run = run_seeded(problem, options.pool_size, config, seed);
    row.labels_used_active = run.result.trace.labels_spent;
    row.informative_count = static_cast<std::int64_t>(run.result.active.size());
    const ActiveSet& active = run.result.active;
    if (active.empty()) {
      append_error(row.error, "active: empty active set");
    } else {
      Rng eval_rng = make_rng(seed, "evaluation");
      const RiskEstimate risk = excess_risk(
          [&active](const Vector& x) { return one_nn_classify(active, x); },
          problem, options.n_test, delta_margin, eval_rng);
      row.excess_active = risk.excess_risk;
      row.deep_margin_agreement = risk.deep_margin_agreement;
    }
  } catch (const std::exception& e) {
    append_error(row.error, std::string("active: ") + e.what());
  }
  try {
    if (row.labels_used_active < 1) {
      append_error(row.error, "passive: no labels");
    } else {
      Rng passive_rng = make_rng(seed, "passive");
      const PassiveKnn knn = passive_knn(
          problem, row.labels_used_active,
          default_passive_k(row.labels_used_active, smooth.alpha, problem.dim()),
          passive_rng);
      Rng eval_rng = make_rng(seed, "evaluation");
      row.excess_passive =
          excess_risk(knn, problem, options.n_test, delta_margin, eval_rng)
              .excess_risk;
    }
  } catch (const std::exception& e) {
    append_error(row.error, std::string("passive: ") + e.what());
  }
  row.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  return row;
}

}  // namespace

ComparisonTable compare(const SyntheticProblem& problem,
                        const std::vector<std::int64_t>& budgets,
                        const KallsConfig& config,
                        const std::vector<std::uint64_t>& seeds,
                        const CompareOptions& options) {
  ComparisonTable table;
  const std::size_t n_cells = budgets.size() * seeds.size();
  table.rows.resize(n_cells);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n_cells; i = next++) {
      const std::int64_t budget = budgets[i / seeds.size()];
      const std::uint64_t seed = seeds[i % seeds.size()];
      try {
        table.rows[i] = run_cell(problem, budget, config, seed, options);
      } catch (const std::exception& e) {
        ComparisonRow& row = table.rows[i];
        row.family = to_string(problem.family());
        row.kappa = problem.kappa();
        row.budget = budget;
        row.seed = seed;
        append_error(row.error, e.what());
      }
    }
  };
  const unsigned n_threads = std::max(
      1u, std::min<unsigned>(options.threads, static_cast<unsigned>(n_cells)));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }

  for (std::size_t b = 0; b < budgets.size(); ++b) {
    std::vector<double> active, passive, agreement;
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      const ComparisonRow& row = table.rows[b * seeds.size() + s];
      if (row.excess_active) active.push_back(*row.excess_active);
      if (row.excess_passive) passive.push_back(*row.excess_passive);
      if (row.deep_margin_agreement) agreement.push_back(*row.deep_margin_agreement);
    }
    table.summary.push_back({budgets[b], median(std::move(active)),
                             median(std::move(passive)),
                             median(std::move(agreement))});
  }
  return table;
}

void write_comparison_csv(std::ostream& out, const ComparisonTable& table) {
  auto opt = [](const std::optional<double>& v) {
    return v ? format_real(*v) : std::string();
  };
  out << "family,kappa,budget,seed,labels_used_active,excess_active,"
         "excess_passive,deep_margin_agreement,informative_count,wall_ms\n";
  for (const ComparisonRow& r : table.rows) {
    out << r.family << ',' << format_real(r.kappa) << ',' << r.budget << ','
        << r.seed << ',' << r.labels_used_active << ',' << opt(r.excess_active)
        << ',' << opt(r.excess_passive) << ',' << opt(r.deep_margin_agreement)
        << ',' << r.informative_count << ',' << format_real(r.wall_ms) << '\n';
  }
}

}  // namespace kalls
