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

// Excess-risk measurement against the analytic Bayes classifier, the passive
// k-NN baseline and the seeded active-vs-passive comparison grid.

#pragma once

#include "kalls/kalls.hpp"
#include "kalls/synth.hpp"
#include "kalls/thresholds.hpp"
#include "kalls/types.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kalls {

using Classifier = std::function<Label(const Vector&)>;

struct RiskEstimate {
  double excess_risk = 0;
  double std_error = 0;
  std::int64_t n_test = 0;
  // Agreement with the Bayes rule on test points with |eta - 1/2| > margin;
  // 1 when no test point falls there.
  double deep_margin_agreement = 1;
  std::int64_t deep_margin_count = 0;
};

/// Monte-Carlo mean of |2 eta(X) - 1| 1{f(X) != f*(X)} over n_test fresh draws.
RiskEstimate excess_risk(const Classifier& classifier,
                         const SyntheticProblem& problem, std::int64_t n_test,
                         double delta_margin, Rng& rng);

/// Majority-vote k-NN over labeled points; a tied vote gives label 1 and
/// distance ties go to the earlier draw.
class PassiveKnn {
 public:
  PassiveKnn(Matrix points, std::vector<Label> labels, Index k);

  Label operator()(const Vector& query) const;
  Index k() const { return k_; }
  Index size() const { return points_.cols(); }

 private:
  Matrix points_;
  std::vector<Label> labels_;
  Index k_;
};

/// Draws n_labels labeled pairs from the problem and returns the k_n-NN rule.
PassiveKnn passive_knn(const SyntheticProblem& problem, std::int64_t n_labels,
                       std::int64_t k_n, Rng& rng);

/// ceil(n^(2 alpha / (2 alpha + d))), snapping to the nearest integer when the
/// power is within rounding of it (1000^(2/3) is exactly 100).
std::int64_t default_passive_k(std::int64_t n_labels, double alpha, int d);

/// (alpha, L) and (beta, C) handed to KALLS for a problem: the certified
/// constants, with alpha = 1, L = 2 for the noiseless step.
std::pair<SmoothnessParams, MarginParams> kalls_parameters(
    const SyntheticProblem& problem);

/// A pool drawn from the problem and a KALLS run over it. All randomness comes
/// from `seed` through the "pool", "oracle" and "estimation" substreams.
struct SeededRun {
  Pool pool;
  KallsResult result;
};

SeededRun run_seeded(const SyntheticProblem& problem, Index pool_size,
                     const KallsConfig& config, std::uint64_t seed);

struct CompareOptions {
  Index pool_size = 4000;
  std::int64_t n_test = 20000;
  unsigned threads = 1;
};

struct ComparisonRow {
  std::string family;
  double kappa = 0;
  std::int64_t budget = 0;
  std::uint64_t seed = 0;
  std::int64_t labels_used_active = 0;
  std::optional<double> excess_active;
  std::optional<double> excess_passive;
  std::optional<double> deep_margin_agreement;
  std::int64_t informative_count = 0;
  double wall_ms = 0;
  std::string error;  // per-cell failures, empty when both sides ran
};

struct ComparisonSummary {
  std::int64_t budget = 0;
  std::optional<double> median_excess_active;
  std::optional<double> median_excess_passive;
  std::optional<double> median_deep_margin_agreement;
};

struct ComparisonTable {
  std::vector<ComparisonRow> rows;  // budget-major, then seed
  std::vector<ComparisonSummary> summary;
};

/// Runs KALLS and the passive baseline (on as many labels as KALLS spent) for
/// every (budget, seed) cell. Cell failures are recorded, never thrown.
ComparisonTable compare(const SyntheticProblem& problem,
                        const std::vector<std::int64_t>& budgets,
                        const KallsConfig& config,
                        const std::vector<std::uint64_t>& seeds,
                        const CompareOptions& options);

std::optional<double> median(std::vector<double> values);

/// Header plus one row per cell; reals with 17 significant digits.
void write_comparison_csv(std::ostream& out, const ComparisonTable& table);

}  // namespace kalls
