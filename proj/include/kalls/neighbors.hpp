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

// Ordered k-nearest-neighbor selection under the Euclidean metric.
//
// Points are the columns of any Eigen dense expression. Results are sorted by
// (distance, column index): equal distances resolve to the lower index, which
// makes every query deterministic. Selection is a brute-force scan followed by
// a partial sort.

#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace kalls {

template <typename S>
struct BasicNeighbor {
  Eigen::Index index;
  S distance;

  bool operator==(const BasicNeighbor&) const = default;
};

/// Euclidean distance between two column vectors. The sum runs in coordinate
/// order so results never depend on memory alignment.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar euclidean_distance(
    const Eigen::MatrixBase<DerivedA>& a,
    const Eigen::MatrixBase<DerivedB>& b) {
  using S = typename DerivedA::Scalar;
  S sum{0};
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const S diff = a(i) - b(i);
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

template <typename S>
bool neighbor_before(const BasicNeighbor<S>& x, const BasicNeighbor<S>& y) {
  return x.distance < y.distance ||
         (x.distance == y.distance && x.index < y.index);
}

/// The k columns of `points` closest to `query`, skipping column `exclude`
/// (pass -1 to keep every column).
template <typename DerivedP, typename DerivedQ>
std::vector<BasicNeighbor<typename DerivedP::Scalar>> nearest_columns(
    const Eigen::MatrixBase<DerivedP>& points,
    const Eigen::MatrixBase<DerivedQ>& query, Eigen::Index k,
    Eigen::Index exclude = -1) {
  using S = typename DerivedP::Scalar;
  const Eigen::Index available =
      points.cols() - (exclude >= 0 && exclude < points.cols() ? 1 : 0);
  if (k < 1 || k > available) {
    throw std::out_of_range("k must lie in [1, number of candidates]");
  }
  std::vector<BasicNeighbor<S>> all;
  all.reserve(static_cast<std::size_t>(available));
  for (Eigen::Index j = 0; j < points.cols(); ++j) {
    if (j == exclude) continue;
    all.push_back({j, euclidean_distance(points.col(j), query)});
  }
  const auto mid = all.begin() + k;
  std::partial_sort(all.begin(), mid, all.end(), neighbor_before<S>);
  all.erase(mid, all.end());
  return all;
}

/// Index of the column closest to `query` (ties to the lower index).
template <typename DerivedP, typename DerivedQ>
Eigen::Index nearest_column(const Eigen::MatrixBase<DerivedP>& points,
                            const Eigen::MatrixBase<DerivedQ>& query) {
  if (points.cols() < 1) throw std::out_of_range("no candidate points");
  Eigen::Index best = 0;
  auto best_distance = euclidean_distance(points.col(0), query);
  for (Eigen::Index j = 1; j < points.cols(); ++j) {
    const auto dist = euclidean_distance(points.col(j), query);
    if (dist < best_distance) {
      best = j;
      best_distance = dist;
    }
  }
  return best;
}

/// Number of columns strictly inside the open ball B(center, radius).
template <typename DerivedP, typename DerivedQ>
Eigen::Index count_in_open_ball(const Eigen::MatrixBase<DerivedP>& points,
                                const Eigen::MatrixBase<DerivedQ>& center,
                                typename DerivedP::Scalar radius) {
  Eigen::Index count = 0;
  for (Eigen::Index j = 0; j < points.cols(); ++j) {
    if (euclidean_distance(points.col(j), center) < radius) ++count;
  }
  return count;
}

}  // namespace kalls
