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

// The unlabeled pool and its neighbor queries.

#pragma once

#include "kalls/neighbors.hpp"
#include "kalls/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <vector>

namespace kalls {

using Neighbor = BasicNeighbor<Scalar>;

struct NeighborList {
  Index center_index = -1;  // -1 for a query that is not a pool member
  std::vector<Neighbor> neighbors;
};

/// w finite points of R^d, stored as the columns of a d x w matrix.
/// Immutable after construction.
class Pool {
 public:
  explicit Pool(Matrix points);

  /// One point per row, d comma-separated numbers, no header.
  static Pool from_csv(std::istream& in);
  static Pool from_csv(const std::filesystem::path& path);

  Index size() const { return points_.cols(); }
  int dim() const { return static_cast<int>(points_.rows()); }
  const Matrix& points() const { return points_; }
  auto point(Index i) const { return points_.col(i); }

 private:
  Matrix points_;
};

/// The k pool points nearest to pool point `center_index`, excluding it.
/// Requires 1 <= k <= w - 1.
NeighborList k_nearest(const Pool& pool, Index center_index, Index k);

/// The k points of `set` (columns) nearest to an arbitrary query.
NeighborList k_nearest_external(const Matrix& set, const Vector& query,
                                Index k);
NeighborList k_nearest_external(const Pool& pool, const Vector& query,
                                Index k);

}  // namespace kalls
