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

#include "kalls/pool.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace kalls {

Pool::Pool(Matrix points) : points_(std::move(points)) {
  if (points_.rows() < 1) throw std::invalid_argument("pool dimension must be positive");
  if (points_.cols() < 1) throw std::invalid_argument("pool must hold at least one point");
  if (!points_.allFinite()) throw std::invalid_argument("pool points must be finite");
}

Pool Pool::from_csv(std::istream& in) {
  std::vector<double> values;
  Index dim = 0;
  Index rows = 0;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    Index cols = 0;
    std::size_t pos = 0;
    while (true) {
      const std::size_t end = std::min(line.find(',', pos), line.size());
      std::size_t first = pos;
      std::size_t last = end;
      while (first < last && line[first] == ' ') ++first;
      while (last > first && line[last - 1] == ' ') --last;
      double v = 0;
      const auto [ptr, ec] =
          std::from_chars(line.data() + first, line.data() + last, v);
      if (ec != std::errc{} || ptr != line.data() + last || first == last) {
        throw std::invalid_argument("pool csv line " + std::to_string(line_no) +
                                    ": malformed number");
      }
      values.push_back(v);
      ++cols;
      if (end == line.size()) break;
      pos = end + 1;
    }
    if (dim == 0) dim = cols;
    if (cols != dim) {
      throw std::invalid_argument("pool csv line " + std::to_string(line_no) +
                                  ": expected " + std::to_string(dim) +
                                  " columns");
    }
    ++rows;
  }
  if (rows == 0) throw std::invalid_argument("pool csv holds no points");
  Matrix points = Eigen::Map<const Matrix>(values.data(), dim, rows);
  return Pool(std::move(points));
}

Pool Pool::from_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return from_csv(in);
}

NeighborList k_nearest(const Pool& pool, Index center_index, Index k) {
  if (center_index < 0 || center_index >= pool.size()) {
    throw std::out_of_range("center index outside the pool");
  }
  if (k < 1 || k >= pool.size()) {
    throw std::out_of_range("k must lie in [1, w - 1]");
  }
  return {center_index, nearest_columns(pool.points(), pool.point(center_index),
                                        k, center_index)};
}

NeighborList k_nearest_external(const Matrix& set, const Vector& query,
                                Index k) {
  if (query.size() != set.rows()) {
    throw std::invalid_argument("query dimension mismatch");
  }
  return {-1, nearest_columns(set, query, k)};
}

NeighborList k_nearest_external(const Pool& pool, const Vector& query,
                                Index k) {
  return k_nearest_external(pool.points(), query, k);
}

}  // namespace kalls
