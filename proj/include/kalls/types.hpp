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

// Core aliases, error types and random-stream helpers shared by every module.

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kalls {

using Scalar = double;
using Index = Eigen::Index;

/// A single point of R^d.
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
/// Points stored column-wise: a d x w matrix holds w points of R^d.
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Rng = std::mt19937_64;

/// Binary class label.
using Label = int;

// Thrown when a label request would take the remaining budget below zero.
class BudgetExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown by ConfidentLabel when not even one request is allowed.
class AbstainEmpty : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown when a 1-NN classifier is built or queried on an empty active set.
class EmptyActiveSet : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown when a finite Bernoulli source runs dry in the middle of BerEst.
class SamplerExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// SplitMix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of the named substream ("pool", "oracle", ...) of a master seed.
constexpr std::uint64_t derive_seed(std::uint64_t master,
                                    std::string_view stream) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a
  for (const char c : stream) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return mix64(master ^ mix64(h));
}

/// Uniform double in [0,1) from the top 53 bits of a 64-bit word.
constexpr double unit_interval(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline Rng make_rng(std::uint64_t master, std::string_view stream) {
  return Rng(derive_seed(master, stream));
}

}  // namespace kalls
