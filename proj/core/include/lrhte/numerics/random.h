/*
 * Copyright 2026 The lrhte Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LRHTE_NUMERICS_RANDOM_H_
#define LRHTE_NUMERICS_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "lrhte/numerics/matrix.h"

namespace lrhte::numerics {

// Counter-based random stream. Draw i is a SplitMix64 finalizer applied to
// seed + i * golden-gamma, so the sequence depends only on the seed and the
// number of draws taken, never on the platform's <random> implementation.
//
// Normals come from Box-Muller on two uniforms; the second variate of each
// pair is cached and returned by the next StdNormal() call.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t NextU64();
  double Uniform01();  // [0, 1), 53-bit resolution
  double StdNormal();
  bool Bernoulli(double p);
  // Uniform on {0, ..., n - 1}; n must be positive.
  std::size_t UniformIndex(std::size_t n);

  // Child stream keyed by tag; independent of this stream's draw position.
  RngStream Derive(std::uint64_t tag) const;

  template <typename T>
  void Shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[UniformIndex(i)]);
    }
  }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

enum class DrawKind { kStdNormal, kUniform01, kBernoulli };

// `p` is only read for kBernoulli and must lie in [0, 1]. Bernoulli draws are
// returned as 0.0 / 1.0.
std::vector<double> Draws(RngStream& stream, DrawKind kind, std::size_t count,
                          double p = 0.5);

Matrix NormalMatrix(RngStream& stream, std::size_t rows, std::size_t cols,
                    double sd = 1.0);

std::uint64_t MixBits(std::uint64_t x);

}  // namespace lrhte::numerics

#endif  // LRHTE_NUMERICS_RANDOM_H_
