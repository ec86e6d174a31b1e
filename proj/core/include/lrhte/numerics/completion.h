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

#ifndef LRHTE_NUMERICS_COMPLETION_H_
#define LRHTE_NUMERICS_COMPLETION_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lrhte/numerics/matrix.h"
#include "lrhte/numerics/random.h"

namespace lrhte::numerics {

// Observed-entry indicator with the same shape as the matrix it masks.
class Mask {
 public:
  Mask() = default;
  Mask(std::size_t rows, std::size_t cols, bool observed = true)
      : rows_(rows), cols_(cols), bits_(rows * cols, observed ? 1 : 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool operator()(std::size_t r, std::size_t c) const {
    return bits_[r * cols_ + c] != 0;
  }
  void Set(std::size_t r, std::size_t c, bool observed) {
    bits_[r * cols_ + c] = observed ? 1 : 0;
  }
  std::size_t CountObserved() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint8_t> bits_;
};

struct AlsOptions {
  std::size_t rank = 1;
  double reg = 1e-6;
  std::size_t iters = 100;
  // Stop early once the relative objective decrease of an iteration falls
  // below this; 0 runs all iterations.
  double tol = 0.0;
};

struct AlsResult {
  Matrix completed;  // U Vᵀ over every entry
  Matrix u;          // rows x rank
  Matrix v;          // cols x rank
  // Objective sum_obs (m - u·v)^2 + reg (|U|^2 + |V|^2) after each iteration.
  std::vector<double> objective;
  // Observed-entry squared error after each iteration.
  std::vector<double> observed_loss;
};

// Rank-r completion by alternating ridge solves over observed entries only.
// V is initialized from `stream`; every row and column needs at least one
// observed entry (kInvalidArgument otherwise).
AlsResult AlsComplete(const Matrix& m, const Mask& mask,
                      const AlsOptions& options, RngStream& stream);

}  // namespace lrhte::numerics

#endif  // LRHTE_NUMERICS_COMPLETION_H_
