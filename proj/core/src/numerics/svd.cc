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

#include "lrhte/numerics/svd.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "lrhte/error.h"

namespace lrhte::numerics {
namespace {

constexpr int kMaxSweeps = 80;

}  // namespace

std::vector<double> SingularValues(const Matrix& m, std::size_t k) {
  const std::size_t small = std::min(m.rows(), m.cols());
  if (k > small) {
    throw Error(ErrorCode::kOutOfRange,
                "requested " + std::to_string(k) + " singular values of a " +
                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                    " matrix");
  }
  if (!m.AllFinite()) {
    throw Error(ErrorCode::kInvalidArgument,
                "singular values of a matrix with non-finite entries");
  }
  // Work on columns stored contiguously: `cols` vectors of length `len`.
  const bool transpose = m.cols() > m.rows();
  const std::size_t ncols = transpose ? m.rows() : m.cols();
  const std::size_t len = transpose ? m.cols() : m.rows();
  std::vector<std::vector<double>> col(ncols, std::vector<double>(len));
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (transpose) {
        col[r][c] = m(r, c);
      } else {
        col[c][r] = m(r, c);
      }
    }
  }

  const double tol = std::numeric_limits<double>::epsilon();
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < ncols; ++p) {
      for (std::size_t q = p + 1; q < ncols; ++q) {
        auto& a = col[p];
        auto& b = col[q];
        const double alpha = SquaredNorm(a);
        const double beta = SquaredNorm(b);
        const double gamma = Dot(a, b);
        if (alpha == 0.0 || beta == 0.0) continue;
        if (std::abs(gamma) <= tol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < len; ++i) {
          const double ai = a[i];
          const double bi = b[i];
          a[i] = c * ai - s * bi;
          b[i] = s * ai + c * bi;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sv(ncols);
  for (std::size_t i = 0; i < ncols; ++i) sv[i] = std::sqrt(SquaredNorm(col[i]));
  std::sort(sv.begin(), sv.end(), std::greater<>());
  sv.resize(k);
  return sv;
}

}  // namespace lrhte::numerics
