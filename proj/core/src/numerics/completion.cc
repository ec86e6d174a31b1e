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

#include "lrhte/numerics/completion.h"

#include <cmath>
#include <string>

#include "lrhte/error.h"
#include "lrhte/numerics/ridge.h"

namespace lrhte::numerics {
namespace {

// Solves every row of `target` (rows x rank) given the fixed factor `other`
// (cols x rank). When `by_row` is false the roles of rows and columns in
// m/mask are swapped.
void SolveFactor(const Matrix& m, const Mask& mask, const Matrix& other,
                 double reg, bool by_row, Matrix& target) {
  const std::size_t rank = other.cols();
  const std::size_t outer = by_row ? m.rows() : m.cols();
  const std::size_t inner = by_row ? m.cols() : m.rows();
  Matrix gram(rank, rank);
  std::vector<double> rhs(rank);
  for (std::size_t i = 0; i < outer; ++i) {
    gram.Fill(0.0);
    std::fill(rhs.begin(), rhs.end(), 0.0);
    for (std::size_t j = 0; j < inner; ++j) {
      const bool obs = by_row ? mask(i, j) : mask(j, i);
      if (!obs) continue;
      const double y = by_row ? m(i, j) : m(j, i);
      const auto f = other.row(j);
      for (std::size_t a = 0; a < rank; ++a) {
        rhs[a] += y * f[a];
        double* g = gram.row(a).data();
        for (std::size_t b = a; b < rank; ++b) g[b] += f[a] * f[b];
      }
    }
    for (std::size_t a = 0; a < rank; ++a) {
      gram(a, a) += reg;
      for (std::size_t b = 0; b < a; ++b) gram(a, b) = gram(b, a);
    }
    const std::vector<double> sol = SolveSymmetric(gram, rhs);
    std::copy(sol.begin(), sol.end(), target.row(i).begin());
  }
}

double ObservedLoss(const Matrix& m, const Mask& mask, const Matrix& u,
                    const Matrix& v) {
  double loss = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (!mask(i, j)) continue;
      const double r = m(i, j) - Dot(u.row(i), v.row(j));
      loss += r * r;
    }
  }
  return loss;
}

}  // namespace

std::size_t Mask::CountObserved() const {
  std::size_t n = 0;
  for (auto b : bits_) n += b;
  return n;
}

AlsResult AlsComplete(const Matrix& m, const Mask& mask,
                      const AlsOptions& options, RngStream& stream) {
  if (mask.rows() != m.rows() || mask.cols() != m.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "mask shape differs from matrix");
  }
  if (options.rank == 0) {
    throw Error(ErrorCode::kInvalidArgument, "completion rank must be >= 1");
  }
  if (!(options.reg >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "completion reg must be >= 0");
  }
  for (std::size_t i = 0; i < m.rows(); ++i) {
    bool any = false;
    for (std::size_t j = 0; j < m.cols() && !any; ++j) any = mask(i, j);
    if (!any) {
      throw Error(ErrorCode::kInvalidArgument,
                  "row " + std::to_string(i) + " has no observed entries");
    }
  }
  for (std::size_t j = 0; j < m.cols(); ++j) {
    bool any = false;
    for (std::size_t i = 0; i < m.rows() && !any; ++i) any = mask(i, j);
    if (!any) {
      throw Error(ErrorCode::kInvalidArgument,
                  "column " + std::to_string(j) + " has no observed entries");
    }
  }

  AlsResult result;
  result.u = Matrix(m.rows(), options.rank);
  result.v = NormalMatrix(stream, m.cols(), options.rank);
  double previous = 0.0;
  for (std::size_t it = 0; it < options.iters; ++it) {
    SolveFactor(m, mask, result.v, options.reg, /*by_row=*/true, result.u);
    SolveFactor(m, mask, result.u, options.reg, /*by_row=*/false, result.v);
    const double data = ObservedLoss(m, mask, result.u, result.v);
    const double objective =
        data + options.reg * (SquaredNorm(result.u.values()) +
                              SquaredNorm(result.v.values()));
    result.observed_loss.push_back(data);
    result.objective.push_back(objective);
    if (it > 0 && options.tol > 0.0 &&
        previous - objective <= options.tol * std::max(previous, 1e-300)) {
      break;
    }
    previous = objective;
  }
  result.completed = MatMulTransB(result.u, result.v);
  return result;
}

}  // namespace lrhte::numerics
