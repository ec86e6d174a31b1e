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

#include "lrhte/numerics/ridge.h"

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include "lrhte/error.h"

namespace lrhte::numerics {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// In-place lower Cholesky factor. Returns false when a pivot is not safely
// positive relative to the largest diagonal entry.
bool CholeskyInPlace(Matrix& a) {
  const std::size_t n = a.rows();
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, a(i, i));
  const double floor = static_cast<double>(n) * kEps * max_diag;
  if (max_diag <= 0.0) return n == 0;
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= a(j, k) * a(j, k);
    if (!(d > floor)) return false;
    const double ljj = std::sqrt(d);
    a(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= a(i, k) * a(j, k);
      a(i, j) = s / ljj;
    }
  }
  return true;
}

void CholeskySolveInPlace(const Matrix& l, Matrix& b) {
  const std::size_t n = l.rows();
  const std::size_t q = b.cols();
  for (std::size_t c = 0; c < q; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = b(i, c);
      for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * b(k, c);
      b(i, c) = s / l(i, i);
    }
    for (std::size_t i = n; i-- > 0;) {
      double s = b(i, c);
      for (std::size_t k = i + 1; k < n; ++k) s -= l(k, i) * b(k, c);
      b(i, c) = s / l(i, i);
    }
  }
}

Matrix LuSolve(Matrix a, Matrix b) {
  const std::size_t n = a.rows();
  const std::size_t q = b.cols();
  double scale = 0.0;
  for (double v : a.values()) scale = std::max(scale, std::abs(v));
  const double tol = static_cast<double>(n) * kEps * scale;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a(i, k)) > std::abs(a(pivot, k))) pivot = i;
    }
    if (!(std::abs(a(pivot, k)) > tol)) {
      throw Error(ErrorCode::kSingularSystem,
                  "linear system of order " + std::to_string(n) +
                      " is singular to working precision (column " +
                      std::to_string(k) + ")");
    }
    if (pivot != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(pivot, j));
      for (std::size_t j = 0; j < q; ++j) std::swap(b(k, j), b(pivot, j));
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a(i, k) / a(k, k);
      if (f == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      for (std::size_t j = 0; j < q; ++j) b(i, j) -= f * b(k, j);
    }
  }
  for (std::size_t c = 0; c < q; ++c) {
    for (std::size_t i = n; i-- > 0;) {
      double s = b(i, c);
      for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * b(j, c);
      b(i, c) = s / a(i, i);
    }
  }
  return b;
}

}  // namespace

Matrix SolveSymmetric(const Matrix& a, const Matrix& b) {
  if (a.rows() != a.cols() || b.rows() != a.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "solve: system is " + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()) + " with " +
                    std::to_string(b.rows()) + " right-hand-side rows");
  }
  Matrix factor = a;
  if (CholeskyInPlace(factor)) {
    Matrix x = b;
    CholeskySolveInPlace(factor, x);
    return x;
  }
  return LuSolve(a, b);
}

std::vector<double> SolveSymmetric(const Matrix& a, std::span<const double> b) {
  Matrix rhs(b.size(), 1, std::vector<double>(b.begin(), b.end()));
  Matrix x = SolveSymmetric(a, rhs);
  return {x.values().begin(), x.values().end()};
}

double RidgeModel::Predict(std::span<const double> x) const {
  return Dot(coef, x) + intercept;
}

std::vector<RidgeModel> RidgeFitMulti(const Matrix& x, const Matrix& ys,
                                      double lambda, bool intercept) {
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  const std::size_t q = ys.cols();
  if (n == 0) {
    throw Error(ErrorCode::kInvalidArgument, "ridge fit needs at least one row");
  }
  if (ys.rows() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "ridge fit: " + std::to_string(n) + " feature rows but " +
                    std::to_string(ys.rows()) + " targets");
  }
  if (!(lambda >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "ridge lambda must be >= 0");
  }

  std::vector<double> x_mean(p, 0.0);
  std::vector<double> y_mean(q, 0.0);
  if (intercept) {
    for (std::size_t r = 0; r < n; ++r) {
      const auto xr = x.row(r);
      for (std::size_t j = 0; j < p; ++j) x_mean[j] += xr[j];
      const auto yr = ys.row(r);
      for (std::size_t c = 0; c < q; ++c) y_mean[c] += yr[c];
    }
    for (double& v : x_mean) v /= static_cast<double>(n);
    for (double& v : y_mean) v /= static_cast<double>(n);
  }

  Matrix gram(p, p);
  Matrix rhs(p, q);
  std::vector<double> xc(p);
  for (std::size_t r = 0; r < n; ++r) {
    const auto xr = x.row(r);
    for (std::size_t j = 0; j < p; ++j) xc[j] = xr[j] - x_mean[j];
    for (std::size_t i = 0; i < p; ++i) {
      const double s = xc[i];
      if (s == 0.0) continue;
      double* g = gram.row(i).data();
      for (std::size_t j = i; j < p; ++j) g[j] += s * xc[j];
      const auto yr = ys.row(r);
      double* b = rhs.row(i).data();
      for (std::size_t c = 0; c < q; ++c) b[c] += s * (yr[c] - y_mean[c]);
    }
  }
  for (std::size_t i = 0; i < p; ++i) {
    gram(i, i) += lambda;
    for (std::size_t j = 0; j < i; ++j) gram(i, j) = gram(j, i);
  }

  const Matrix beta = p == 0 ? Matrix(0, q) : SolveSymmetric(gram, rhs);
  std::vector<RidgeModel> models(q);
  for (std::size_t c = 0; c < q; ++c) {
    RidgeModel& m = models[c];
    m.coef.resize(p);
    for (std::size_t j = 0; j < p; ++j) m.coef[j] = beta(j, c);
    m.intercept = intercept ? y_mean[c] - Dot(x_mean, m.coef) : 0.0;
  }
  return models;
}

RidgeModel RidgeFit(const Matrix& x, std::span<const double> y, double lambda,
                    bool intercept) {
  Matrix ys(y.size(), 1, std::vector<double>(y.begin(), y.end()));
  return std::move(RidgeFitMulti(x, ys, lambda, intercept).front());
}

}  // namespace lrhte::numerics
