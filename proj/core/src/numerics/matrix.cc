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

#include "lrhte/numerics/matrix.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "lrhte/error.h"

namespace lrhte::numerics {
namespace {

std::string Shape(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void CheckShape(const Matrix& c, std::size_t rows, std::size_t cols,
                const char* op) {
  if (c.rows() != rows || c.cols() != cols) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(op) + ": output is " + Shape(c) + ", expected " +
                    std::to_string(rows) + "x" + std::to_string(cols));
  }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows * cols) {
    throw Error(ErrorCode::kDimensionMismatch,
                "matrix " + std::to_string(rows) + "x" + std::to_string(cols) +
                    " given " + std::to_string(values_.size()) + " values");
  }
}

Matrix Matrix::Identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::FromRows(
    std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<double> values;
  values.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) {
      throw Error(ErrorCode::kDimensionMismatch, "ragged row initializer");
    }
    values.insert(values.end(), row.begin(), row.end());
  }
  return Matrix(r, c, std::move(values));
}

Matrix Matrix::Transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

bool Matrix::AllFinite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

void Matrix::Fill(double v) { std::fill(values_.begin(), values_.end(), v); }

void MatMulAdd(const Matrix& a, const Matrix& b, Matrix& c) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "matmul " + Shape(a) + " by " + Shape(b));
  }
  CheckShape(c, a.rows(), b.cols(), "matmul");
  const std::size_t n = b.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* out = c.row(i).data();
    const auto arow = a.row(i);
    for (std::size_t k = 0; k < arow.size(); ++k) {
      const double s = arow[k];
      if (s == 0.0) continue;
      const double* in = b.row(k).data();
      for (std::size_t j = 0; j < n; ++j) out[j] += s * in[j];
    }
  }
}

void MatMulTransAAdd(const Matrix& a, const Matrix& b, Matrix& c) {
  if (a.rows() != b.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "matmul-transA " + Shape(a) + " by " + Shape(b));
  }
  CheckShape(c, a.cols(), b.cols(), "matmul-transA");
  const std::size_t n = b.cols();
  for (std::size_t k = 0; k < a.rows(); ++k) {
    const auto arow = a.row(k);
    const double* in = b.row(k).data();
    for (std::size_t i = 0; i < arow.size(); ++i) {
      const double s = arow[i];
      if (s == 0.0) continue;
      double* out = c.row(i).data();
      for (std::size_t j = 0; j < n; ++j) out[j] += s * in[j];
    }
  }
}

void MatMulTransBAdd(const Matrix& a, const Matrix& b, Matrix& c) {
  if (a.cols() != b.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "matmul-transB " + Shape(a) + " by " + Shape(b));
  }
  CheckShape(c, a.rows(), b.rows(), "matmul-transB");
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.rows(); ++j) {
      c(i, j) += Dot(a.row(i), b.row(j));
    }
  }
}

Matrix MatMul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "matmul " + Shape(a) + " by " + Shape(b));
  }
  Matrix c(a.rows(), b.cols());
  MatMulAdd(a, b, c);
  if (!c.AllFinite()) {
    throw Error(ErrorCode::kDiverged, "matmul produced non-finite entries");
  }
  return c;
}

Matrix MatMulTransA(const Matrix& a, const Matrix& b) {
  Matrix c(a.cols(), b.cols());
  MatMulTransAAdd(a, b, c);
  return c;
}

Matrix MatMulTransB(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), b.rows());
  MatMulTransBAdd(a, b, c);
  return c;
}

std::vector<double> MatVec(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "matvec " + Shape(a) + " by vector of " +
                    std::to_string(x.size()));
  }
  std::vector<double> y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = Dot(a.row(i), x);
  return y;
}

std::vector<double> MatTransVec(const Matrix& a, std::span<const double> x) {
  if (a.rows() != x.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "transposed matvec " + Shape(a) + " by vector of " +
                    std::to_string(x.size()));
  }
  std::vector<double> y(a.cols(), 0.0);
  for (std::size_t k = 0; k < a.rows(); ++k) {
    const double s = x[k];
    const auto arow = a.row(k);
    for (std::size_t j = 0; j < y.size(); ++j) y[j] += s * arow[j];
  }
  return y;
}

double Dot(std::span<const double> a, std::span<const double> b) {
  // Four fixed lanes so the reduction order never depends on the compiler.
  const std::size_t n = std::min(a.size(), b.size());
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += a[i] * b[i];
    s1 += a[i + 1] * b[i + 1];
    s2 += a[i + 2] * b[i + 2];
    s3 += a[i + 3] * b[i + 3];
  }
  for (; i < n; ++i) s0 += a[i] * b[i];
  return (s0 + s1) + (s2 + s3);
}

double SquaredNorm(std::span<const double> a) { return Dot(a, a); }

double FrobeniusNorm(const Matrix& m) {
  return std::sqrt(SquaredNorm(m.values()));
}

}  // namespace lrhte::numerics
