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

#ifndef LRHTE_NUMERICS_MATRIX_H_
#define LRHTE_NUMERICS_MATRIX_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace lrhte::numerics {

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  static Matrix Identity(std::size_t n);
  static Matrix FromRows(
      std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  double& operator()(std::size_t r, std::size_t c) {
    return values_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return values_[r * cols_ + c];
  }

  std::span<double> row(std::size_t r) {
    return {values_.data() + r * cols_, cols_};
  }
  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * cols_, cols_};
  }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  Matrix Transposed() const;
  bool AllFinite() const;
  void Fill(double v);

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

// Standard product a * b. Throws kDimensionMismatch when a.cols != b.rows and
// kDiverged when the result is not finite.
Matrix MatMul(const Matrix& a, const Matrix& b);

// Unchecked-for-finiteness kernels used on hot paths. All accumulate into c,
// which must already have the right shape.
void MatMulAdd(const Matrix& a, const Matrix& b, Matrix& c);        // c += a b
void MatMulTransAAdd(const Matrix& a, const Matrix& b, Matrix& c);  // c += aᵀ b
void MatMulTransBAdd(const Matrix& a, const Matrix& b, Matrix& c);  // c += a bᵀ

Matrix MatMulTransA(const Matrix& a, const Matrix& b);
Matrix MatMulTransB(const Matrix& a, const Matrix& b);

// y = a x
std::vector<double> MatVec(const Matrix& a, std::span<const double> x);
// y = aᵀ x
std::vector<double> MatTransVec(const Matrix& a, std::span<const double> x);

double Dot(std::span<const double> a, std::span<const double> b);
double SquaredNorm(std::span<const double> a);
double FrobeniusNorm(const Matrix& m);

}  // namespace lrhte::numerics

#endif  // LRHTE_NUMERICS_MATRIX_H_
