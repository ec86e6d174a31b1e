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
#include <numeric>

#include <gtest/gtest.h>

#include "test_util.h"

namespace lrhte::numerics {
namespace {

using ::lrhte::testing::RandomMatrix;
using ::lrhte::testing::ToEigen;

// Square roots of the eigenvalues of MᵀM from a dense symmetric
// eigensolver, descending.
std::vector<double> EigenOracle(const Matrix& m) {
  const Eigen::MatrixXd e = ToEigen(m);
  const Eigen::MatrixXd gram =
      m.rows() >= m.cols() ? Eigen::MatrixXd(e.transpose() * e)
                           : Eigen::MatrixXd(e * e.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
  std::vector<double> out;
  for (Eigen::Index i = gram.rows() - 1; i >= 0; --i) {
    out.push_back(std::sqrt(std::max(0.0, solver.eigenvalues()(i))));
  }
  return out;
}

TEST(SingularValuesTest, Identity) {
  EXPECT_EQ(SingularValues(Matrix::Identity(3), 3),
            (std::vector<double>{1, 1, 1}));
}

TEST(SingularValuesTest, DiagonalTopTwo) {
  const Matrix m = Matrix::FromRows({{1, 0, 0}, {0, 3, 0}, {0, 0, 2}});
  const auto s = SingularValues(m, 2);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_NEAR(s[0], 3.0, 1e-15);
  EXPECT_NEAR(s[1], 2.0, 1e-15);
}

TEST(SingularValuesTest, MatchesEigenOracle) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Matrix m = RandomMatrix(6, 4, seed);
    const auto s = SingularValues(m, 4);
    const auto oracle = EigenOracle(m);
    for (std::size_t i = 0; i < 4; ++i) {
      EXPECT_NEAR(s[i], oracle[i], 1e-8 * oracle[0]) << seed;
    }
  }
}

TEST(SingularValuesTest, WideMatricesUseTheTranspose) {
  const Matrix m = RandomMatrix(3, 9, 21);
  EXPECT_EQ(SingularValues(m, 3), SingularValues(m.Transposed(), 3));
  const auto oracle = EigenOracle(m);
  const auto s = SingularValues(m, 3);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(s[i], oracle[i], 1e-10);
}

TEST(SingularValuesTest, InvariantToPermutations) {
  const Matrix m = RandomMatrix(8, 5, 33);
  std::vector<std::size_t> rows(8), cols(5);
  std::iota(rows.begin(), rows.end(), 0);
  std::iota(cols.begin(), cols.end(), 0);
  RngStream s(2);
  s.Shuffle(std::span<std::size_t>(rows));
  s.Shuffle(std::span<std::size_t>(cols));
  Matrix p(8, 5);
  for (std::size_t r = 0; r < 8; ++r) {
    for (std::size_t c = 0; c < 5; ++c) p(r, c) = m(rows[r], cols[c]);
  }
  const auto a = SingularValues(m, 5);
  const auto b = SingularValues(p, 5);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(a[i], b[i], 1e-12 * a[0]);
}

TEST(SingularValuesTest, RankDeficientTail) {
  const Matrix u = RandomMatrix(10, 2, 3);
  const Matrix v = RandomMatrix(2, 7, 4);
  const auto s = SingularValues(MatMul(u, v), 7);
  for (std::size_t i = 2; i < 7; ++i) EXPECT_LE(s[i], 1e-12 * s[0]);
}

TEST(SingularValuesTest, KOutOfRange) {
  EXPECT_LRHTE_ERROR(SingularValues(Matrix(3, 4), 4), ErrorCode::kOutOfRange);
}

}  // namespace
}  // namespace lrhte::numerics
