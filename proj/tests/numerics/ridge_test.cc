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

#include <gtest/gtest.h>

#include "test_util.h"

namespace lrhte::numerics {
namespace {

using ::lrhte::testing::RandomMatrix;
using ::lrhte::testing::ToEigen;

TEST(RidgeTest, ExactLineWithoutPenalty) {
  const Matrix x = Matrix::FromRows({{1}, {2}, {3}, {4}});
  const std::vector<double> y{2, 4, 6, 8};
  const auto fit = RidgeFit(x, y, 0.0, true);
  EXPECT_NEAR(fit.coef[0], 2.0, 1e-12);
  EXPECT_NEAR(fit.intercept, 0.0, 1e-12);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(fit.Predict(x.row(i)), y[i], 1e-12);
  }
}

TEST(RidgeTest, ConstantTargetGivesInterceptOnly) {
  const Matrix x = RandomMatrix(10, 3, 1);
  const std::vector<double> y(10, 4.5);
  for (double lambda : {0.0, 0.1, 10.0}) {
    const auto fit = RidgeFit(x, y, lambda, true);
    EXPECT_NEAR(fit.intercept, 4.5, 1e-12);
    for (double c : fit.coef) EXPECT_NEAR(c, 0.0, 1e-12);
  }
}

TEST(RidgeTest, MatchesClosedFormNormalEquations) {
  // Three points, no intercept: beta = (XᵀX + lambda I)^-1 Xᵀ y.
  const Matrix x = Matrix::FromRows({{1, 2}, {3, 1}, {0, 1}});
  const std::vector<double> y{1, 2, 3};
  const double lambda = 0.1;
  const auto fit = RidgeFit(x, y, lambda, false);
  const Eigen::MatrixXd ex = ToEigen(x);
  const Eigen::Vector3d ey(1, 2, 3);
  const Eigen::VectorXd beta =
      (ex.transpose() * ex + lambda * Eigen::MatrixXd::Identity(2, 2))
          .ldlt()
          .solve(ex.transpose() * ey);
  EXPECT_NEAR(fit.coef[0], beta(0), 1e-12);
  EXPECT_NEAR(fit.coef[1], beta(1), 1e-12);
  EXPECT_EQ(fit.intercept, 0.0);
}

TEST(RidgeTest, InterceptIsUnpenalized) {
  // Centered oracle: slopes from centered data, intercept from the means.
  const Matrix x = RandomMatrix(20, 3, 2);
  std::vector<double> y(20);
  for (std::size_t i = 0; i < 20; ++i) y[i] = 5.0 + x(i, 0) - 2.0 * x(i, 2);
  const double lambda = 3.0;
  const auto fit = RidgeFit(x, y, lambda, true);
  Eigen::MatrixXd ex = ToEigen(x);
  Eigen::VectorXd ey = Eigen::Map<Eigen::VectorXd>(y.data(), 20);
  const Eigen::RowVectorXd xm = ex.colwise().mean();
  const double ym = ey.mean();
  ex.rowwise() -= xm;
  ey.array() -= ym;
  const Eigen::VectorXd beta =
      (ex.transpose() * ex + lambda * Eigen::MatrixXd::Identity(3, 3))
          .ldlt()
          .solve(ex.transpose() * ey);
  for (int j = 0; j < 3; ++j) EXPECT_NEAR(fit.coef[j], beta(j), 1e-12);
  EXPECT_NEAR(fit.intercept, ym - xm.dot(beta), 1e-12);
}

TEST(RidgeTest, ExactLinearDataHasTinyResidual) {
  const Matrix x = RandomMatrix(50, 6, 3);
  std::vector<double> y(50);
  for (std::size_t i = 0; i < 50; ++i) {
    y[i] = -1.0;
    for (std::size_t j = 0; j < 6; ++j) y[i] += (j + 1.0) * x(i, j);
  }
  const auto fit = RidgeFit(x, y, 0.0, true);
  double worst = 0.0;
  for (std::size_t i = 0; i < 50; ++i) {
    worst = std::max(worst, std::abs(fit.Predict(x.row(i)) - y[i]));
  }
  EXPECT_LE(worst, 1e-9);
}

TEST(RidgeTest, SingularSystemThrowsWithoutPenalty) {
  const Matrix x = Matrix::FromRows({{1, 2}, {2, 4}, {3, 6}});
  const std::vector<double> y{1, 2, 3};
  EXPECT_LRHTE_ERROR(RidgeFit(x, y, 0.0, false), ErrorCode::kSingularSystem);
  EXPECT_NO_THROW(RidgeFit(x, y, 1e-3, false));
}

TEST(RidgeTest, MultiTargetMatchesSingleFits) {
  const Matrix x = RandomMatrix(30, 4, 4);
  const Matrix ys = RandomMatrix(30, 3, 5);
  const auto multi = RidgeFitMulti(x, ys, 0.5, true);
  for (std::size_t c = 0; c < 3; ++c) {
    std::vector<double> y(30);
    for (std::size_t i = 0; i < 30; ++i) y[i] = ys(i, c);
    const auto single = RidgeFit(x, y, 0.5, true);
    EXPECT_EQ(single.coef, multi[c].coef);
    EXPECT_EQ(single.intercept, multi[c].intercept);
  }
}

TEST(RidgeTest, ZeroColumnsGivesMean) {
  const Matrix x(4, 0);
  const std::vector<double> y{1, 2, 3, 6};
  const auto fit = RidgeFit(x, y, 0.0, true);
  EXPECT_TRUE(fit.coef.empty());
  EXPECT_DOUBLE_EQ(fit.intercept, 3.0);
}

TEST(RidgeTest, RejectsBadArguments) {
  const Matrix x = RandomMatrix(3, 2, 6);
  const std::vector<double> y{1, 2};
  EXPECT_LRHTE_ERROR(RidgeFit(x, y, 0.1, true), ErrorCode::kDimensionMismatch);
  const std::vector<double> y3{1, 2, 3};
  EXPECT_LRHTE_ERROR(RidgeFit(x, y3, -1.0, true), ErrorCode::kInvalidArgument);
  EXPECT_LRHTE_ERROR(RidgeFit(Matrix(0, 2), {}, 0.1, true),
                     ErrorCode::kInvalidArgument);
}

TEST(SolveSymmetricTest, FallsBackForIndefiniteSystems) {
  // Symmetric but indefinite: Cholesky fails, LU succeeds.
  const Matrix a = Matrix::FromRows({{0, 1}, {1, 0}});
  const auto x = SolveSymmetric(a, std::vector<double>{2, 3});
  EXPECT_NEAR(x[0], 3.0, 1e-15);
  EXPECT_NEAR(x[1], 2.0, 1e-15);
}

}  // namespace
}  // namespace lrhte::numerics
