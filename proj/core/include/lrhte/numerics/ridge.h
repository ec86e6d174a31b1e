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

#ifndef LRHTE_NUMERICS_RIDGE_H_
#define LRHTE_NUMERICS_RIDGE_H_

#include <span>
#include <vector>

#include "lrhte/numerics/matrix.h"

namespace lrhte::numerics {

// Solves a x = b for symmetric positive (semi)definite a. Tries Cholesky
// first and falls back to LU with partial pivoting. A system that is singular
// to working precision throws kSingularSystem. `b` may hold several
// right-hand sides as columns.
Matrix SolveSymmetric(const Matrix& a, const Matrix& b);
std::vector<double> SolveSymmetric(const Matrix& a, std::span<const double> b);

struct RidgeModel {
  std::vector<double> coef;
  double intercept = 0.0;

  double Predict(std::span<const double> x) const;
};

// Minimizes ||y - X beta - b||^2 + lambda ||beta||^2, with the intercept b
// unpenalized (and fixed to zero when `intercept` is false). X may have zero
// columns, which yields the intercept-only model.
RidgeModel RidgeFit(const Matrix& x, std::span<const double> y, double lambda,
                    bool intercept);

// Same problem for each column of `ys` (n x q), sharing one factorization.
std::vector<RidgeModel> RidgeFitMulti(const Matrix& x, const Matrix& ys,
                                      double lambda, bool intercept);

}  // namespace lrhte::numerics

#endif  // LRHTE_NUMERICS_RIDGE_H_
