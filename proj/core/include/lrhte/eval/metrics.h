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

#ifndef LRHTE_EVAL_METRICS_H_
#define LRHTE_EVAL_METRICS_H_

#include <cstddef>
#include <span>
#include <vector>

#include "lrhte/dataset/outcome_tensor.h"
#include "lrhte/numerics/matrix.h"

namespace lrhte::eval {

inline constexpr double kNuisanceReg = 1e-6;

// Mean squared difference between predicted and true ITEs. Lengths must
// match (kDimensionMismatch) and be nonzero.
double Pehe(std::span<const double> predicted, std::span<const double> truth);

// PEHE over every treated arm of every cell of `truth`. Each truth cell must
// exist in `predicted` with the same arm count (kMissingEntry /
// kDimensionMismatch otherwise).
double Pehe(const dataset::PotentialOutcomeTensor& predicted,
            const dataset::PotentialOutcomeTensor& truth);

// Mean squared prediction error over held-out outcomes.
double MuRisk(std::span<const double> predicted,
              std::span<const double> observed);

// R-loss proxy on one (metric, experiment) validation set:
//   mean(((y - m(x)) - (t - p(x)) tau(x))^2)
// where m and p are ridge fits (with intercept) of y and t on x over this
// same set. t must be 0/1 with both values present (kInvalidArgument).
double TauRisk(const numerics::Matrix& x, std::span<const double> y,
               std::span<const int> treated, std::span<const double> tau_hat,
               double nuisance_reg = kNuisanceReg);

struct Correlation {
  numerics::Matrix matrix;                 // K x K
  std::vector<std::size_t> zero_variance;  // flagged columns
};

// Pearson correlations between the columns of an ITE slice (units x
// experiments). A zero-variance column gets 0 off the diagonal and 1 on it,
// and is listed in zero_variance.
Correlation IteCorrelation(const numerics::Matrix& slice);

}  // namespace lrhte::eval

#endif  // LRHTE_EVAL_METRICS_H_
