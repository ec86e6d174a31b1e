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

#ifndef LRHTE_TLEARNER_TLEARNER_H_
#define LRHTE_TLEARNER_TLEARNER_H_

#include <cstddef>
#include <span>
#include <vector>

#include "lrhte/dataset/dataset.h"
#include "lrhte/numerics/ridge.h"

namespace lrhte::tlearner {

inline constexpr double kDefaultLambda = 1e-6;

// Independent outcome models for one (metric, experiment, treated arm).
struct TLearnerPair {
  int metric = 0;
  int experiment = 0;
  int arm = 1;
  numerics::RidgeModel treated;
  numerics::RidgeModel control;
};

// Treated minus control prediction.
double TCate(const TLearnerPair& pair, std::span<const double> x);

// One pair per (metric, experiment, treated arm), ordered by metric, then
// experiment, then arm. Each arm's model is a ridge fit with intercept on
// that cell's observations in `split` alone. A (experiment, arm, metric)
// cell with fewer than 2 observations throws kEmptyCell naming the cell.
std::vector<TLearnerPair> FitAll(const dataset::Dataset& data,
                                 double lambda = kDefaultLambda,
                                 dataset::Split split = dataset::Split::kTrain);

// Predicted outcomes (control and every treated arm) for each target and
// metric, laid out like the true-outcome tensor.
dataset::PotentialOutcomeTensor PredictTensor(
    std::span<const TLearnerPair> pairs, const dataset::Dataset& data,
    std::span<const dataset::PredictionTarget> targets);

}  // namespace lrhte::tlearner

#endif  // LRHTE_TLEARNER_TLEARNER_H_
