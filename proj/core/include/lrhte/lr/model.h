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

#ifndef LRHTE_LR_MODEL_H_
#define LRHTE_LR_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "lrhte/dataset/dataset.h"
#include "lrhte/lr/params.h"
#include "lrhte/numerics/matrix.h"

namespace lrhte::lr {

// v(x). Throws kDimensionMismatch when |x| != m.
std::vector<double> EmbedUnit(const LRParams& params, std::span<const double> x);

// v(x) for the given rows of `features` (all rows when `rows` is empty),
// returned as a rows x d matrix.
numerics::Matrix EmbedRows(const LRParams& params,
                           const numerics::Matrix& features,
                           std::span<const std::size_t> rows);

// A_j e^t_k, the vector whose dot product with v(x) is the predicted outcome.
std::vector<double> OutcomeDirection(const LRParams& params, int metric,
                                     int experiment, int arm);

// v(x)ᵀ A_j e^t_k. Unknown indices throw kOutOfRange.
double PredictOutcome(const LRParams& params, std::span<const double> x,
                      int metric, int experiment, int arm);

// v(x)ᵀ A_j (e^t_k - e^0_k); arm must be a treated arm (t >= 1).
double PredictCate(const LRParams& params, std::span<const double> x,
                   int metric, int experiment, int arm);

// One squared-error term: the unit is a row of the feature matrix.
struct TrainingRow {
  std::uint32_t unit_row = 0;
  int experiment = 0;
  int arm = 0;
  int metric = 0;
  double value = 0.0;
};

struct LossAndGrads {
  double loss = 0.0;       // data_loss + penalty
  double data_loss = 0.0;  // mean squared residual over the batch
  LRParams grads;          // same shape as the parameters
};

// Mean squared residual over `rows` plus (weight_decay / 2) * |theta|^2 over
// every non-bias block, with analytic gradients (ReLU subgradient 0 at 0).
LossAndGrads LossAndGradients(const LRParams& params,
                              const numerics::Matrix& features,
                              std::span<const TrainingRow> rows,
                              double weight_decay);

// Reusable buffers for repeated gradient evaluations on one model shape.
class GradientWorkspace {
 public:
  // Writes gradients into `grads` (resized on first use) and returns
  // {loss, data_loss}.
  std::pair<double, double> Compute(const LRParams& params,
                                    const numerics::Matrix& features,
                                    std::span<const TrainingRow> rows,
                                    double weight_decay, LRParams& grads);

 private:
  std::unordered_map<std::uint32_t, std::uint32_t> local_unit_;
  std::unordered_map<std::uint64_t, std::uint32_t> local_combo_;
  std::vector<std::uint32_t> row_unit_;
  std::vector<std::uint32_t> row_combo_;
  std::vector<std::uint32_t> unit_rows_;
  std::vector<std::uint64_t> combos_;
  numerics::Matrix x_, z_, act_, v_, grad_v_, grad_act_, w1t_, w2t_;
  numerics::Matrix dirs_, grad_dirs_;
};

// Predicted outcome for each listed observation of `data`, in list order.
std::vector<double> PredictObservations(const LRParams& params,
                                        const dataset::Dataset& data,
                                        std::span<const std::size_t> indices);

// Predicted outcomes for every metric and arm of each target, in the
// PotentialOutcomeTensor layout used for true outcomes.
dataset::PotentialOutcomeTensor PredictTensor(
    const LRParams& params, const dataset::Dataset& data,
    std::span<const dataset::PredictionTarget> targets);

}  // namespace lrhte::lr

#endif  // LRHTE_LR_MODEL_H_
