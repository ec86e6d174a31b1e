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

#ifndef LRHTE_LR_TRAINER_H_
#define LRHTE_LR_TRAINER_H_

#include <cstddef>
#include <optional>
#include <vector>

#include "lrhte/dataset/dataset.h"
#include "lrhte/lr/params.h"

namespace lrhte::lr {

struct TrainReport {
  // Mean of the minibatch losses (including the penalty) of each epoch.
  std::vector<double> epoch_loss;
  // Validation mu-risk per metric after the last epoch; empty when the
  // dataset has no validation observations.
  std::vector<double> validation_mu_risk;
  std::size_t steps = 0;
};

struct TrainResult {
  LRParams params;
  TrainReport report;
};

// Model dimensions implied by a dataset and a hyperparameter set.
ModelDims DimsFor(const dataset::Manifest& manifest, const HyperConfig& hyper);

// Adam on the train-split observations. Each epoch shuffles the training
// units and packs whole units into minibatches of at least batch_size
// observations, so every unit's feature row is embedded once per step.
// Starts from `init` when given (its dims must match), otherwise from
// InitParams(dims, hyper.seed). A non-finite loss throws kDiverged.
TrainResult Train(const dataset::Dataset& data, const HyperConfig& hyper,
                  const std::optional<LRParams>& init = std::nullopt);

// Mean squared error of the predictions on the observations of `split`,
// one entry per metric (NaN for a metric with no observations there).
std::vector<double> MuRiskByMetric(const LRParams& params,
                                   const dataset::Dataset& data,
                                   dataset::Split split);

}  // namespace lrhte::lr

#endif  // LRHTE_LR_TRAINER_H_
