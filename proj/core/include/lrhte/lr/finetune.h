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

#ifndef LRHTE_LR_FINETUNE_H_
#define LRHTE_LR_FINETUNE_H_

#include <cstddef>
#include <span>
#include <vector>

#include "lrhte/lr/params.h"
#include "lrhte/numerics/matrix.h"

namespace lrhte::lr {

inline constexpr double kFinetuneReg = 1e-8;

struct FinetuneResult {
  numerics::Matrix embeddings;      // num_arms x d; row t is the new e^t
  std::vector<std::size_t> counts;  // observations per arm
  double residual = 0.0;            // mean squared residual over all rows
};

// Fits arm embeddings for a new experiment on top of a frozen feature
// network: for each arm t, ridge (no intercept) of y on v(x) over the rows
// with that arm. Row i of `features` goes with arms[i] and y[i]. Arms with no
// rows throw kEmptyCell; arms with fewer rows than d log a warning.
FinetuneResult FinetuneNewExperiment(const LRParams& frozen,
                                     const numerics::Matrix& features,
                                     std::span<const int> arms,
                                     std::span<const double> y, int num_arms,
                                     double reg = kFinetuneReg);

// v(x)ᵀ (e^t - e^0) with the fine-tuned embeddings.
double FinetunedCate(const LRParams& frozen,
                     const numerics::Matrix& embeddings,
                     std::span<const double> x, int arm);

}  // namespace lrhte::lr

#endif  // LRHTE_LR_FINETUNE_H_
