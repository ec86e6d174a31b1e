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

#ifndef LRHTE_SYNTH_SEMISYNTHETIC_H_
#define LRHTE_SYNTH_SEMISYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>

#include "lrhte/dataset/dataset.h"
#include "lrhte/numerics/matrix.h"
#include "lrhte/numerics/random.h"

namespace lrhte::synth {

// Turns classifier outputs into a multi-experiment dataset. One class is the
// control; every other class c defines an experiment whose treated potential
// outcome is logit_c and whose control outcome is logit_control. Each unit
// joins each experiment independently with probability `assign_prob`, and is
// then treated with probability 1/2. There is a single metric.
struct SemiSynthConfig {
  std::size_t control_class = 0;
  double assign_prob = 0.1;
  dataset::SplitFractions fractions;
  std::uint64_t seed = 0;
};

dataset::Dataset SemiSyntheticFromLogits(const numerics::Matrix& features,
                                         const numerics::Matrix& logits,
                                         const SemiSynthConfig& config);

// Same, reading headered CSV files with one row per unit.
dataset::Dataset SemiSyntheticFromFiles(
    const std::filesystem::path& features_csv,
    const std::filesystem::path& logits_csv, const SemiSynthConfig& config);

// Stand-in for a trained classifier: features z ~ N(0, I_p) and logits
// tanh(z W) B through a small shared hidden layer, so the logit surface is
// non-linear in z and the classes share low-rank structure.
struct ToyClassifierOutputs {
  numerics::Matrix features;  // n x p
  numerics::Matrix logits;    // n x classes
};

ToyClassifierOutputs MakeToyClassifierOutputs(std::size_t n, std::size_t p,
                                              std::size_t classes,
                                              std::size_t hidden,
                                              numerics::RngStream& stream);

}  // namespace lrhte::synth

#endif  // LRHTE_SYNTH_SEMISYNTHETIC_H_
