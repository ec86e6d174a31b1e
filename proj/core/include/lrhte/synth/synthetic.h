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

#ifndef LRHTE_SYNTH_SYNTHETIC_H_
#define LRHTE_SYNTH_SYNTHETIC_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "lrhte/dataset/dataset.h"
#include "lrhte/numerics/matrix.h"

namespace lrhte::synth {

// Low-rank linear data generator. For every experiment a fresh latent matrix
// v is drawn and scaled to Frobenius norm sqrt(rows), so each unit's latent
// vector has unit mean squared norm regardless of n. Potential outcomes are
// v A_j e^t_k plus N(0, noise_sd^2) per realization; features are v L with a
// single loading matrix L shared by all experiments.
struct SynthConfig {
  std::size_t n_per_arm = 100;   // training units per arm, per experiment
  std::size_t val_per_arm = 100;
  std::size_t test_per_arm = 100;
  std::size_t latent_dim = 32;   // d
  std::size_t num_features = 128;  // m
  std::size_t num_experiments = 50;
  std::size_t num_metrics = 5;
  double noise_sd = 0.1;
  std::uint64_t seed = 0;
  // When false, true outcomes are only stored for validation and test units.
  bool truth_for_train = true;

  void Validate() const;
  nlohmann::json ToJson() const;
};

struct SyntheticData {
  dataset::Dataset data;
  numerics::Matrix loading;                 // d x m
  std::vector<numerics::Matrix> operators;  // J of d x d
  // embeddings[k][t]: unit-norm arm embedding, t = 0 control, 1 treated.
  std::vector<std::array<std::vector<double>, 2>> embeddings;
  numerics::Matrix latent;  // num_units x d, rows in unit-table order
  std::vector<int> unit_experiment;  // experiment of each unit-table row
};

SyntheticData GenerateSynthetic(const SynthConfig& config);

}  // namespace lrhte::synth

#endif  // LRHTE_SYNTH_SYNTHETIC_H_
