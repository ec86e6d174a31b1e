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

#ifndef LRHTE_LR_PARAMS_H_
#define LRHTE_LR_PARAMS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lrhte/numerics/matrix.h"

namespace lrhte::lr {

struct ModelDims {
  std::size_t num_features = 0;  // m
  std::size_t hidden_dim = 0;    // h
  std::size_t latent_dim = 0;    // d
  std::size_t num_metrics = 0;
  std::vector<int> arms_per_experiment;  // includes control
  bool relu = true;  // false: both layers stay, the activation is identity

  std::size_t num_experiments() const { return arms_per_experiment.size(); }
  bool operator==(const ModelDims&) const = default;
};

// Everything the factorization learns:
//   v(x) = w2 act(w1 x + b1) + b2
//   outcome(x, metric j, experiment k, arm t) = v(x)ᵀ A_j e^t_k
struct LRParams {
  ModelDims dims;
  numerics::Matrix w1;  // h x m
  std::vector<double> b1;
  numerics::Matrix w2;  // d x h
  std::vector<double> b2;
  // arm_embeddings[k] is arms_k x d; row t is e^t_k.
  std::vector<numerics::Matrix> arm_embeddings;
  std::vector<numerics::Matrix> operators;  // A_j, d x d

  // All-zero parameters of the given shape.
  static LRParams Zeros(const ModelDims& dims);

  // Throws kDimensionMismatch / kInvalidArgument on any inconsistency.
  void Validate() const;
  bool AllFinite() const;

  bool operator==(const LRParams&) const = default;
};

// One contiguous parameter block, in a fixed order shared by every LRParams of
// the same dims. Biases are the only blocks exempt from weight decay.
struct ParamBlock {
  std::string name;
  std::span<double> values;
  bool decayed;
};
std::vector<ParamBlock> Blocks(LRParams& params);

struct HyperConfig {
  double learning_rate = 5e-4;
  double weight_decay = 5e-3;
  std::size_t latent_dim = 32;
  std::size_t hidden_dim = 32;
  std::size_t epochs = 250;
  std::size_t batch_size = 1024;
  std::uint64_t seed = 0;
  bool relu = true;
  // Learning rate decays linearly from learning_rate to
  // learning_rate * final_lr_fraction over the run; 1 keeps it constant.
  double final_lr_fraction = 1.0;

  void Validate() const;
  nlohmann::json ToJson() const;
  static HyperConfig FromJson(const nlohmann::json& j);
  bool operator==(const HyperConfig&) const = default;
};

// Weights uniform in +-1/sqrt(fan_in), biases 0, arm embeddings N(0, 1/d),
// operators I + N(0, 0.01/d).
LRParams InitParams(const ModelDims& dims, std::uint64_t seed);

}  // namespace lrhte::lr

#endif  // LRHTE_LR_PARAMS_H_
