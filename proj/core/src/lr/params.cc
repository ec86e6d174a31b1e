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

#include "lrhte/lr/params.h"

#include <cmath>

#include "lrhte/error.h"
#include "lrhte/numerics/random.h"

namespace lrhte::lr {
namespace {

using numerics::Matrix;

void Expect(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kDimensionMismatch, "LR params: " + what);
}

bool Finite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace

LRParams LRParams::Zeros(const ModelDims& dims) {
  LRParams p;
  p.dims = dims;
  p.w1 = Matrix(dims.hidden_dim, dims.num_features);
  p.b1.assign(dims.hidden_dim, 0.0);
  p.w2 = Matrix(dims.latent_dim, dims.hidden_dim);
  p.b2.assign(dims.latent_dim, 0.0);
  for (int arms : dims.arms_per_experiment) {
    p.arm_embeddings.emplace_back(static_cast<std::size_t>(arms),
                                  dims.latent_dim);
  }
  for (std::size_t j = 0; j < dims.num_metrics; ++j) {
    p.operators.emplace_back(dims.latent_dim, dims.latent_dim);
  }
  return p;
}

void LRParams::Validate() const {
  const auto& d = dims;
  if (d.num_features == 0 || d.hidden_dim == 0 || d.latent_dim == 0 ||
      d.num_metrics == 0 || d.arms_per_experiment.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "LR params: every dimension must be >= 1");
  }
  Expect(w1.rows() == d.hidden_dim && w1.cols() == d.num_features,
         "layer1 weight shape");
  Expect(b1.size() == d.hidden_dim, "layer1 bias length");
  Expect(w2.rows() == d.latent_dim && w2.cols() == d.hidden_dim,
         "layer2 weight shape");
  Expect(b2.size() == d.latent_dim, "layer2 bias length");
  Expect(arm_embeddings.size() == d.num_experiments(), "experiment count");
  for (std::size_t k = 0; k < arm_embeddings.size(); ++k) {
    Expect(d.arms_per_experiment[k] >= 2, "experiment needs >= 2 arms");
    Expect(arm_embeddings[k].rows() ==
                   static_cast<std::size_t>(d.arms_per_experiment[k]) &&
               arm_embeddings[k].cols() == d.latent_dim,
           "arm embedding shape of experiment " + std::to_string(k));
  }
  Expect(operators.size() == d.num_metrics, "metric count");
  for (const auto& a : operators) {
    Expect(a.rows() == d.latent_dim && a.cols() == d.latent_dim,
           "operator shape");
  }
}

bool LRParams::AllFinite() const {
  if (!w1.AllFinite() || !w2.AllFinite() || !Finite(b1) || !Finite(b2)) {
    return false;
  }
  for (const auto& e : arm_embeddings) {
    if (!e.AllFinite()) return false;
  }
  for (const auto& a : operators) {
    if (!a.AllFinite()) return false;
  }
  return true;
}

std::vector<ParamBlock> Blocks(LRParams& p) {
  std::vector<ParamBlock> blocks;
  blocks.push_back({"w1", p.w1.values(), true});
  blocks.push_back({"b1", p.b1, false});
  blocks.push_back({"w2", p.w2.values(), true});
  blocks.push_back({"b2", p.b2, false});
  for (std::size_t k = 0; k < p.arm_embeddings.size(); ++k) {
    blocks.push_back(
        {"e" + std::to_string(k), p.arm_embeddings[k].values(), true});
  }
  for (std::size_t j = 0; j < p.operators.size(); ++j) {
    blocks.push_back({"A" + std::to_string(j), p.operators[j].values(), true});
  }
  return blocks;
}

void HyperConfig::Validate() const {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw Error(ErrorCode::kInvalidArgument, "learning_rate must be >= 0");
  }
  if (!(weight_decay >= 0.0) || !std::isfinite(weight_decay)) {
    throw Error(ErrorCode::kInvalidArgument, "weight_decay must be >= 0");
  }
  if (latent_dim == 0 || hidden_dim == 0 || batch_size == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "latent_dim, hidden_dim and batch_size must be >= 1");
  }
  if (!(final_lr_fraction >= 0.0 && final_lr_fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "final_lr_fraction must be in [0, 1]");
  }
}

nlohmann::json HyperConfig::ToJson() const {
  return {{"learning_rate", learning_rate},
          {"weight_decay", weight_decay},
          {"latent_dim", latent_dim},
          {"hidden_dim", hidden_dim},
          {"epochs", epochs},
          {"batch_size", batch_size},
          {"seed", seed},
          {"relu", relu},
          {"final_lr_fraction", final_lr_fraction}};
}

HyperConfig HyperConfig::FromJson(const nlohmann::json& j) {
  HyperConfig h;
  h.learning_rate = j.at("learning_rate").get<double>();
  h.weight_decay = j.at("weight_decay").get<double>();
  h.latent_dim = j.at("latent_dim").get<std::size_t>();
  h.hidden_dim = j.at("hidden_dim").get<std::size_t>();
  h.epochs = j.at("epochs").get<std::size_t>();
  h.batch_size = j.at("batch_size").get<std::size_t>();
  h.seed = j.at("seed").get<std::uint64_t>();
  h.relu = j.at("relu").get<bool>();
  h.final_lr_fraction = j.value("final_lr_fraction", 1.0);
  return h;
}

LRParams InitParams(const ModelDims& dims, std::uint64_t seed) {
  LRParams p = LRParams::Zeros(dims);
  numerics::RngStream root(seed);
  auto uniform = [](numerics::RngStream& s, Matrix& w) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(w.cols()));
    for (double& v : w.values()) v = bound * (2.0 * s.Uniform01() - 1.0);
  };
  numerics::RngStream s1 = root.Derive(1);
  uniform(s1, p.w1);
  numerics::RngStream s2 = root.Derive(2);
  uniform(s2, p.w2);
  const double d = static_cast<double>(dims.latent_dim);
  numerics::RngStream se = root.Derive(3);
  for (auto& e : p.arm_embeddings) {
    for (double& v : e.values()) v = se.StdNormal() / std::sqrt(d);
  }
  numerics::RngStream sa = root.Derive(4);
  for (auto& a : p.operators) {
    for (double& v : a.values()) v = sa.StdNormal() * std::sqrt(0.01 / d);
    for (std::size_t i = 0; i < dims.latent_dim; ++i) a(i, i) += 1.0;
  }
  p.Validate();
  return p;
}

}  // namespace lrhte::lr
