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

#include "lrhte/synth/synthetic.h"

#include <cmath>
#include <string>

#include <spdlog/spdlog.h>

#include "lrhte/error.h"
#include "lrhte/numerics/random.h"

namespace lrhte::synth {
namespace {

using numerics::Matrix;
using numerics::RngStream;

constexpr std::uint64_t kOperatorStream = 1;
constexpr std::uint64_t kLoadingStream = 2;
constexpr std::uint64_t kExperimentStreamBase = 1000;

std::vector<double> UnitNormal(RngStream& stream, std::size_t d) {
  std::vector<double> e(d);
  for (double& v : e) v = stream.StdNormal();
  const double norm = std::sqrt(numerics::SquaredNorm(e));
  for (double& v : e) v /= norm;
  return e;
}

}  // namespace

void SynthConfig::Validate() const {
  auto positive = [](std::size_t v, const char* name) {
    if (v == 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(name) + " must be >= 1");
    }
  };
  positive(n_per_arm, "n_per_arm");
  positive(latent_dim, "latent_dim");
  positive(num_features, "num_features");
  positive(num_experiments, "num_experiments");
  positive(num_metrics, "num_metrics");
  if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) {
    throw Error(ErrorCode::kInvalidArgument, "noise_sd must be >= 0");
  }
}

nlohmann::json SynthConfig::ToJson() const {
  return {{"kind", "synthetic"},
          {"n_per_arm", n_per_arm},
          {"val_per_arm", val_per_arm},
          {"test_per_arm", test_per_arm},
          {"latent_dim", latent_dim},
          {"num_features", num_features},
          {"num_experiments", num_experiments},
          {"num_metrics", num_metrics},
          {"noise_sd", noise_sd},
          {"seed", seed},
          {"truth_for_train", truth_for_train}};
}

SyntheticData GenerateSynthetic(const SynthConfig& config) {
  config.Validate();
  if (config.latent_dim > config.num_features) {
    spdlog::warn(
        "latent_dim {} exceeds num_features {}; features cannot identify the "
        "latent vectors",
        config.latent_dim, config.num_features);
  }
  const std::size_t d = config.latent_dim;
  const std::size_t m = config.num_features;
  const std::size_t num_k = config.num_experiments;
  const std::size_t num_j = config.num_metrics;
  const std::size_t train_rows = 2 * config.n_per_arm;
  const std::size_t val_rows = 2 * config.val_per_arm;
  const std::size_t per_exp = train_rows + val_rows + 2 * config.test_per_arm;

  const RngStream root(config.seed);
  SyntheticData out;
  {
    RngStream s = root.Derive(kOperatorStream);
    for (std::size_t j = 0; j < num_j; ++j) {
      out.operators.push_back(numerics::NormalMatrix(s, d, d));
    }
  }
  {
    RngStream s = root.Derive(kLoadingStream);
    out.loading = numerics::NormalMatrix(s, d, m);
  }

  dataset::Dataset& data = out.data;
  const std::size_t total = per_exp * num_k;
  data.units.features = Matrix(total, m);
  data.units.ids.resize(total);
  out.latent = Matrix(total, d);
  out.unit_experiment.resize(total);
  data.observations.reserve(total * num_j);
  data.truth.emplace();

  std::vector<double> w0(d);
  std::vector<double> w1(d);
  double arms[2];
  for (std::size_t k = 0; k < num_k; ++k) {
    RngStream s = root.Derive(kExperimentStreamBase + k);
    auto e1 = UnitNormal(s, d);
    auto e0 = UnitNormal(s, d);
    Matrix v = numerics::NormalMatrix(s, per_exp, d);
    const double scale =
        std::sqrt(static_cast<double>(per_exp)) / numerics::FrobeniusNorm(v);
    for (double& x : v.values()) x *= scale;
    const Matrix x = numerics::MatMul(v, out.loading);

    // Per-unit noise for both arms of every metric, then the assignment.
    Matrix noise(per_exp, 2 * num_j);
    for (double& z : noise.values()) z = config.noise_sd * s.StdNormal();
    std::vector<int> treated(per_exp);
    for (auto& t : treated) t = s.Bernoulli(0.5) ? 1 : 0;

    const std::size_t base = k * per_exp;
    for (std::size_t i = 0; i < per_exp; ++i) {
      const std::size_t row = base + i;
      const auto id = static_cast<std::int64_t>(row);
      data.units.ids[row] = id;
      std::copy(x.row(i).begin(), x.row(i).end(),
                data.units.features.row(row).begin());
      std::copy(v.row(i).begin(), v.row(i).end(), out.latent.row(row).begin());
      out.unit_experiment[row] = static_cast<int>(k);
      if (i < train_rows) {
        data.splits.train.push_back(id);
      } else if (i < train_rows + val_rows) {
        data.splits.validation.push_back(id);
      } else {
        data.splits.test.push_back(id);
      }
    }
    for (std::size_t j = 0; j < num_j; ++j) {
      w0 = numerics::MatVec(out.operators[j], e0);
      w1 = numerics::MatVec(out.operators[j], e1);
      for (std::size_t i = 0; i < per_exp; ++i) {
        const auto id = static_cast<std::int64_t>(base + i);
        arms[0] = numerics::Dot(v.row(i), w0) + noise(i, 2 * j);
        arms[1] = numerics::Dot(v.row(i), w1) + noise(i, 2 * j + 1);
        const int t = treated[i];
        data.observations.push_back(dataset::Observation{
            id, static_cast<int>(k), t, static_cast<int>(j), arms[t]});
        if (config.truth_for_train || i >= train_rows) {
          data.truth->Add(id, static_cast<int>(k), static_cast<int>(j), arms);
        }
      }
    }
    out.embeddings.push_back({std::move(e0), std::move(e1)});
  }

  data.units.BuildIndex();
  dataset::Manifest& mf = data.manifest;
  mf.num_units = total;
  mf.num_features = m;
  mf.num_experiments = num_k;
  mf.num_metrics = num_j;
  mf.arms_per_experiment.assign(num_k, 2);
  mf.has_true_outcomes = true;
  mf.generator = config.ToJson();
  return out;
}

}  // namespace lrhte::synth
