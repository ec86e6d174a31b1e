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

#include "lrhte/synth/semisynthetic.h"

#include <cmath>
#include <string>

#include "lrhte/dataset/csv.h"
#include "lrhte/error.h"

namespace lrhte::synth {

using numerics::Matrix;

dataset::Dataset SemiSyntheticFromLogits(const Matrix& features,
                                         const Matrix& logits,
                                         const SemiSynthConfig& config) {
  const std::size_t n = features.rows();
  if (logits.rows() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "features have " + std::to_string(n) + " rows but logits have " +
                    std::to_string(logits.rows()));
  }
  const std::size_t classes = logits.cols();
  if (classes < 2) {
    throw Error(ErrorCode::kInvalidArgument, "need at least two classes");
  }
  if (config.control_class >= classes) {
    throw Error(ErrorCode::kOutOfRange,
                "control class " + std::to_string(config.control_class) +
                    " out of range for " + std::to_string(classes) +
                    " classes");
  }
  if (!(config.assign_prob > 0.0 && config.assign_prob <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "assign_prob must be in (0, 1]");
  }
  if (!features.AllFinite() || !logits.AllFinite()) {
    throw Error(ErrorCode::kSchema, "non-finite feature or logit");
  }

  std::vector<std::size_t> treated_class;
  for (std::size_t c = 0; c < classes; ++c) {
    if (c != config.control_class) treated_class.push_back(c);
  }
  const std::size_t num_k = treated_class.size();

  dataset::Dataset data;
  data.units.features = features;
  data.units.ids.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    data.units.ids[i] = static_cast<std::int64_t>(i);
  }
  data.units.BuildIndex();

  numerics::RngStream root(config.seed);
  numerics::RngStream assign = root.Derive(1);
  data.truth.emplace();
  double arms[2];
  for (std::size_t i = 0; i < n; ++i) {
    const auto id = static_cast<std::int64_t>(i);
    const double control = logits(i, config.control_class);
    for (std::size_t k = 0; k < num_k; ++k) {
      arms[0] = control;
      arms[1] = logits(i, treated_class[k]);
      data.truth->Add(id, static_cast<int>(k), 0, arms);
      if (assign.Bernoulli(config.assign_prob)) {
        const int t = assign.Bernoulli(0.5) ? 1 : 0;
        data.observations.push_back(
            dataset::Observation{id, static_cast<int>(k), t, 0, arms[t]});
      }
    }
  }
  numerics::RngStream split_stream = root.Derive(2);
  data.splits = dataset::SplitUnits(data.units.ids, config.fractions,
                                    split_stream);

  dataset::Manifest& mf = data.manifest;
  mf.num_units = n;
  mf.num_features = features.cols();
  mf.num_experiments = num_k;
  mf.num_metrics = 1;
  mf.arms_per_experiment.assign(num_k, 2);
  mf.has_true_outcomes = true;
  nlohmann::json treated_json = nlohmann::json::array();
  for (auto c : treated_class) treated_json.push_back(c);
  mf.generator = {{"kind", "semisynthetic"},
                  {"control_class", config.control_class},
                  {"experiment_classes", treated_json},
                  {"assign_prob", config.assign_prob},
                  {"train_fraction", config.fractions.train},
                  {"validation_fraction", config.fractions.validation},
                  {"test_fraction", config.fractions.test},
                  {"seed", config.seed}};
  data.Validate();
  return data;
}

dataset::Dataset SemiSyntheticFromFiles(
    const std::filesystem::path& features_csv,
    const std::filesystem::path& logits_csv, const SemiSynthConfig& config) {
  const Matrix features = dataset::ReadNumericCsv(features_csv);
  const Matrix logits = dataset::ReadNumericCsv(logits_csv);
  auto data = SemiSyntheticFromLogits(features, logits, config);
  data.manifest.generator["features_file"] =
      features_csv.filename().string();
  data.manifest.generator["logits_file"] = logits_csv.filename().string();
  return data;
}

ToyClassifierOutputs MakeToyClassifierOutputs(std::size_t n, std::size_t p,
                                              std::size_t classes,
                                              std::size_t hidden,
                                              numerics::RngStream& stream) {
  ToyClassifierOutputs out;
  out.features = numerics::NormalMatrix(stream, n, p);
  const Matrix w = numerics::NormalMatrix(
      stream, p, hidden, 1.5 / std::sqrt(static_cast<double>(p)));
  const Matrix b = numerics::NormalMatrix(
      stream, hidden, classes, 1.0 / std::sqrt(static_cast<double>(hidden)));
  Matrix h = numerics::MatMul(out.features, w);
  for (double& v : h.values()) v = std::tanh(v);
  out.logits = numerics::MatMul(h, b);
  return out;
}

}  // namespace lrhte::synth
