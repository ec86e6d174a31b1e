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

#include "lrhte/lr/trainer.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <spdlog/spdlog.h>

#include "lrhte/error.h"
#include "lrhte/lr/model.h"
#include "lrhte/numerics/random.h"

namespace lrhte::lr {
namespace {

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kEpsilon = 1e-8;
constexpr std::uint64_t kShuffleTag = 0x5348554646ULL;

class Adam {
 public:
  explicit Adam(const ModelDims& dims)
      : m_(LRParams::Zeros(dims)), v_(LRParams::Zeros(dims)) {}

  void Step(LRParams& params, LRParams& grads, double lr) {
    ++t_;
    const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(t_));
    auto pb = Blocks(params);
    auto gb = Blocks(grads);
    auto mb = Blocks(m_);
    auto vb = Blocks(v_);
    for (std::size_t b = 0; b < pb.size(); ++b) {
      auto theta = pb[b].values;
      const auto g = gb[b].values;
      auto m = mb[b].values;
      auto v = vb[b].values;
      for (std::size_t i = 0; i < theta.size(); ++i) {
        m[i] = kBeta1 * m[i] + (1.0 - kBeta1) * g[i];
        v[i] = kBeta2 * v[i] + (1.0 - kBeta2) * g[i] * g[i];
        const double m_hat = m[i] / c1;
        const double v_hat = v[i] / c2;
        theta[i] -= lr * m_hat / (std::sqrt(v_hat) + kEpsilon);
      }
    }
  }

 private:
  LRParams m_;
  LRParams v_;
  std::size_t t_ = 0;
};

}  // namespace

ModelDims DimsFor(const dataset::Manifest& manifest, const HyperConfig& hyper) {
  ModelDims dims;
  dims.num_features = manifest.num_features;
  dims.hidden_dim = hyper.hidden_dim;
  dims.latent_dim = hyper.latent_dim;
  dims.num_metrics = manifest.num_metrics;
  dims.arms_per_experiment = manifest.arms_per_experiment;
  dims.relu = hyper.relu;
  return dims;
}

TrainResult Train(const dataset::Dataset& data, const HyperConfig& hyper,
                  const std::optional<LRParams>& init) {
  hyper.Validate();
  const ModelDims dims = DimsFor(data.manifest, hyper);
  TrainResult result;
  if (init) {
    if (!(init->dims == dims)) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "initial parameters do not match the dataset and "
                  "hyperparameters");
    }
    result.params = *init;
  } else {
    result.params = InitParams(dims, hyper.seed);
  }
  LRParams& params = result.params;

  const auto train_obs = data.ObservationsIn(dataset::Split::kTrain);
  if (train_obs.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "dataset has no training observations");
  }
  std::vector<TrainingRow> rows;
  rows.reserve(train_obs.size());
  for (std::size_t idx : train_obs) {
    const auto& o = data.observations[idx];
    const auto row = data.units.RowOf(o.unit_id);
    if (!row) {
      throw Error(ErrorCode::kDanglingReference,
                  "observation references unknown unit " +
                      std::to_string(o.unit_id));
    }
    rows.push_back({static_cast<std::uint32_t>(*row), o.experiment, o.arm,
                    o.metric, o.value});
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const TrainingRow& a, const TrainingRow& b) {
                     return a.unit_row < b.unit_row;
                   });
  // groups[g] .. groups[g + 1] are the rows of one unit.
  std::vector<std::size_t> groups{0};
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].unit_row != rows[i - 1].unit_row) groups.push_back(i);
  }
  groups.push_back(rows.size());
  const std::size_t num_groups = groups.size() - 1;

  const numerics::RngStream shuffle_root =
      numerics::RngStream(hyper.seed).Derive(kShuffleTag);
  Adam adam(dims);
  GradientWorkspace workspace;
  LRParams grads = LRParams::Zeros(dims);
  std::vector<std::size_t> order(num_groups);
  std::vector<TrainingRow> batch;
  batch.reserve(hyper.batch_size + 64);
  const double total_rows =
      static_cast<double>(rows.size()) * static_cast<double>(hyper.epochs);
  double rows_done = 0.0;

  for (std::size_t epoch = 0; epoch < hyper.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    numerics::RngStream stream = shuffle_root.Derive(epoch);
    stream.Shuffle(std::span<std::size_t>(order));
    double loss_sum = 0.0;
    std::size_t num_batches = 0;
    std::size_t next = 0;
    while (next < num_groups) {
      batch.clear();
      while (next < num_groups && batch.size() < hyper.batch_size) {
        const std::size_t g = order[next++];
        batch.insert(batch.end(), rows.begin() + groups[g],
                     rows.begin() + groups[g + 1]);
      }
      const auto [loss, data_loss] = workspace.Compute(
          params, data.units.features, batch, hyper.weight_decay, grads);
      if (!std::isfinite(loss)) {
        throw Error(ErrorCode::kDiverged,
                    "training loss became non-finite at epoch " +
                        std::to_string(epoch) + ", step " +
                        std::to_string(result.report.steps) +
                        "; try a smaller learning rate");
      }
      const double progress = rows_done / total_rows;
      const double lr = hyper.learning_rate *
                        (1.0 - (1.0 - hyper.final_lr_fraction) * progress);
      adam.Step(params, grads, lr);
      rows_done += static_cast<double>(batch.size());
      loss_sum += loss;
      ++num_batches;
      ++result.report.steps;
    }
    const double epoch_loss = loss_sum / static_cast<double>(num_batches);
    result.report.epoch_loss.push_back(epoch_loss);
    spdlog::debug("epoch {} loss {:.6g}", epoch, epoch_loss);
  }
  if (!params.AllFinite()) {
    throw Error(ErrorCode::kDiverged, "trained parameters are not finite");
  }
  if (!data.ObservationsIn(dataset::Split::kValidation).empty()) {
    result.report.validation_mu_risk =
        MuRiskByMetric(params, data, dataset::Split::kValidation);
  }
  return result;
}

std::vector<double> MuRiskByMetric(const LRParams& params,
                                   const dataset::Dataset& data,
                                   dataset::Split split) {
  const auto indices = data.ObservationsIn(split);
  const auto predicted = PredictObservations(params, data, indices);
  std::vector<double> sse(params.dims.num_metrics, 0.0);
  std::vector<std::size_t> count(params.dims.num_metrics, 0);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto& o = data.observations[indices[i]];
    const double r = predicted[i] - o.value;
    sse[o.metric] += r * r;
    ++count[o.metric];
  }
  std::vector<double> out(sse.size());
  for (std::size_t j = 0; j < sse.size(); ++j) {
    out[j] = count[j] == 0 ? std::numeric_limits<double>::quiet_NaN()
                           : sse[j] / static_cast<double>(count[j]);
  }
  return out;
}

}  // namespace lrhte::lr
