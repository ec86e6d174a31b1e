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

#include "lrhte/tlearner/tlearner.h"

#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <utility>

#include "lrhte/error.h"

namespace lrhte::tlearner {
namespace {

using numerics::Matrix;
using numerics::RidgeModel;

std::string CellName(int experiment, int arm, int metric) {
  return "experiment " + std::to_string(experiment) + " arm " +
         std::to_string(arm) + " metric " + std::to_string(metric);
}

// Per-metric ridge fits for one (experiment, arm) cell. Units observed on
// every metric share a single factorization.
std::vector<RidgeModel> FitCell(const dataset::Dataset& data,
                                const std::vector<std::size_t>& obs,
                                int experiment, int arm, double lambda) {
  const std::size_t num_metrics = data.manifest.num_metrics;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  // unit row -> outcome per metric, in first-seen order.
  std::map<std::size_t, std::size_t> local;
  std::vector<std::size_t> rows;
  std::vector<double> values;
  for (std::size_t idx : obs) {
    const auto& o = data.observations[idx];
    const std::size_t row = *data.units.RowOf(o.unit_id);
    auto [it, inserted] = local.emplace(row, rows.size());
    if (inserted) {
      rows.push_back(row);
      values.resize(values.size() + num_metrics, nan);
    }
    values[it->second * num_metrics + static_cast<std::size_t>(o.metric)] =
        o.value;
  }
  std::vector<std::size_t> counts(num_metrics, 0);
  for (std::size_t u = 0; u < rows.size(); ++u) {
    for (std::size_t j = 0; j < num_metrics; ++j) {
      if (!std::isnan(values[u * num_metrics + j])) ++counts[j];
    }
  }
  for (std::size_t j = 0; j < num_metrics; ++j) {
    if (counts[j] < 2) {
      throw Error(ErrorCode::kEmptyCell,
                  CellName(experiment, arm, static_cast<int>(j)) + " has " +
                      std::to_string(counts[j]) +
                      " training observations; at least 2 are needed");
    }
  }

  const std::size_t m = data.units.num_features();
  auto gather = [&](const std::vector<std::size_t>& units) {
    Matrix x(units.size(), m);
    for (std::size_t i = 0; i < units.size(); ++i) {
      const auto src = data.units.features.row(rows[units[i]]);
      std::copy(src.begin(), src.end(), x.row(i).begin());
    }
    return x;
  };

  bool complete = true;
  for (std::size_t j = 0; j < num_metrics; ++j) {
    complete = complete && counts[j] == rows.size();
  }
  if (complete) {
    std::vector<std::size_t> all(rows.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    const Matrix ys(rows.size(), num_metrics, std::move(values));
    return numerics::RidgeFitMulti(gather(all), ys, lambda, true);
  }
  std::vector<RidgeModel> models;
  for (std::size_t j = 0; j < num_metrics; ++j) {
    std::vector<std::size_t> units;
    std::vector<double> y;
    for (std::size_t u = 0; u < rows.size(); ++u) {
      const double v = values[u * num_metrics + j];
      if (std::isnan(v)) continue;
      units.push_back(u);
      y.push_back(v);
    }
    models.push_back(numerics::RidgeFit(gather(units), y, lambda, true));
  }
  return models;
}

}  // namespace

double TCate(const TLearnerPair& pair, std::span<const double> x) {
  return pair.treated.Predict(x) - pair.control.Predict(x);
}

std::vector<TLearnerPair> FitAll(const dataset::Dataset& data, double lambda,
                                 dataset::Split split) {
  const std::size_t num_experiments = data.manifest.num_experiments;
  // cells[(experiment, arm)] -> observation indices.
  std::map<std::pair<int, int>, std::vector<std::size_t>> cells;
  for (std::size_t idx : data.ObservationsIn(split)) {
    const auto& o = data.observations[idx];
    cells[{o.experiment, o.arm}].push_back(idx);
  }
  // fits[k][t][j]
  std::vector<std::vector<std::vector<RidgeModel>>> fits(num_experiments);
  for (std::size_t k = 0; k < num_experiments; ++k) {
    const int arms = data.manifest.arms_per_experiment[k];
    for (int t = 0; t < arms; ++t) {
      const auto it = cells.find({static_cast<int>(k), t});
      if (it == cells.end()) {
        throw Error(ErrorCode::kEmptyCell,
                    "experiment " + std::to_string(k) + " arm " +
                        std::to_string(t) + " has no training observations");
      }
      fits[k].push_back(
          FitCell(data, it->second, static_cast<int>(k), t, lambda));
    }
  }
  std::vector<TLearnerPair> pairs;
  for (std::size_t j = 0; j < data.manifest.num_metrics; ++j) {
    for (std::size_t k = 0; k < num_experiments; ++k) {
      for (std::size_t t = 1; t < fits[k].size(); ++t) {
        pairs.push_back({static_cast<int>(j), static_cast<int>(k),
                         static_cast<int>(t), fits[k][t][j], fits[k][0][j]});
      }
    }
  }
  return pairs;
}

dataset::PotentialOutcomeTensor PredictTensor(
    std::span<const TLearnerPair> pairs, const dataset::Dataset& data,
    std::span<const dataset::PredictionTarget> targets) {
  const std::size_t num_metrics = data.manifest.num_metrics;
  const std::size_t num_experiments = data.manifest.num_experiments;
  // index[j][k][t - 1] -> pair
  std::vector<std::vector<std::vector<const TLearnerPair*>>> index(
      num_metrics, std::vector<std::vector<const TLearnerPair*>>(
                       num_experiments));
  for (const auto& p : pairs) {
    if (p.metric < 0 || static_cast<std::size_t>(p.metric) >= num_metrics ||
        p.experiment < 0 ||
        static_cast<std::size_t>(p.experiment) >= num_experiments ||
        p.arm < 1 || p.arm >= data.manifest.arms_per_experiment[p.experiment]) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "T-learner pair does not fit the dataset");
    }
    auto& slot = index[p.metric][p.experiment];
    slot.resize(data.manifest.arms_per_experiment[p.experiment] - 1, nullptr);
    slot[p.arm - 1] = &p;
  }
  dataset::PotentialOutcomeTensor out;
  std::vector<double> arms;
  for (const auto& t : targets) {
    const auto x = data.units.features.row(t.unit_row);
    for (std::size_t j = 0; j < num_metrics; ++j) {
      const auto& slot = index[j][t.experiment];
      const std::size_t num_arms = data.manifest.arms_per_experiment[t.experiment];
      if (slot.size() + 1 != num_arms) {
        throw Error(ErrorCode::kMissingEntry,
                    "no T-learner for " + CellName(t.experiment, 1,
                                                   static_cast<int>(j)));
      }
      arms.assign(num_arms, 0.0);
      for (std::size_t a = 1; a < num_arms; ++a) {
        if (slot[a - 1] == nullptr) {
          throw Error(ErrorCode::kMissingEntry,
                      "no T-learner for " +
                          CellName(t.experiment, static_cast<int>(a),
                                   static_cast<int>(j)));
        }
        arms[0] = slot[a - 1]->control.Predict(x);
        arms[a] = slot[a - 1]->treated.Predict(x);
      }
      out.Add(t.unit_id, t.experiment, static_cast<int>(j), arms);
    }
  }
  return out;
}

}  // namespace lrhte::tlearner
