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

#include "lrhte/lr/model.h"

#include <algorithm>
#include <string>

#include "lrhte/error.h"

namespace lrhte::lr {
namespace {

using numerics::Matrix;

void CheckIndices(const LRParams& p, int metric, int experiment, int arm) {
  if (metric < 0 || static_cast<std::size_t>(metric) >= p.dims.num_metrics) {
    throw Error(ErrorCode::kOutOfRange,
                "unknown metric " + std::to_string(metric));
  }
  if (experiment < 0 ||
      static_cast<std::size_t>(experiment) >= p.dims.num_experiments()) {
    throw Error(ErrorCode::kOutOfRange,
                "unknown experiment " + std::to_string(experiment));
  }
  if (arm < 0 || arm >= p.dims.arms_per_experiment[experiment]) {
    throw Error(ErrorCode::kOutOfRange,
                "unknown arm " + std::to_string(arm) + " of experiment " +
                    std::to_string(experiment));
  }
}

void Resize(Matrix& m, std::size_t rows, std::size_t cols) {
  if (m.rows() != rows || m.cols() != cols) {
    m = Matrix(rows, cols);
  } else {
    m.Fill(0.0);
  }
}

void ZeroLike(const LRParams& params, LRParams& grads) {
  if (grads.dims == params.dims) {
    for (auto& block : Blocks(grads)) {
      std::fill(block.values.begin(), block.values.end(), 0.0);
    }
  } else {
    grads = LRParams::Zeros(params.dims);
  }
}

std::uint64_t ComboKey(int metric, int experiment, int arm) {
  return (static_cast<std::uint64_t>(experiment) << 32) |
         (static_cast<std::uint64_t>(arm) << 16) |
         static_cast<std::uint64_t>(metric);
}

// Forward pass for a block of feature rows: z = x w1ᵀ + b1, act = f(z),
// v = act w2ᵀ + b2.
void Forward(const LRParams& p, const Matrix& x, Matrix& w1t, Matrix& w2t,
             Matrix& z, Matrix& act, Matrix& v) {
  w1t = p.w1.Transposed();
  w2t = p.w2.Transposed();
  Resize(z, x.rows(), p.dims.hidden_dim);
  numerics::MatMulAdd(x, w1t, z);
  act = z;
  for (std::size_t r = 0; r < z.rows(); ++r) {
    auto zr = z.row(r);
    auto ar = act.row(r);
    for (std::size_t c = 0; c < zr.size(); ++c) {
      zr[c] += p.b1[c];
      ar[c] = p.dims.relu ? std::max(zr[c], 0.0) : zr[c];
    }
  }
  Resize(v, x.rows(), p.dims.latent_dim);
  numerics::MatMulAdd(act, w2t, v);
  for (std::size_t r = 0; r < v.rows(); ++r) {
    auto vr = v.row(r);
    for (std::size_t c = 0; c < vr.size(); ++c) vr[c] += p.b2[c];
  }
}

}  // namespace

std::vector<double> EmbedUnit(const LRParams& params,
                              std::span<const double> x) {
  if (x.size() != params.dims.num_features) {
    throw Error(ErrorCode::kDimensionMismatch,
                "feature vector has " + std::to_string(x.size()) +
                    " entries, model expects " +
                    std::to_string(params.dims.num_features));
  }
  Matrix xm(1, x.size(), std::vector<double>(x.begin(), x.end()));
  Matrix w1t, w2t, z, act, v;
  Forward(params, xm, w1t, w2t, z, act, v);
  return {v.values().begin(), v.values().end()};
}

Matrix EmbedRows(const LRParams& params, const Matrix& features,
                 std::span<const std::size_t> rows) {
  if (features.cols() != params.dims.num_features) {
    throw Error(ErrorCode::kDimensionMismatch,
                "features have " + std::to_string(features.cols()) +
                    " columns, model expects " +
                    std::to_string(params.dims.num_features));
  }
  Matrix w1t, w2t, z, act, v;
  if (rows.empty()) {
    Forward(params, features, w1t, w2t, z, act, v);
    return v;
  }
  Matrix x(rows.size(), features.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= features.rows()) {
      throw Error(ErrorCode::kOutOfRange,
                  "feature row " + std::to_string(rows[i]) + " out of range");
    }
    const auto src = features.row(rows[i]);
    std::copy(src.begin(), src.end(), x.row(i).begin());
  }
  Forward(params, x, w1t, w2t, z, act, v);
  return v;
}

std::vector<double> OutcomeDirection(const LRParams& params, int metric,
                                     int experiment, int arm) {
  CheckIndices(params, metric, experiment, arm);
  return numerics::MatVec(params.operators[metric],
                          params.arm_embeddings[experiment].row(arm));
}

double PredictOutcome(const LRParams& params, std::span<const double> x,
                      int metric, int experiment, int arm) {
  CheckIndices(params, metric, experiment, arm);
  const auto v = EmbedUnit(params, x);
  return numerics::Dot(v, OutcomeDirection(params, metric, experiment, arm));
}

double PredictCate(const LRParams& params, std::span<const double> x,
                   int metric, int experiment, int arm) {
  CheckIndices(params, metric, experiment, arm);
  if (arm == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "CATE is defined for treated arms only (arm >= 1)");
  }
  const auto& e = params.arm_embeddings[experiment];
  std::vector<double> diff(params.dims.latent_dim);
  for (std::size_t c = 0; c < diff.size(); ++c) {
    diff[c] = e(static_cast<std::size_t>(arm), c) - e(0, c);
  }
  const auto v = EmbedUnit(params, x);
  return numerics::Dot(v, numerics::MatVec(params.operators[metric], diff));
}

std::pair<double, double> GradientWorkspace::Compute(
    const LRParams& params, const Matrix& features,
    std::span<const TrainingRow> rows, double weight_decay, LRParams& grads) {
  if (rows.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty batch");
  }
  if (features.cols() != params.dims.num_features) {
    throw Error(ErrorCode::kDimensionMismatch,
                "features have " + std::to_string(features.cols()) +
                    " columns, model expects " +
                    std::to_string(params.dims.num_features));
  }
  const std::size_t d = params.dims.latent_dim;

  local_unit_.clear();
  local_combo_.clear();
  unit_rows_.clear();
  combos_.clear();
  row_unit_.resize(rows.size());
  row_combo_.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    CheckIndices(params, r.metric, r.experiment, r.arm);
    if (r.unit_row >= features.rows()) {
      throw Error(ErrorCode::kOutOfRange,
                  "unit row " + std::to_string(r.unit_row) + " out of range");
    }
    auto [u, new_unit] = local_unit_.emplace(
        r.unit_row, static_cast<std::uint32_t>(unit_rows_.size()));
    if (new_unit) unit_rows_.push_back(r.unit_row);
    row_unit_[i] = u->second;
    const auto key = ComboKey(r.metric, r.experiment, r.arm);
    auto [c, new_combo] = local_combo_.emplace(
        key, static_cast<std::uint32_t>(combos_.size()));
    if (new_combo) combos_.push_back(key);
    row_combo_[i] = c->second;
  }

  const std::size_t num_units = unit_rows_.size();
  Resize(x_, num_units, features.cols());
  for (std::size_t u = 0; u < num_units; ++u) {
    const auto src = features.row(unit_rows_[u]);
    std::copy(src.begin(), src.end(), x_.row(u).begin());
  }
  Forward(params, x_, w1t_, w2t_, z_, act_, v_);

  // Outcome directions A_j e^t_k for each combo in the batch.
  Resize(dirs_, combos_.size(), d);
  for (std::size_t c = 0; c < combos_.size(); ++c) {
    const int metric = static_cast<int>(combos_[c] & 0xFFFF);
    const int arm = static_cast<int>((combos_[c] >> 16) & 0xFFFF);
    const int experiment = static_cast<int>(combos_[c] >> 32);
    const auto dir = numerics::MatVec(params.operators[metric],
                                      params.arm_embeddings[experiment].row(arm));
    std::copy(dir.begin(), dir.end(), dirs_.row(c).begin());
  }

  ZeroLike(params, grads);
  Resize(grad_v_, num_units, d);
  Resize(grad_dirs_, combos_.size(), d);
  const double scale = 2.0 / static_cast<double>(rows.size());
  double sse = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto v = v_.row(row_unit_[i]);
    const auto w = dirs_.row(row_combo_[i]);
    const double resid = numerics::Dot(v, w) - rows[i].value;
    sse += resid * resid;
    const double g = scale * resid;
    auto gv = grad_v_.row(row_unit_[i]);
    auto gw = grad_dirs_.row(row_combo_[i]);
    for (std::size_t a = 0; a < d; ++a) {
      gv[a] += g * w[a];
      gw[a] += g * v[a];
    }
  }

  // Chain each direction gradient into its operator and arm embedding.
  for (std::size_t c = 0; c < combos_.size(); ++c) {
    const int metric = static_cast<int>(combos_[c] & 0xFFFF);
    const int arm = static_cast<int>((combos_[c] >> 16) & 0xFFFF);
    const int experiment = static_cast<int>(combos_[c] >> 32);
    const auto gw = grad_dirs_.row(c);
    const auto e = params.arm_embeddings[experiment].row(arm);
    Matrix& ga = grads.operators[metric];
    for (std::size_t a = 0; a < d; ++a) {
      auto row = ga.row(a);
      for (std::size_t b = 0; b < d; ++b) row[b] += gw[a] * e[b];
    }
    const auto ge = numerics::MatTransVec(params.operators[metric], gw);
    auto dst = grads.arm_embeddings[experiment].row(arm);
    for (std::size_t b = 0; b < d; ++b) dst[b] += ge[b];
  }

  // Feature network.
  numerics::MatMulTransAAdd(grad_v_, act_, grads.w2);
  for (std::size_t u = 0; u < num_units; ++u) {
    const auto gv = grad_v_.row(u);
    for (std::size_t a = 0; a < d; ++a) grads.b2[a] += gv[a];
  }
  Resize(grad_act_, num_units, params.dims.hidden_dim);
  numerics::MatMulAdd(grad_v_, params.w2, grad_act_);
  if (params.dims.relu) {
    for (std::size_t i = 0; i < grad_act_.size(); ++i) {
      if (!(z_.values()[i] > 0.0)) grad_act_.values()[i] = 0.0;
    }
  }
  numerics::MatMulTransAAdd(grad_act_, x_, grads.w1);
  for (std::size_t u = 0; u < num_units; ++u) {
    const auto gz = grad_act_.row(u);
    for (std::size_t a = 0; a < gz.size(); ++a) grads.b1[a] += gz[a];
  }

  const double data_loss = sse / static_cast<double>(rows.size());
  double penalty = 0.0;
  if (weight_decay > 0.0) {
    // Blocks() needs a mutable object; the values are only read here.
    auto& mutable_params = const_cast<LRParams&>(params);
    auto pb = Blocks(mutable_params);
    auto gb = Blocks(grads);
    for (std::size_t b = 0; b < pb.size(); ++b) {
      if (!pb[b].decayed) continue;
      penalty += numerics::SquaredNorm(pb[b].values);
      auto g = gb[b].values;
      const auto theta = pb[b].values;
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += weight_decay * theta[i];
    }
    penalty *= 0.5 * weight_decay;
  }
  return {data_loss + penalty, data_loss};
}

LossAndGrads LossAndGradients(const LRParams& params, const Matrix& features,
                              std::span<const TrainingRow> rows,
                              double weight_decay) {
  GradientWorkspace ws;
  LossAndGrads out;
  const auto [loss, data_loss] =
      ws.Compute(params, features, rows, weight_decay, out.grads);
  out.loss = loss;
  out.data_loss = data_loss;
  return out;
}

std::vector<double> PredictObservations(const LRParams& params,
                                        const dataset::Dataset& data,
                                        std::span<const std::size_t> indices) {
  if (indices.empty()) return {};
  std::unordered_map<std::size_t, std::size_t> local;
  std::vector<std::size_t> rows;
  std::vector<std::size_t> obs_local(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto& o = data.observations.at(indices[i]);
    CheckIndices(params, o.metric, o.experiment, o.arm);
    const auto row = data.units.RowOf(o.unit_id);
    if (!row) {
      throw Error(ErrorCode::kDanglingReference,
                  "observation references unknown unit " +
                      std::to_string(o.unit_id));
    }
    auto [it, inserted] = local.emplace(*row, rows.size());
    if (inserted) rows.push_back(*row);
    obs_local[i] = it->second;
  }
  const Matrix v = EmbedRows(params, data.units.features, rows);
  std::vector<double> out(indices.size());
  std::unordered_map<std::uint64_t, std::vector<double>> dirs;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto& o = data.observations[indices[i]];
    const auto key = ComboKey(o.metric, o.experiment, o.arm);
    auto it = dirs.find(key);
    if (it == dirs.end()) {
      it = dirs.emplace(key, OutcomeDirection(params, o.metric, o.experiment,
                                              o.arm))
               .first;
    }
    out[i] = numerics::Dot(v.row(obs_local[i]), it->second);
  }
  return out;
}

dataset::PotentialOutcomeTensor PredictTensor(
    const LRParams& params, const dataset::Dataset& data,
    std::span<const dataset::PredictionTarget> targets) {
  if (data.manifest.num_experiments != params.dims.num_experiments() ||
      data.manifest.num_metrics != params.dims.num_metrics ||
      data.manifest.num_features != params.dims.num_features) {
    throw Error(ErrorCode::kDimensionMismatch,
                "model dimensions do not match the dataset");
  }
  // Outcome directions for every (metric, experiment, arm).
  std::vector<std::vector<Matrix>> dirs(params.dims.num_metrics);
  for (std::size_t j = 0; j < params.dims.num_metrics; ++j) {
    for (std::size_t k = 0; k < params.dims.num_experiments(); ++k) {
      dirs[j].push_back(numerics::MatMulTransB(params.arm_embeddings[k],
                                               params.operators[j]));
    }
  }
  dataset::PotentialOutcomeTensor out;
  std::vector<double> arms;
  constexpr std::size_t kChunk = 4096;
  std::vector<std::size_t> rows;
  for (std::size_t begin = 0; begin < targets.size(); begin += kChunk) {
    const std::size_t end = std::min(targets.size(), begin + kChunk);
    rows.clear();
    for (std::size_t i = begin; i < end; ++i) rows.push_back(targets[i].unit_row);
    const Matrix v = EmbedRows(params, data.units.features, rows);
    for (std::size_t i = begin; i < end; ++i) {
      const auto& t = targets[i];
      for (std::size_t j = 0; j < params.dims.num_metrics; ++j) {
        const Matrix& dir = dirs[j][t.experiment];
        arms.resize(dir.rows());
        for (std::size_t a = 0; a < dir.rows(); ++a) {
          arms[a] = numerics::Dot(v.row(i - begin), dir.row(a));
        }
        out.Add(t.unit_id, t.experiment, static_cast<int>(j), arms);
      }
    }
  }
  return out;
}

}  // namespace lrhte::lr
