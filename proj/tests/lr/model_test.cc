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
#include <cmath>

#include <gtest/gtest.h>

#include "lrhte/lr/params.h"
#include "test_util.h"

namespace lrhte::lr {
namespace {

using numerics::Matrix;
using numerics::RngStream;

ModelDims Dims(std::size_t m, std::size_t h, std::size_t d, std::size_t j,
               std::vector<int> arms, bool relu) {
  ModelDims dims;
  dims.num_features = m;
  dims.hidden_dim = h;
  dims.latent_dim = d;
  dims.num_metrics = j;
  dims.arms_per_experiment = std::move(arms);
  dims.relu = relu;
  return dims;
}

// Every parameter, biases included, drawn N(0, sd^2).
LRParams RandomParams(const ModelDims& dims, RngStream& s, double sd = 0.7) {
  LRParams p = LRParams::Zeros(dims);
  for (auto& b : Blocks(p)) {
    for (double& v : b.values) v = sd * s.StdNormal();
  }
  return p;
}

// Plain-loop forward pass, written independently of the library kernels.
std::vector<double> OracleEmbed(const LRParams& p, std::span<const double> x,
                                double* min_abs_pre = nullptr) {
  const auto& dims = p.dims;
  std::vector<double> a(dims.hidden_dim);
  for (std::size_t i = 0; i < dims.hidden_dim; ++i) {
    double z = p.b1[i];
    for (std::size_t c = 0; c < dims.num_features; ++c) z += p.w1(i, c) * x[c];
    if (min_abs_pre) *min_abs_pre = std::min(*min_abs_pre, std::abs(z));
    a[i] = dims.relu ? std::max(z, 0.0) : z;
  }
  std::vector<double> v(dims.latent_dim);
  for (std::size_t r = 0; r < dims.latent_dim; ++r) {
    double s = p.b2[r];
    for (std::size_t i = 0; i < dims.hidden_dim; ++i) s += p.w2(r, i) * a[i];
    v[r] = s;
  }
  return v;
}

double OracleOutcome(const LRParams& p, std::span<const double> x, int metric,
                     int experiment, int arm) {
  const auto v = OracleEmbed(p, x);
  const auto& a = p.operators[metric];
  const auto& e = p.arm_embeddings[experiment];
  double out = 0.0;
  for (std::size_t r = 0; r < v.size(); ++r) {
    for (std::size_t c = 0; c < v.size(); ++c) out += v[r] * a(r, c) * e(arm, c);
  }
  return out;
}

double OracleLoss(const LRParams& p, const Matrix& x,
                  std::span<const TrainingRow> rows, double wd) {
  double sse = 0.0;
  for (const auto& r : rows) {
    const double res =
        OracleOutcome(p, x.row(r.unit_row), r.metric, r.experiment, r.arm) -
        r.value;
    sse += res * res;
  }
  double pen = 0.0;
  LRParams copy = p;
  for (const auto& b : Blocks(copy)) {
    if (!b.decayed) continue;
    for (double v : b.values) pen += v * v;
  }
  return sse / rows.size() + 0.5 * wd * pen;
}

std::vector<TrainingRow> RandomRows(const ModelDims& dims, std::size_t units,
                                    std::size_t n, RngStream& s) {
  std::vector<TrainingRow> rows(n);
  for (auto& r : rows) {
    r.unit_row = static_cast<std::uint32_t>(s.UniformIndex(units));
    r.experiment = static_cast<int>(s.UniformIndex(dims.num_experiments()));
    r.arm = static_cast<int>(
        s.UniformIndex(dims.arms_per_experiment[r.experiment]));
    r.metric = static_cast<int>(s.UniformIndex(dims.num_metrics));
    r.value = s.StdNormal();
  }
  return rows;
}

TEST(ModelTest, ZeroParamsPredictZero) {
  const auto dims = Dims(3, 4, 2, 2, {2, 3}, true);
  const LRParams p = LRParams::Zeros(dims);
  const std::vector<double> x{1, -2, 3};
  EXPECT_EQ(EmbedUnit(p, x), std::vector<double>(2, 0.0));
  EXPECT_EQ(PredictOutcome(p, x, 1, 1, 2), 0.0);
  EXPECT_EQ(PredictCate(p, x, 0, 0, 1), 0.0);
}

TEST(ModelTest, IdentityLayersPassFeaturesThrough) {
  const auto dims = Dims(3, 3, 3, 1, {2}, false);
  LRParams p = LRParams::Zeros(dims);
  p.w1 = Matrix::Identity(3);
  p.w2 = Matrix::Identity(3);
  const std::vector<double> x{1.5, -2, 0.25};
  EXPECT_EQ(EmbedUnit(p, x), x);
  p.dims.relu = true;
  EXPECT_EQ(EmbedUnit(p, x), (std::vector<double>{1.5, 0, 0.25}));
}

TEST(ModelTest, HandComputedBilinearOutcome) {
  const auto dims = Dims(3, 3, 3, 1, {2}, false);
  LRParams p = LRParams::Zeros(dims);
  p.w1 = Matrix::Identity(3);
  p.w2 = Matrix::Identity(3);
  p.operators[0] = Matrix::FromRows({{1, 2, 0}, {0, 1, 0}, {3, 0, 1}});
  p.arm_embeddings[0] = Matrix::FromRows({{1, 0, 0}, {0, 1, 1}});
  const std::vector<double> x{1, 2, 3};
  // A e0 = (1, 0, 3), A e1 = (2, 1, 1).
  EXPECT_EQ(PredictOutcome(p, x, 0, 0, 0), 1 + 0 + 9);
  EXPECT_EQ(PredictOutcome(p, x, 0, 0, 1), 2 + 2 + 3);
  EXPECT_EQ(PredictCate(p, x, 0, 0, 1), 7.0 - 10.0);
  EXPECT_EQ(OutcomeDirection(p, 0, 0, 1), (std::vector<double>{2, 1, 1}));
}

TEST(ModelTest, ForwardMatchesLoopOracle) {
  RngStream s(3);
  for (int trial = 0; trial < 50; ++trial) {
    const bool relu = trial % 2 == 0;
    const auto dims = Dims(1 + s.UniformIndex(6), 1 + s.UniformIndex(6),
                           1 + s.UniformIndex(5), 1 + s.UniformIndex(3),
                           {2, 3}, relu);
    const LRParams p = RandomParams(dims, s);
    const Matrix x = numerics::NormalMatrix(s, 7, dims.num_features);
    const Matrix v = EmbedRows(p, x, {});
    for (std::size_t r = 0; r < x.rows(); ++r) {
      const auto want = OracleEmbed(p, x.row(r));
      for (std::size_t c = 0; c < want.size(); ++c) {
        EXPECT_NEAR(v(r, c), want[c], 1e-12);
      }
      for (int j = 0; j < static_cast<int>(dims.num_metrics); ++j) {
        EXPECT_NEAR(PredictOutcome(p, x.row(r), j, 1, 2),
                    OracleOutcome(p, x.row(r), j, 1, 2), 1e-12);
      }
    }
  }
}

TEST(ModelTest, CateIsOutcomeDifference) {
  RngStream s(4);
  const auto dims = Dims(4, 5, 3, 2, {2, 4}, true);
  for (int i = 0; i < 1000; ++i) {
    const LRParams p = RandomParams(dims, s);
    std::vector<double> x(4);
    for (double& v : x) v = s.StdNormal();
    const int j = static_cast<int>(s.UniformIndex(2));
    const int t = 1 + static_cast<int>(s.UniformIndex(3));
    EXPECT_NEAR(PredictCate(p, x, j, 1, t),
                PredictOutcome(p, x, j, 1, t) - PredictOutcome(p, x, j, 1, 0),
                1e-12);
  }
}

TEST(ModelTest, OutcomesInvariantUnderOperatorGauge) {
  // Replacing A_j by A_j G and every e by G^-1 e leaves v A e unchanged.
  const auto dims = Dims(3, 4, 2, 2, {2, 2}, true);
  RngStream s(5);
  const LRParams p = RandomParams(dims, s);
  LRParams q = p;
  const Matrix g = Matrix::FromRows({{2, 1}, {0, 0.5}});
  const Matrix g_inv = Matrix::FromRows({{0.5, -1}, {0, 2}});
  for (auto& a : q.operators) a = numerics::MatMul(a, g);
  for (auto& e : q.arm_embeddings) e = numerics::MatMulTransB(e, g_inv);
  const std::vector<double> x{0.3, -1, 2};
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      for (int t = 0; t < 2; ++t) {
        EXPECT_NEAR(PredictOutcome(p, x, j, k, t),
                    PredictOutcome(q, x, j, k, t), 1e-12);
      }
    }
  }
}

TEST(ModelTest, LossMatchesOracle) {
  RngStream s(6);
  const auto dims = Dims(4, 3, 3, 2, {2, 3}, true);
  const LRParams p = RandomParams(dims, s);
  const Matrix x = numerics::NormalMatrix(s, 5, 4);
  const auto rows = RandomRows(dims, 5, 40, s);
  const auto lg = LossAndGradients(p, x, rows, 0.3);
  EXPECT_NEAR(lg.loss, OracleLoss(p, x, rows, 0.3), 1e-12);
  EXPECT_NEAR(lg.data_loss, OracleLoss(p, x, rows, 0.0), 1e-12);
}

TEST(ModelTest, GradientsMatchFiniteDifferences) {
  RngStream s(7);
  int checked = 0;
  while (checked < 100) {
    const bool relu = checked % 3 != 0;
    const std::size_t k = 1 + s.UniformIndex(3);
    std::vector<int> arms(k);
    for (auto& a : arms) a = 2 + static_cast<int>(s.UniformIndex(2));
    const auto dims = Dims(1 + s.UniformIndex(5), 1 + s.UniformIndex(6),
                           1 + s.UniformIndex(8), 1 + s.UniformIndex(2),
                           arms, relu);
    const LRParams p = RandomParams(dims, s);
    const std::size_t units = 1 + s.UniformIndex(6);
    const Matrix x = numerics::NormalMatrix(s, units, dims.num_features);
    // ReLU kinks within the step make central differences meaningless.
    double min_pre = 1e300;
    for (std::size_t r = 0; r < units; ++r) OracleEmbed(p, x.row(r), &min_pre);
    if (relu && min_pre < 1e-3) continue;
    const auto rows = RandomRows(dims, units, 1 + s.UniformIndex(30), s);
    const double wd = checked % 2 == 0 ? 0.0 : 0.1;
    auto lg = LossAndGradients(p, x, rows, wd);

    LRParams probe = p;
    auto probe_blocks = Blocks(probe);
    auto grad_blocks = Blocks(lg.grads);
    const double h = 1e-5;
    for (std::size_t b = 0; b < probe_blocks.size(); ++b) {
      for (std::size_t i = 0; i < probe_blocks[b].values.size(); ++i) {
        double& theta = probe_blocks[b].values[i];
        const double saved = theta;
        theta = saved + h;
        const double up = OracleLoss(probe, x, rows, wd);
        theta = saved - h;
        const double down = OracleLoss(probe, x, rows, wd);
        theta = saved;
        const double fd = (up - down) / (2 * h);
        const double an = grad_blocks[b].values[i];
        EXPECT_LE(std::abs(fd - an),
                  1e-4 * std::max(std::abs(fd), std::abs(an)) + 1e-8)
            << probe_blocks[b].name << "[" << i << "] trial " << checked;
      }
    }
    ++checked;
  }
}

TEST(ModelTest, ZeroResidualGivesPenaltyOnlyGradient) {
  RngStream s(8);
  const auto dims = Dims(3, 3, 2, 1, {2}, true);
  const LRParams p = RandomParams(dims, s);
  const Matrix x = numerics::NormalMatrix(s, 2, 3);
  std::vector<TrainingRow> rows{{0, 0, 1, 0, 0.0}, {1, 0, 0, 0, 0.0}};
  for (auto& r : rows) r.value = PredictOutcome(p, x.row(r.unit_row), 0, 0, r.arm);
  const auto lg = LossAndGradients(p, x, rows, 0.0);
  EXPECT_NEAR(lg.loss, 0.0, 1e-24);
  LRParams g = lg.grads;
  for (const auto& b : Blocks(g)) {
    for (double v : b.values) EXPECT_NEAR(v, 0.0, 1e-12);
  }
  const auto decayed = LossAndGradients(p, x, rows, 0.5);
  EXPECT_NEAR(decayed.grads.w1(1, 2), 0.5 * p.w1(1, 2), 1e-12);
  EXPECT_NEAR(decayed.grads.b1[0], 0.0, 1e-12);
}

TEST(ModelTest, LinearHandGradient) {
  // d = 1, identity network, A = [a], e = [e0; e1]; one row on arm 1:
  // loss = (x a e1 - y)^2, d/da = 2 r x e1, d/de1 = 2 r x a.
  const auto dims = Dims(1, 1, 1, 1, {2}, false);
  LRParams p = LRParams::Zeros(dims);
  p.w1(0, 0) = 1;
  p.w2(0, 0) = 1;
  p.operators[0](0, 0) = 2;
  p.arm_embeddings[0] = Matrix::FromRows({{0.5}, {3}});
  const Matrix x = Matrix::FromRows({{1.5}});
  const std::vector<TrainingRow> rows{{0, 0, 1, 0, 4.0}};
  const auto lg = LossAndGradients(p, x, rows, 0.0);
  const double r = 1.5 * 2 * 3 - 4.0;  // 5
  EXPECT_DOUBLE_EQ(lg.loss, r * r);
  EXPECT_DOUBLE_EQ(lg.grads.operators[0](0, 0), 2 * r * 1.5 * 3);
  EXPECT_DOUBLE_EQ(lg.grads.arm_embeddings[0](1, 0), 2 * r * 1.5 * 2);
  EXPECT_EQ(lg.grads.arm_embeddings[0](0, 0), 0.0);
  EXPECT_DOUBLE_EQ(lg.grads.b2[0], 2 * r * 2 * 3);
}

TEST(ModelTest, WorkspaceMatchesOneShotAndIsReusable) {
  RngStream s(9);
  const auto dims = Dims(4, 5, 3, 2, {2, 3}, true);
  const LRParams p = RandomParams(dims, s);
  const Matrix x = numerics::NormalMatrix(s, 6, 4);
  GradientWorkspace ws;
  LRParams g;
  for (int i = 0; i < 3; ++i) {
    const auto rows = RandomRows(dims, 6, 10 + 7 * i, s);
    const auto [loss, data_loss] = ws.Compute(p, x, rows, 0.01, g);
    const auto one = LossAndGradients(p, x, rows, 0.01);
    EXPECT_EQ(loss, one.loss);
    EXPECT_EQ(data_loss, one.data_loss);
    EXPECT_EQ(g, one.grads);
  }
}

TEST(ModelTest, IndexErrors) {
  const auto dims = Dims(2, 2, 2, 1, {2}, true);
  const LRParams p = LRParams::Zeros(dims);
  const std::vector<double> x{1, 2};
  EXPECT_LRHTE_ERROR(PredictOutcome(p, x, 1, 0, 0), ErrorCode::kOutOfRange);
  EXPECT_LRHTE_ERROR(PredictOutcome(p, x, 0, 1, 0), ErrorCode::kOutOfRange);
  EXPECT_LRHTE_ERROR(PredictOutcome(p, x, 0, 0, 2), ErrorCode::kOutOfRange);
  EXPECT_LRHTE_ERROR(PredictCate(p, x, 0, 0, 0), ErrorCode::kInvalidArgument);
  const std::vector<double> short_x{1};
  EXPECT_LRHTE_ERROR(EmbedUnit(p, short_x), ErrorCode::kDimensionMismatch);
  const Matrix feats(2, 2);
  const std::vector<std::size_t> bad_rows{5};
  EXPECT_LRHTE_ERROR(EmbedRows(p, feats, bad_rows), ErrorCode::kOutOfRange);
}

}  // namespace
}  // namespace lrhte::lr
