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

#include "lrhte/lr/finetune.h"

#include <string>

#include <spdlog/spdlog.h>

#include "lrhte/error.h"
#include "lrhte/lr/model.h"
#include "lrhte/numerics/ridge.h"

namespace lrhte::lr {

FinetuneResult FinetuneNewExperiment(const LRParams& frozen,
                                     const numerics::Matrix& features,
                                     std::span<const int> arms,
                                     std::span<const double> y, int num_arms,
                                     double reg) {
  const std::size_t n = features.rows();
  if (arms.size() != n || y.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "features, arms and outcomes must have the same length");
  }
  if (num_arms < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "a new experiment needs a control and at least one treated arm");
  }
  const std::size_t d = frozen.dims.latent_dim;
  const numerics::Matrix v = EmbedRows(frozen, features, {});

  FinetuneResult result;
  result.embeddings = numerics::Matrix(static_cast<std::size_t>(num_arms), d);
  result.counts.assign(static_cast<std::size_t>(num_arms), 0);
  for (int a : arms) {
    if (a < 0 || a >= num_arms) {
      throw Error(ErrorCode::kOutOfRange, "arm " + std::to_string(a) +
                                              " outside [0, " +
                                              std::to_string(num_arms) + ")");
    }
    ++result.counts[static_cast<std::size_t>(a)];
  }
  double sse = 0.0;
  for (int t = 0; t < num_arms; ++t) {
    const std::size_t count = result.counts[static_cast<std::size_t>(t)];
    if (count == 0) {
      throw Error(ErrorCode::kEmptyCell,
                  "arm " + std::to_string(t) + " has no observations");
    }
    if (count < d) {
      spdlog::warn("arm {} has {} observations, fewer than d = {}", t, count,
                   d);
    }
    numerics::Matrix vt(count, d);
    std::vector<double> yt;
    yt.reserve(count);
    for (std::size_t i = 0; i < n; ++i) {
      if (arms[i] != t) continue;
      const auto src = v.row(i);
      std::copy(src.begin(), src.end(), vt.row(yt.size()).begin());
      yt.push_back(y[i]);
    }
    const auto fit = numerics::RidgeFit(vt, yt, reg, /*intercept=*/false);
    std::copy(fit.coef.begin(), fit.coef.end(),
              result.embeddings.row(static_cast<std::size_t>(t)).begin());
    for (std::size_t i = 0; i < count; ++i) {
      const double r = numerics::Dot(vt.row(i), fit.coef) - yt[i];
      sse += r * r;
    }
  }
  result.residual = sse / static_cast<double>(n);
  return result;
}

double FinetunedCate(const LRParams& frozen,
                     const numerics::Matrix& embeddings,
                     std::span<const double> x, int arm) {
  if (arm < 1 || static_cast<std::size_t>(arm) >= embeddings.rows()) {
    throw Error(ErrorCode::kOutOfRange,
                "treated arm " + std::to_string(arm) + " out of range");
  }
  if (embeddings.cols() != frozen.dims.latent_dim) {
    throw Error(ErrorCode::kDimensionMismatch,
                "embedding width does not match the latent dimension");
  }
  const auto v = EmbedUnit(frozen, x);
  double cate = 0.0;
  for (std::size_t c = 0; c < v.size(); ++c) {
    cate += v[c] * (embeddings(static_cast<std::size_t>(arm), c) -
                    embeddings(0, c));
  }
  return cate;
}

}  // namespace lrhte::lr
