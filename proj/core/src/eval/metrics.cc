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

#include "lrhte/eval/metrics.h"

#include <cmath>
#include <string>

#include "lrhte/error.h"
#include "lrhte/numerics/ridge.h"

namespace lrhte::eval {
namespace {

void CheckSameLength(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(what) + ": " + std::to_string(a) +
                    " predictions for " + std::to_string(b) + " targets");
  }
  if (a == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + ": nothing to evaluate");
  }
}

double MeanSquaredDifference(std::span<const double> a,
                             std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum / static_cast<double>(a.size());
}

}  // namespace

double Pehe(std::span<const double> predicted, std::span<const double> truth) {
  CheckSameLength(predicted.size(), truth.size(), "PEHE");
  return MeanSquaredDifference(predicted, truth);
}

double Pehe(const dataset::PotentialOutcomeTensor& predicted,
            const dataset::PotentialOutcomeTensor& truth) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < truth.num_cells(); ++i) {
    const auto t = truth.cell(i);
    const auto found = predicted.Find(t.unit_id, t.experiment, t.metric);
    if (!found) {
      throw Error(ErrorCode::kMissingEntry,
                  "no prediction for unit " + std::to_string(t.unit_id) +
                      " experiment " + std::to_string(t.experiment) +
                      " metric " + std::to_string(t.metric));
    }
    const auto p = predicted.cell(*found);
    if (p.ite.size() != t.ite.size()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "arm count differs for unit " + std::to_string(t.unit_id) +
                      " experiment " + std::to_string(t.experiment));
    }
    for (std::size_t a = 1; a < t.ite.size(); ++a) {
      const double d = p.ite[a] - t.ite[a];
      sum += d * d;
      ++count;
    }
  }
  if (count == 0) {
    throw Error(ErrorCode::kInvalidArgument, "PEHE: nothing to evaluate");
  }
  return sum / static_cast<double>(count);
}

double MuRisk(std::span<const double> predicted,
              std::span<const double> observed) {
  CheckSameLength(predicted.size(), observed.size(), "mu-risk");
  return MeanSquaredDifference(predicted, observed);
}

double TauRisk(const numerics::Matrix& x, std::span<const double> y,
               std::span<const int> treated, std::span<const double> tau_hat,
               double nuisance_reg) {
  const std::size_t n = x.rows();
  CheckSameLength(y.size(), n, "tau-risk outcomes");
  CheckSameLength(treated.size(), n, "tau-risk treatment");
  CheckSameLength(tau_hat.size(), n, "tau-risk");
  std::vector<double> t(n);
  bool any_treated = false;
  bool any_control = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (treated[i] != 0 && treated[i] != 1) {
      throw Error(ErrorCode::kInvalidArgument,
                  "tau-risk treatment indicators must be 0 or 1");
    }
    t[i] = treated[i];
    any_treated = any_treated || treated[i] == 1;
    any_control = any_control || treated[i] == 0;
  }
  if (!any_treated || !any_control) {
    throw Error(ErrorCode::kInvalidArgument,
                "tau-risk needs both treated and control units");
  }
  numerics::Matrix targets(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    targets(i, 0) = y[i];
    targets(i, 1) = t[i];
  }
  const auto fits = numerics::RidgeFitMulti(x, targets, nuisance_reg, true);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto xi = x.row(i);
    const double r = (y[i] - fits[0].Predict(xi)) -
                     (t[i] - fits[1].Predict(xi)) * tau_hat[i];
    sum += r * r;
  }
  return sum / static_cast<double>(n);
}

Correlation IteCorrelation(const numerics::Matrix& slice) {
  const std::size_t n = slice.rows();
  const std::size_t k = slice.cols();
  if (n < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "correlation needs at least two units");
  }
  numerics::Matrix centered(k, n);
  std::vector<double> norm(k);
  Correlation out;
  for (std::size_t c = 0; c < k; ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < n; ++r) mean += slice(r, c);
    mean /= static_cast<double>(n);
    auto col = centered.row(c);
    for (std::size_t r = 0; r < n; ++r) col[r] = slice(r, c) - mean;
    norm[c] = std::sqrt(numerics::SquaredNorm(col));
    if (!(norm[c] > 0.0)) out.zero_variance.push_back(c);
  }
  out.matrix = numerics::Matrix(k, k);
  for (std::size_t a = 0; a < k; ++a) {
    out.matrix(a, a) = 1.0;
    if (!(norm[a] > 0.0)) continue;
    for (std::size_t b = a + 1; b < k; ++b) {
      if (!(norm[b] > 0.0)) continue;
      const double r = numerics::Dot(centered.row(a), centered.row(b)) /
                       (norm[a] * norm[b]);
      out.matrix(a, b) = r;
      out.matrix(b, a) = r;
    }
  }
  return out;
}

}  // namespace lrhte::eval
