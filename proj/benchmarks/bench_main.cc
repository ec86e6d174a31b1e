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

#include <benchmark/benchmark.h>

#include "lrhte/lr/model.h"
#include "lrhte/lr/params.h"
#include "lrhte/numerics/completion.h"
#include "lrhte/numerics/matrix.h"
#include "lrhte/numerics/random.h"
#include "lrhte/numerics/svd.h"

namespace {

using lrhte::numerics::Matrix;
using lrhte::numerics::RngStream;

void BM_MatMul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  RngStream s(1);
  const Matrix a = lrhte::numerics::NormalMatrix(s, n, n);
  const Matrix b = lrhte::numerics::NormalMatrix(s, n, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lrhte::numerics::MatMul(a, b));
  }
  state.SetItemsProcessed(state.iterations() * n * n * n);
}
BENCHMARK(BM_MatMul)->Arg(32)->Arg(128)->Arg(256);

// One minibatch gradient at the synthetic benchmark's model shape.
void BM_LossAndGradients(benchmark::State& state) {
  const auto batch = static_cast<std::size_t>(state.range(0));
  lrhte::lr::ModelDims dims;
  dims.num_features = 128;
  dims.hidden_dim = 32;
  dims.latent_dim = 32;
  dims.num_metrics = 5;
  dims.arms_per_experiment.assign(50, 2);
  const auto params = lrhte::lr::InitParams(dims, 2);
  RngStream s(3);
  const std::size_t units = batch / 5;
  const Matrix x = lrhte::numerics::NormalMatrix(s, units, 128);
  std::vector<lrhte::lr::TrainingRow> rows;
  for (std::size_t u = 0; u < units; ++u) {
    const int k = static_cast<int>(s.UniformIndex(50));
    const int t = static_cast<int>(s.UniformIndex(2));
    for (int j = 0; j < 5; ++j) {
      rows.push_back({static_cast<std::uint32_t>(u), k, t, j, s.StdNormal()});
    }
  }
  lrhte::lr::GradientWorkspace ws;
  lrhte::lr::LRParams grads;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ws.Compute(params, x, rows, 1e-4, grads));
  }
  state.SetItemsProcessed(state.iterations() * rows.size());
}
BENCHMARK(BM_LossAndGradients)->Arg(256)->Arg(1024)->Arg(4096);

void BM_SingularValues(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  RngStream s(4);
  const Matrix m = lrhte::numerics::NormalMatrix(s, rows, 50);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lrhte::numerics::SingularValues(m, 50));
  }
}
BENCHMARK(BM_SingularValues)->Arg(50)->Arg(200)->Arg(1000);

void BM_AlsComplete(benchmark::State& state) {
  const auto rank = static_cast<std::size_t>(state.range(0));
  RngStream s(5);
  const Matrix m = lrhte::numerics::NormalMatrix(s, 200, 50);
  lrhte::numerics::Mask mask(200, 50);
  for (std::size_t r = 0; r < 200; ++r) {
    for (std::size_t c = 0; c < 50; ++c) mask.Set(r, c, s.Bernoulli(0.8));
  }
  lrhte::numerics::AlsOptions options;
  options.rank = rank;
  options.iters = 50;
  for (auto _ : state) {
    RngStream init(6);
    benchmark::DoNotOptimize(
        lrhte::numerics::AlsComplete(m, mask, options, init));
  }
}
BENCHMARK(BM_AlsComplete)->Arg(1)->Arg(5)->Arg(20);

}  // namespace

BENCHMARK_MAIN();
