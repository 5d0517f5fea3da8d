// Copyright 2026 The qconformal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <vector>

#include "qconformal/conformal.h"
#include "qconformal/dataset.h"
#include "qconformal/forest.h"

namespace qconformal {
namespace {

GenerationConfig config_for(std::int64_t n, bool multi) {
  GenerationConfig g;
  g.num_samples = n;
  if (multi) g.bases = {MeasBasis::Z, MeasBasis::X, MeasBasis::Y};
  return g;
}

void BM_Generate(benchmark::State& state) {
  const auto config = config_for(state.range(0), state.range(1) != 0);
  for (auto _ : state) benchmark::DoNotOptimize(generate(config, 7));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Generate)->Args({1000, 0})->Args({1000, 1})->Unit(benchmark::kMillisecond);

void BM_ForestFit(benchmark::State& state) {
  const Dataset d = generate(config_for(5000, true), 7);
  const auto splits = split(d, {}, 1);
  const auto train = gather(d, splits.train);
  ForestParams params;
  params.num_trees = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Forest::fit(train.X, train.Y, params, 42));
}
BENCHMARK(BM_ForestFit)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_Evaluate(benchmark::State& state) {
  const Dataset d = generate(config_for(5000, true), 7);
  const auto splits = split(d, {}, 1);
  const auto train = gather(d, splits.train);
  ForestParams params;
  params.num_trees = 100;
  const Forest model = Forest::fit(train.X, train.Y, params, 42);
  const std::vector<double> alphas{0.05, 0.1, 0.2, 0.3, 0.5};
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate(model, splits, d, alphas, NormKind::L2));
  }
}
BENCHMARK(BM_Evaluate)->Unit(benchmark::kMillisecond);

void BM_Threshold(benchmark::State& state) {
  std::vector<double> scores(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < scores.size(); ++i) scores[i] = static_cast<double>((i * 7919) % 1000);
  for (auto _ : state) {
    const ConformalCalibration cal(scores, NormKind::L2, 12);
    benchmark::DoNotOptimize(cal.threshold(0.1));
  }
}
BENCHMARK(BM_Threshold)->Arg(500)->Arg(50000);

}  // namespace
}  // namespace qconformal

BENCHMARK_MAIN();
