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

#include "qconformal/qsim.h"

namespace qconformal {
namespace {

void BM_RandomCircuit(benchmark::State& state) {
  const CircuitConfig config;
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(random_circuit(config, seed++));
}
BENCHMARK(BM_RandomCircuit);

void BM_Simulate(benchmark::State& state) {
  CircuitConfig config;
  config.min_depth = config.max_depth = static_cast<int>(state.range(0));
  const Circuit c = random_circuit(config, 1);
  for (auto _ : state) benchmark::DoNotOptimize(simulate(c));
}
BENCHMARK(BM_Simulate)->Arg(1)->Arg(8)->Arg(64);

void BM_Measure(benchmark::State& state) {
  const Circuit c = random_circuit(CircuitConfig{}, 3);
  const int shots = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(measure(c, MeasBasis::Y, shots, seed++));
  if (shots > 0) state.SetItemsProcessed(state.iterations() * shots);
}
BENCHMARK(BM_Measure)->Arg(0)->Arg(1024)->Arg(16384);

}  // namespace
}  // namespace qconformal

BENCHMARK_MAIN();
