// Copyright 2026 The Arena Audit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "arena/btrank.hpp"
#include "arena/prefdata.hpp"

namespace {

using namespace arena;

PreferenceDataset LadderDataset(int k, size_t battles) {
  GroundTruthModelSpec spec;
  for (int m = 0; m < k; ++m)
    spec.true_scores.emplace_back(ModelId("m" + std::to_string(m)),
                                  0.1 * (0.5 * (k - 1) - m));
  spec.tie_probability = 0.15;
  return GenerateSynthetic(spec, battles, 97);
}

void BM_FitBradleyTerry(benchmark::State& state) {
  const auto ds = LadderDataset(static_cast<int>(state.range(0)),
                                static_cast<size_t>(state.range(1)));
  for (auto _ : state) {
    auto fit = FitBradleyTerry(ds);
    benchmark::DoNotOptimize(fit.scores.score);
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_FitBradleyTerry)
    ->Args({8, 10000})
    ->Args({64, 55000})
    ->Unit(benchmark::kMillisecond);

void BM_WinMatrix(benchmark::State& state) {
  const auto ds = LadderDataset(64, 55000);
  for (auto _ : state) {
    auto wm = ComputeWinMatrix(ds);
    benchmark::DoNotOptimize(wm);
  }
}
BENCHMARK(BM_WinMatrix)->Unit(benchmark::kMillisecond);

void BM_BootstrapRanks(benchmark::State& state) {
  const auto ds = LadderDataset(8, 5000);
  for (auto _ : state) {
    auto result = BootstrapRanks(ds, static_cast<int>(state.range(0)), 7);
    benchmark::DoNotOptimize(result.board.rows);
  }
}
BENCHMARK(BM_BootstrapRanks)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace
