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

#include "arena/corruption.hpp"
#include "arena/prefdata.hpp"

namespace {

using namespace arena;

PreferenceDataset ArenaScaleDataset() {
  GroundTruthModelSpec spec;
  for (int m = 0; m < 64; ++m)
    spec.true_scores.emplace_back(ModelId("m" + std::to_string(m)),
                                  0.05 * (31.5 - m));
  spec.tie_probability = 0.2;
  return GenerateSynthetic(spec, 55000, 11);
}

void BM_CorruptApathetic(benchmark::State& state) {
  const auto ds = ArenaScaleDataset();
  uint64_t seed = 0;
  for (auto _ : state) {
    auto corrupted = CorruptApathetic(ds, 10.0, ++seed);
    benchmark::DoNotOptimize(corrupted.records().data());
  }
  state.SetItemsProcessed(state.iterations() * ds.size());
}
BENCHMARK(BM_CorruptApathetic)->Unit(benchmark::kMillisecond);

void BM_DisplacementTrial(benchmark::State& state) {
  // One corrupt-and-refit trial at arena scale.
  const auto ds = ArenaScaleDataset();
  CorruptionSpec spec;
  spec.mode = CorruptionMode::kAdversarialFlip;
  spec.rate_percent = 10.0;
  spec.target = ModelId("m40");
  for (auto _ : state) {
    spec.seed += 1;
    auto corrupted = CorruptAdversarial(ds, spec);
    auto fit = FitBradleyTerry(corrupted);
    benchmark::DoNotOptimize(fit.scores.score);
  }
}
BENCHMARK(BM_DisplacementTrial)->Unit(benchmark::kMillisecond);

}  // namespace
