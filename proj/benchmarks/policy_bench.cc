// Copyright 2026 The olp Authors.
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

#include "olp/distributions.h"
#include "olp/policy.h"

namespace olp {
namespace {

void BM_CeEpisode(benchmark::State& state) {
  const RequestDistribution dist = RequestDistribution::MultisecretaryBeta(0.0);
  const long T = state.range(0);
  const RequestSample s = SampleRealization(dist, T, 3);
  const Vec b{0.5 * static_cast<double>(T)};
  const PolicySpec ce = PolicySpec::Parse("CE");
  for (auto _ : state) {
    benchmark::DoNotOptimize(RunPolicy(dist, b, s, ce, {}, 3, false).total_reward);
  }
  state.SetComplexityN(T);
}
BENCHMARK(BM_CeEpisode)->RangeMultiplier(4)->Range(250, 16000)->Complexity();

void BM_EpisodeRegret(benchmark::State& state) {
  const RequestDistribution dist = RequestDistribution::GapMultisecretary();
  const long T = state.range(0);
  const Vec b{0.5 * static_cast<double>(T)};
  const PolicySpec ce = PolicySpec::Parse("CE");
  uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(EpisodeRegret(dist, b, T, ce, ++seed, {}));
}
BENCHMARK(BM_EpisodeRegret)->Arg(1000)->Arg(4000);

}  // namespace
}  // namespace olp
