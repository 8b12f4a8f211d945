/*
 Copyright 2026 The alip-stairs Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include <benchmark/benchmark.h>

#include "alip/prediction.hpp"

namespace {

const alip::NominalOrbit& orbit() {
  static const alip::NominalOrbit o =
      alip::synthesize_orbit({0.28, 0.17, 5}, alip::AlipParams{}, 0.4, 0.86, -0.2);
  return o;
}

void BM_BuildPrediction(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  alip::PredictionOptions opt;
  opt.compensate_orbit_defects = true;
  for (auto _ : state) {
    benchmark::DoNotOptimize(alip::build_prediction(orbit(), 0.13, N, 0.01, orbit().params, opt));
  }
}
BENCHMARK(BM_BuildPrediction)->Arg(10)->Arg(40)->Arg(80);

void BM_SynthesizeOrbit(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(alip::synthesize_orbit({0.28, 0.17, 5}, alip::AlipParams{}, 0.4, 0.86, -0.2));
  }
}
BENCHMARK(BM_SynthesizeOrbit)->Unit(benchmark::kMillisecond);

}  // namespace
