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

#include "alip/sim.hpp"

namespace {

void BM_ClosedLoopFiveSteps(benchmark::State& state) {
  const alip::StairGeometry terrain{0.28, 0.17, 5};
  const alip::NominalOrbit o = alip::synthesize_orbit(terrain, alip::AlipParams{}, 0.4, 0.86, -0.2);
  alip::SimConfig cfg;
  cfg.initial_offset.L = -3.0;
  for (auto _ : state) benchmark::DoNotOptimize(alip::run_scenario(cfg, o, terrain));
}
BENCHMARK(BM_ClosedLoopFiveSteps)->Unit(benchmark::kMillisecond);

void BM_Rk4Step(benchmark::State& state) {
  const auto r = [](double) { return 0.86; };
  alip::AlipState x{-0.2, 10.0};
  for (auto _ : state) {
    x = alip::rk4_step({-0.2, 10.0}, r, 0.0, 1.0, 0.0, 1e-3, alip::AlipParams{});
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK(BM_Rk4Step);

}  // namespace

BENCHMARK_MAIN();
