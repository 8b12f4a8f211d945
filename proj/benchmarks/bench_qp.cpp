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

#include <random>

#include "alip/qp.hpp"

namespace {

alip::QpProblem box_qp(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::MatrixXd M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = nd(rng);
  alip::QpProblem p;
  p.P = M * M.transpose() + Eigen::MatrixXd::Identity(n, n);
  p.q = 30.0 * Eigen::VectorXd::NullaryExpr(n, [&] { return nd(rng); });
  p.Aeq.resize(0, n);
  p.beq.resize(0);
  p.lb = Eigen::VectorXd::Constant(n, -23.0);
  p.ub = Eigen::VectorXd::Constant(n, 23.0);
  return p;
}

void BM_SolveBoxQp(benchmark::State& state) {
  const alip::QpProblem p = box_qp(static_cast<int>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(alip::solve_qp(p));
}
BENCHMARK(BM_SolveBoxQp)->Arg(10)->Arg(40)->Arg(80);

void BM_SolveBoxQpWarm(benchmark::State& state) {
  const alip::QpProblem p = box_qp(static_cast<int>(state.range(0)), 7);
  const Eigen::VectorXd guess = alip::solve_qp(p).u;
  for (auto _ : state) benchmark::DoNotOptimize(alip::solve_qp(p, 500, guess));
}
BENCHMARK(BM_SolveBoxQpWarm)->Arg(10)->Arg(40)->Arg(80);

}  // namespace
