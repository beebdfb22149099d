// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <cmath>

#include "robsem/hjb.hpp"
#include "robsem/iteration.hpp"
#include "robsem/onestep.hpp"

namespace robsem {
namespace {

double bump(double x) { return std::abs(x) < 2.0 ? std::exp(1.0 - 1.0 / (1.0 - x * x / 4.0)) : 0.0; }

Penalty penalty_for(int kind) { return kind == 0 ? Penalty::ball(0.5) : Penalty::power(2.0, 1.0); }

// One worst-case evaluation; range(0) selects ball (0) or power (1).
void BM_WorstCase(benchmark::State& state) {
  const TestFunction u(GridFunction::sample(-6.0, 6.0, 241, bump));
  const OneStep step(ReferenceModel::brownian(1.0), penalty_for(static_cast<int>(state.range(0))), 0.25, 32, u);
  double x = -3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(step.worst_case(x));
    x = x > 3.0 ? -3.0 : x + 0.013;
  }
}
BENCHMARK(BM_WorstCase)->Arg(0)->Arg(1);

void BM_Martingale(benchmark::State& state) {
  const TestFunction u(GridFunction::sample(-6.0, 6.0, 241, bump));
  const OneStep step(ReferenceModel::brownian(1.0), Penalty::ball(0.5), 0.25, 32, u);
  double x = -3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(step.martingale(x));
    x = x > 3.0 ? -3.0 : x + 0.013;
  }
}
BENCHMARK(BM_Martingale);

void BM_DriftShift(benchmark::State& state) {
  const TestFunction u(GridFunction::sample(-6.0, 6.0, 241, bump));
  const OneStep step(ReferenceModel::brownian(1.0), Penalty::ball(0.5), 0.25, 32, u);
  double x = -3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(step.drift_shift(x));
    x = x > 3.0 ? -3.0 : x + 0.013;
  }
}
BENCHMARK(BM_DriftShift);

// Full dyadic iteration to depth range(0).
void BM_DyadicIterate(benchmark::State& state) {
  const TestFunction u(GridFunction::sample(-6.0, 6.0, 121, bump));
  IterationOptions o;
  o.n_atoms = 16;
  const int depth = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(dyadic_iterate(ReferenceModel::brownian(1.0), Penalty::ball(0.5), 1.0, u, depth, o));
  }
}
BENCHMARK(BM_DyadicIterate)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_HjbSolve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const GridFunction u0 = GridFunction::sample(-6.0, 6.0, n, bump);
  const PdeProblem p =
      PdeProblem::from_model(ReferenceModel::brownian(1.0), Penalty::ball(0.5), -6.0, 6.0, n, 0.5, u0.lipschitz());
  for (auto _ : state) benchmark::DoNotOptimize(solve(p, u0).u.values()[0]);
  state.SetComplexityN(static_cast<benchmark::IterationCount>(n));
}
BENCHMARK(BM_HjbSolve)->RangeMultiplier(2)->Range(151, 1201)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace robsem
