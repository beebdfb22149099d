// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "robsem/measures.hpp"
#include "robsem/onestep.hpp"

namespace robsem {
namespace {

DiscreteMeasure random_measure(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> pos(-3.0, 3.0);
  std::uniform_real_distribution<double> mass(0.1, 1.0);
  std::vector<double> xs(static_cast<std::size_t>(n));
  std::vector<double> ws(xs.size());
  double total = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs[i] = pos(rng);
    ws[i] = mass(rng);
    total += ws[i];
  }
  for (double& w : ws) w /= total;
  return DiscreteMeasure(std::move(xs), std::move(ws));
}

void BM_WassersteinP(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const int n = static_cast<int>(state.range(0));
  const DiscreteMeasure a = random_measure(rng, n);
  const DiscreteMeasure b = random_measure(rng, n);
  for (auto _ : state) benchmark::DoNotOptimize(wasserstein_p(a, b, 2.0));
  state.SetComplexityN(n);
}
BENCHMARK(BM_WassersteinP)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

void BM_GaussianLaw(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(discretize_gaussian(0.0, 1.0, n));
}
BENCHMARK(BM_GaussianLaw)->Arg(32)->Arg(256)->Arg(2048);

void BM_BallSup(benchmark::State& state) {
  const int n_nodes = static_cast<int>(state.range(0));
  std::vector<double> zs, gs;
  for (int j = 0; j < n_nodes; ++j) {
    const double z = -4.0 + 8.0 * j / (n_nodes - 1);
    zs.push_back(z);
    gs.push_back(std::sin(3.0 * z) * std::exp(-z * z / 4.0));
  }
  const NodePayoff g(zs, gs, 2.0);
  const DiscreteMeasure mu = discretize_gaussian(0.0, 1.0, 32);
  for (auto _ : state) benchmark::DoNotOptimize(ball_sup(mu, 2.0, 0.3, g).value);
}
BENCHMARK(BM_BallSup)->Arg(41)->Arg(161)->Arg(641);

}  // namespace
}  // namespace robsem
