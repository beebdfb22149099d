// SPDX-License-Identifier: Apache-2.0
//
// Hand-rolled random instance generators for property tests. Every test
// owns its own Gen seeded with a fixed constant, so failures reproduce.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "robsem/grid.hpp"
#include "robsem/measures.hpp"
#include "robsem/penalty.hpp"

namespace robsem::test {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

  /// n atoms in [lo, hi] with weights bounded away from zero.
  std::vector<double> weights(int n) {
    std::vector<double> w(static_cast<std::size_t>(n));
    double total = 0.0;
    for (double& v : w) total += (v = uniform(0.05, 1.0));
    for (double& v : w) v /= total;
    return w;
  }

  DiscreteMeasure measure(int n, double lo = -3.0, double hi = 3.0) {
    std::vector<double> a(static_cast<std::size_t>(n));
    for (double& v : a) v = uniform(lo, hi);
    return DiscreteMeasure(std::move(a), weights(n));
  }

  /// A random walk with increments bounded by slope * dx, on [lo, hi].
  GridFunction lipschitz_function(double lo, double hi, std::size_t n, double slope,
                                  Extension ext = Extension::Constant) {
    std::vector<double> v(n);
    const double dx = (hi - lo) / static_cast<double>(n - 1);
    v[0] = uniform(-1.0, 1.0);
    for (std::size_t k = 1; k < n; ++k) v[k] = v[k - 1] + uniform(-slope, slope) * dx;
    return GridFunction(lo, hi, std::move(v), ext, slope);
  }

  Penalty penalty(double p = 2.0) {
    switch (integer(0, 2)) {
      case 0: return Penalty::ball(uniform(0.1, 1.0), p);
      case 1: return Penalty::power(uniform(p, p + 1.5), uniform(0.3, 2.0), p);
      default: {
        // Increasing slopes as a function of v^p.
        std::vector<double> knots{0.0};
        std::vector<double> values{0.0};
        double slope = uniform(0.0, 0.5);
        for (int k = 0; k < 4; ++k) {
          const double next = knots.back() + uniform(0.2, 1.0);
          values.push_back(values.back() + slope * (std::pow(next, p) - std::pow(knots.back(), p)));
          knots.push_back(next);
          slope += uniform(0.1, 1.5);
        }
        return Penalty::table(knots, values, p);
      }
    }
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace robsem::test
