// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "generators.hpp"
#include "oracles.hpp"
#include "robsem/error.hpp"
#include "robsem/measures.hpp"

namespace robsem {
namespace {

std::vector<double> vec(std::span<const double> s) { return {s.begin(), s.end()}; }

TEST(DiscreteMeasure, MergesSortsAndDropsZeroWeights) {
  const DiscreteMeasure mu({2.0, 0.0, 2.0, 1.0}, {0.25, 0.25, 0.25, 0.25});
  EXPECT_EQ(mu.size(), 3u);
  EXPECT_EQ(vec(mu.atoms()), (std::vector<double>{0.0, 1.0, 2.0}));
  EXPECT_DOUBLE_EQ(mu.weights()[2], 0.5);

  const DiscreteMeasure nu({0.0, 5.0}, {1.0, 0.0});
  EXPECT_EQ(nu, DiscreteMeasure::dirac(0.0));
}

TEST(DiscreteMeasure, RejectsBadInput) {
  EXPECT_THROW(DiscreteMeasure({0.0}, {0.9}), InvalidArgument);
  EXPECT_THROW(DiscreteMeasure({0.0, 1.0}, {1.5, -0.5}), InvalidArgument);
  EXPECT_THROW(DiscreteMeasure({0.0, 1.0}, {1.0}), InvalidArgument);
  EXPECT_THROW(DiscreteMeasure({NAN}, {1.0}), InvalidArgument);
}

TEST(DiscreteMeasure, CsvRoundTrip) {
  const DiscreteMeasure mu({-1.25, 0.5, 3.0}, {0.2, 0.3, 0.5});
  const std::string csv = mu.to_csv();
  EXPECT_EQ(csv.substr(0, 12), "atom,weight\n");
  EXPECT_EQ(DiscreteMeasure::from_csv(csv), mu);
}

TEST(Wasserstein, Examples) {
  EXPECT_DOUBLE_EQ(wasserstein_p(DiscreteMeasure::dirac(0.0), DiscreteMeasure::dirac(3.0), 2.0), 3.0);
  const DiscreteMeasure two({0.0, 2.0}, {0.5, 0.5});
  EXPECT_NEAR(wasserstein_p(two, DiscreteMeasure::dirac(1.0), 1.0), 1.0, 1e-15);
  for (double p : {1.0, 1.5, 2.0, 4.0}) EXPECT_EQ(wasserstein_p(two, two, p), 0.0);
  EXPECT_THROW(wasserstein_p(two, two, 0.5), InvalidArgument);
}

TEST(Wasserstein, TwoByOneAgainstEnumeration) {
  const double got = wasserstein_p(DiscreteMeasure({0.0, 2.0}, {0.5, 0.5}), DiscreteMeasure::dirac(1.0), 1.0);
  EXPECT_NEAR(got, test::wasserstein_enumerate({0.0, 2.0}, {0.5, 0.5}, {1.0}, {1.0}, 1.0), 1e-15);
}

TEST(Wasserstein, QuantileCouplingMatchesEnumeration) {
  test::Gen gen(0x5eed0001);
  for (int trial = 0; trial < 200; ++trial) {
    const DiscreteMeasure mu = gen.measure(gen.integer(1, 4));
    const DiscreteMeasure nu = gen.measure(gen.integer(1, 4));
    const double p = std::array{1.0, 1.5, 2.0, 3.0}[static_cast<std::size_t>(gen.integer(0, 3))];
    const double oracle = test::wasserstein_enumerate(vec(mu.atoms()), vec(mu.weights()),
                                                      vec(nu.atoms()), vec(nu.weights()), p);
    EXPECT_NEAR(wasserstein_p(mu, nu, p), oracle, 1e-9) << "trial " << trial;
  }
}

TEST(Wasserstein, SymmetricAndTriangle) {
  test::Gen gen(0x5eed0002);
  for (int trial = 0; trial < 300; ++trial) {
    const DiscreteMeasure a = gen.measure(gen.integer(1, 8));
    const DiscreteMeasure b = gen.measure(gen.integer(1, 8));
    const DiscreteMeasure c = gen.measure(gen.integer(1, 8));
    for (double p : {1.0, 2.0, 3.0}) {
      EXPECT_DOUBLE_EQ(wasserstein_p(a, b, p), wasserstein_p(b, a, p));
      EXPECT_LE(wasserstein_p(a, c, p), wasserstein_p(a, b, p) + wasserstein_p(b, c, p) + 1e-9);
    }
  }
}

TEST(Wasserstein, FirstMomentControl) {
  // int |z| nu(dz) <= W_p(mu, nu) + int |y| mu(dy).
  test::Gen gen(0x5eed0003);
  for (int trial = 0; trial < 300; ++trial) {
    const DiscreteMeasure mu = gen.measure(gen.integer(1, 6));
    const DiscreteMeasure nu = gen.measure(gen.integer(1, 6), -6.0, 6.0);
    const double p = gen.uniform(1.0, 4.0);
    const double lhs = nu.expectation([](double z) { return std::abs(z); });
    const double rhs = wasserstein_p(mu, nu, p) + mu.expectation([](double y) { return std::abs(y); });
    EXPECT_LE(lhs, rhs + 1e-12);
  }
}

TEST(PthMoment, Examples) {
  EXPECT_EQ(pth_moment(DiscreteMeasure::dirac(0.0), 2.0), 0.0);
  EXPECT_DOUBLE_EQ(pth_moment(DiscreteMeasure({-1.0, 1.0}, {0.5, 0.5}), 2.0), 1.0);
  EXPECT_DOUBLE_EQ(pth_moment(DiscreteMeasure({0.0, 2.0}, {0.5, 0.5}), 1.0), 1.0);
}

TEST(PthMoment, EqualsDistanceToOrigin) {
  test::Gen gen(0x5eed0004);
  for (int trial = 0; trial < 100; ++trial) {
    const DiscreteMeasure mu = gen.measure(gen.integer(1, 10));
    const double p = gen.uniform(1.0, 5.0);
    EXPECT_NEAR(pth_moment(mu, p), wasserstein_p(mu, DiscreteMeasure::dirac(0.0), p), 1e-12);
  }
}

TEST(Shift, TranslatesAtoms) {
  EXPECT_EQ(shift(DiscreteMeasure::dirac(0.0), 1.5), DiscreteMeasure::dirac(1.5));
  const DiscreteMeasure mu({-1.0, 0.5}, {0.3, 0.7});
  EXPECT_EQ(shift(mu, 0.0), mu);
}

TEST(Shift, DistanceAtMostDisplacement) {
  test::Gen gen(0x5eed0005);
  for (int trial = 0; trial < 200; ++trial) {
    const DiscreteMeasure mu = gen.measure(gen.integer(1, 10));
    const double d = gen.uniform(-3.0, 3.0);
    for (double p : {1.0, 2.0, 3.5}) EXPECT_LE(wasserstein_p(mu, shift(mu, d), p), std::abs(d) + 1e-12);
  }
}

TEST(Gaussian, DegenerateAndSymmetric) {
  EXPECT_EQ(discretize_gaussian(0.0, 0.0, 5), DiscreteMeasure::dirac(0.0));
  for (int n : {1, 2, 7, 64, 501}) {
    EXPECT_NEAR(discretize_gaussian(0.0, 1.0, n).mean(), 0.0, 1e-12);
    EXPECT_NEAR(discretize_gaussian(1.75, 0.3, n).mean(), 1.75, 1e-12);
  }
  EXPECT_THROW(discretize_gaussian(0.0, -1.0, 3), InvalidArgument);
}

TEST(Gaussian, QuantileMidpoints) {
  const DiscreteMeasure mu = discretize_gaussian(0.0, 1.0, 4);
  // Phi^{-1}(1/8), Phi^{-1}(3/8) from tables.
  EXPECT_NEAR(mu.atoms()[0], -1.1503493803760079, 1e-12);
  EXPECT_NEAR(mu.atoms()[1], -0.31863936396437514, 1e-12);
}

TEST(Gaussian, SecondMomentConvergesAgainstMonteCarlo) {
  // A million-sample estimate of E[Y^2] for Y ~ N(0, 1); the discretisation
  // must approach it as the atom count grows.
  std::mt19937_64 rng(0x5eed0006);
  std::normal_distribution<double> normal;
  double acc = 0.0;
  constexpr int kSamples = 1'000'000;
  for (int k = 0; k < kSamples; ++k) {
    const double y = normal(rng);
    acc += y * y;
  }
  const double mc = acc / kSamples;  // standard error about 1.4e-3
  double previous = INFINITY;
  for (int n : {10, 100, 1000, 10000}) {
    const double m2 = discretize_gaussian(0.0, 1.0, n).expectation([](double y) { return y * y; });
    const double err = std::abs(m2 - 1.0);
    EXPECT_LT(err, previous);
    previous = err;
  }
  const double fine = discretize_gaussian(0.0, 1.0, 10000).expectation([](double y) { return y * y; });
  EXPECT_NEAR(fine, mc, 6e-3);
}

TEST(Lognormal, ExponentiatesGaussianAtoms) {
  EXPECT_EQ(discretize_lognormal(0.0, 0.0, 3), DiscreteMeasure::dirac(1.0));
  test::Gen gen(0x5eed0007);
  for (int trial = 0; trial < 50; ++trial) {
    const double m = gen.uniform(-2.0, 2.0);
    const double s = gen.uniform(0.0, 1.5);
    const int n = gen.integer(1, 40);
    const DiscreteMeasure ln = discretize_lognormal(m, s, n);
    const DiscreteMeasure g = discretize_gaussian(m, s * s, n);
    ASSERT_EQ(ln.size(), g.size());
    for (std::size_t i = 0; i < ln.size(); ++i) {
      EXPECT_GT(ln.atoms()[i], 0.0);
      EXPECT_NEAR(std::log(ln.atoms()[i]), g.atoms()[i], 4e-16 * (1.0 + std::abs(g.atoms()[i])));
    }
  }
  EXPECT_THROW(discretize_lognormal(0.0, -0.1, 3), InvalidArgument);
}

}  // namespace
}  // namespace robsem
