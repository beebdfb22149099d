// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "generators.hpp"
#include "robsem/error.hpp"
#include "robsem/models.hpp"

namespace robsem {
namespace {

std::vector<ReferenceModel> zoo() {
  return {ReferenceModel::brownian(0.8, 0.1), ReferenceModel::ou1d(0.3, 0.2, 0.5),
          ReferenceModel::ou1d(-0.7, 0.0, 1.0), ReferenceModel::gbm(0.05, 0.2),
          ReferenceModel::koopman({0.0, -1.0}, 1e-3, -6.0, 6.0),
          ReferenceModel::koopman({0.5, 0.2, -0.1}, 1e-3, -4.0, 4.0)};
}

double bump(double x) { return std::abs(x) < 2.0 ? std::exp(1.0 - 1.0 / (1.0 - x * x / 4.0)) : 0.0; }

TEST(Models, FlowStartsAtIdentity) {
  test::Gen gen(0x5eed0301);
  for (const auto& m : zoo()) {
    for (int k = 0; k < 20; ++k) {
      const double x = gen.uniform(-3.0, 3.0);
      EXPECT_EQ(m.flow(0.0, x), x) << m.name();
    }
  }
}

TEST(Models, FlowLipschitzGrowth) {
  test::Gen gen(0x5eed0302);
  for (const auto& m : zoo()) {
    for (int k = 0; k < 50; ++k) {
      const double t = gen.uniform(0.0, 2.0);
      const double a = gen.uniform(-3.0, 3.0);
      const double b = gen.uniform(-3.0, 3.0);
      EXPECT_LE(std::abs(m.flow(t, a) - m.flow(t, b)),
                std::exp(m.growth() * t) * std::abs(a - b) * (1.0 + 1e-9) + 1e-12)
          << m.name();
    }
  }
}

TEST(Models, NoiseMomentVanishesAtZero) {
  for (const auto& m : zoo()) {
    double previous = INFINITY;
    for (int k = 0; k < 12; ++k) {
      const double m2 = pth_moment(m.noise_law(std::ldexp(1.0, -k), 64), 2.0);
      EXPECT_LE(m2, previous + 1e-15) << m.name();
      previous = m2;
    }
    EXPECT_LT(previous, 0.05) << m.name();
    EXPECT_EQ(m.noise_law(0.0, 64), DiscreteMeasure::dirac(0.0));
  }
}

TEST(Brownian, FlowAndLaw) {
  const ReferenceModel m = ReferenceModel::brownian(1.5, 0.2);
  EXPECT_EQ(m.flow(5.0, 1.2), 1.2);
  EXPECT_EQ(m.growth(), 0.0);
  EXPECT_EQ(m.noise_law(0.7, 33), discretize_gaussian(0.2 * 0.7, 1.5 * 1.5 * 0.7, 33));
  EXPECT_THROW(ReferenceModel::brownian(-1.0), InvalidArgument);
}

TEST(OrnsteinUhlenbeck, ReducesToBrownianAtZeroBeta) {
  const ReferenceModel ou = ReferenceModel::ou1d(0.0, 0.3, 1.2);
  const ReferenceModel bm = ReferenceModel::brownian(1.2, 0.3);
  for (double t : {0.1, 1.0, 3.0}) {
    EXPECT_EQ(ou.flow(t, 0.7), bm.flow(t, 0.7));
    EXPECT_EQ(ou.noise_law(t, 17), bm.noise_law(t, 17));
  }
}

TEST(OrnsteinUhlenbeck, LinearFlowAndVariance) {
  const double beta = std::log(2.0);
  const ReferenceModel ou = ReferenceModel::ou1d(beta, 0.0, 1.0);
  EXPECT_NEAR(ou.flow(1.3, 2.0) - ou.flow(1.3, -0.5), std::exp(beta * 1.3) * 2.5, 1e-14);
  EXPECT_NEAR(ou.noise_variance(1.0), 3.0 / (2.0 * beta), 1e-14);
  // Simpson quadrature of int_0^1 e^{2 beta s} ds.
  const int n = 2000;
  double acc = 1.0 + std::exp(2.0 * beta);
  for (int k = 1; k < n; ++k) acc += (k % 2 ? 4.0 : 2.0) * std::exp(2.0 * beta * k / n);
  EXPECT_NEAR(ou.noise_variance(1.0), acc / (3.0 * n), 1e-12);
  EXPECT_DOUBLE_EQ(ou.growth(), beta);
  EXPECT_EQ(ReferenceModel::ou1d(-1.0, 0.0, 1.0).growth(), 0.0);
}

TEST(OrnsteinUhlenbeck, NoiseMeanIntegratesTheDrift) {
  const ReferenceModel ou = ReferenceModel::ou1d(-0.5, 0.8, 0.0);
  // int_0^t e^{beta s} m ds
  EXPECT_NEAR(ou.noise_mean(2.0), 0.8 * (1.0 - std::exp(-1.0)) / 0.5, 1e-14);
}

TEST(Gbm, LogChart) {
  const ReferenceModel g = ReferenceModel::gbm(0.05, 0.2);
  test::Gen gen(0x5eed0303);
  for (int k = 0; k < 100; ++k) {
    const double z = gen.uniform(-5.0, 5.0);
    EXPECT_NEAR(g.to_chart(g.from_chart(z)), z, 1e-15 * (1.0 + std::abs(z)));
  }
  EXPECT_THROW(g.to_chart(0.0), InvalidArgument);
  EXPECT_EQ(g.chart(), Chart::Log);
  EXPECT_EQ(g.growth(), 0.0);
  EXPECT_EQ(g.noise_law(1.0, 9), discretize_gaussian(0.05 - 0.5 * 0.2 * 0.2, 0.2 * 0.2, 9));
  // u(x) = log x has |x u'(x)| = 1 everywhere.
  for (double x : {0.1, 1.0, 30.0}) EXPECT_DOUBLE_EQ(g.chart_jacobian(x) * (1.0 / x), 1.0);
  const ReferenceModel bm = g.chart_equivalent();
  EXPECT_EQ(bm.type(), ModelType::Brownian);
  EXPECT_EQ(bm.noise_law(0.6, 21), g.noise_law(0.6, 21));
}

TEST(Koopman, ZeroFieldIsIdentity) {
  const ReferenceModel k = ReferenceModel::koopman({0.0}, 1e-2, -5.0, 5.0);
  EXPECT_TRUE(k.identity_flow());
  EXPECT_EQ(k.flow(3.0, 1.25), 1.25);
  EXPECT_EQ(k.noise_law(1.0, 10), DiscreteMeasure::dirac(0.0));
}

TEST(Koopman, LinearDecayMatchesExponential) {
  for (double dt : {0.1, 0.05, 0.025}) {
    const ReferenceModel k = ReferenceModel::koopman({0.0, -1.0}, dt, -10.0, 10.0);
    const double err = std::abs(k.flow(1.0, 2.0) - 2.0 * std::exp(-1.0));
    // Classical RK4 global error for x' = -x: about (dt^4 / 120) |x|.
    EXPECT_LT(err, 2.0 * std::pow(dt, 4) / 100.0) << dt;
  }
  EXPECT_DOUBLE_EQ(ReferenceModel::koopman({0.0, -1.0}, 1e-3, -1.0, 1.0).growth(), 1.0);
  EXPECT_NEAR(ReferenceModel::koopman({0.0, 0.0, 1.0}, 1e-3, -2.0, 3.0).growth(), 6.0, 1e-12);
}

TEST(Koopman, Semiflow) {
  const ReferenceModel k = ReferenceModel::koopman({0.3, -1.0, 0.0, -0.2}, 1e-3, -6.0, 6.0);
  test::Gen gen(0x5eed0304);
  for (int trial = 0; trial < 30; ++trial) {
    const double s = gen.uniform(0.0, 1.0);
    const double t = gen.uniform(0.0, 1.0);
    const double x = gen.uniform(-2.0, 2.0);
    EXPECT_NEAR(k.flow(t, k.flow(s, x)), k.flow(s + t, x), 1e-8);
  }
}

TEST(Koopman, ClampsOutsideWorkingInterval) {
  const ReferenceModel k = ReferenceModel::koopman({0.0, 1.0}, 1e-2, -1.0, 1.0);
  const FlowResult r = k.flow_checked(5.0, 0.5);
  EXPECT_TRUE(r.clamped);
  EXPECT_EQ(r.value, 1.0);
  EXPECT_FALSE(k.flow_checked(0.1, 0.2).clamped);
}

TEST(Consistency, ConstantPayoffIsExact) {
  const GridFunction u = GridFunction::sample(-8.0, 8.0, 161, [](double) { return 2.5; });
  for (const auto& m : zoo()) EXPECT_EQ(check_consistency(m, 0.3, 0.7, u, {-1.0, 0.0, 1.5}, 50), 0.0);
}

TEST(Consistency, KoopmanSemiflowDefect) {
  const ReferenceModel k = ReferenceModel::koopman({0.0, -1.0}, 1e-3, -6.0, 6.0);
  const GridFunction u = GridFunction::sample(-6.0, 6.0, 1201, bump);
  EXPECT_LE(check_consistency(k, 0.4, 0.6, u, {-1.0, -0.3, 0.0, 0.8}, 1), 1e-8);
}

TEST(Consistency, GaussianResidualShrinksWithAtoms) {
  const GridFunction u = GridFunction::sample(-8.0, 8.0, 1601, bump);
  const std::vector<double> xs{-1.5, -0.5, 0.0, 0.7, 1.9};
  for (const auto& m : {ReferenceModel::brownian(1.0), ReferenceModel::ou1d(-0.5, 0.1, 0.8)}) {
    const double r50 = check_consistency(m, 0.5, 0.5, u, xs, 50);
    const double r200 = check_consistency(m, 0.5, 0.5, u, xs, 200);
    const double r800 = check_consistency(m, 0.5, 0.5, u, xs, 800);
    EXPECT_GT(r50, r200) << m.name();
    EXPECT_GT(r200, r800) << m.name();
    EXPECT_LT(r800, 1e-3) << m.name();
  }
}

}  // namespace
}  // namespace robsem
