// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "generators.hpp"
#include "robsem/error.hpp"
#include "robsem/penalty.hpp"

namespace robsem {
namespace {

constexpr double kInf = Penalty::kInfinity;

// Ternary search for the maximum of a concave function on [lo, hi].
template <class F>
double concave_max(F f, double lo, double hi) {
  for (int it = 0; it < 300; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    (f(m1) < f(m2) ? lo : hi) = (f(m1) < f(m2) ? m1 : m2);
  }
  return f(0.5 * (lo + hi));
}

// sup_v (v w - phi(v)) by a dense scan of [0, vmax] refined by ternary
// search around the best sample.
double conjugate_by_scan(const Penalty& pen, double w, double vmax) {
  const int n = 20000;
  double best = 0.0;
  int arg = 0;
  for (int k = 0; k <= n; ++k) {
    const double v = vmax * k / n;
    const double val = v * w - pen.phi(v);
    if (val > best) {
      best = val;
      arg = k;
    }
  }
  const double lo = vmax * std::max(0, arg - 1) / n;
  const double hi = vmax * std::min(n, arg + 1) / n;
  return std::max(best, concave_max([&](double v) { return v * w - pen.phi(v); }, lo, hi));
}

TEST(Penalty, BallPhi) {
  const Penalty pen = Penalty::ball(2.0);
  EXPECT_EQ(pen.phi(1.9), 0.0);
  EXPECT_EQ(pen.phi(2.0), 0.0);
  EXPECT_EQ(pen.phi(2.1), kInf);
  EXPECT_THROW(pen.phi(-0.1), InvalidArgument);
}

TEST(Penalty, PowerPhi) { EXPECT_DOUBLE_EQ(Penalty::power(2.0, 0.5).phi(3.0), 4.5); }

TEST(Penalty, PhiAndConjugateVanishAtZero) {
  test::Gen gen(0x5eed0101);
  for (int trial = 0; trial < 50; ++trial) {
    const Penalty pen = gen.penalty();
    EXPECT_EQ(pen.phi(0.0), 0.0);
    EXPECT_EQ(pen.conjugate(0.0), 0.0);
    EXPECT_EQ(pen.phi_t(gen.uniform(0.01, 2.0), 0.0), 0.0);
  }
}

TEST(Penalty, Conjugates) {
  for (double a : {0.0, 0.5, 2.0}) {
    for (double w : {0.0, 0.3, 7.0}) EXPECT_DOUBLE_EQ(Penalty::ball(a).conjugate(w), a * w);
  }
  const Penalty half = Penalty::power(2.0, 0.5);
  for (double w : {0.0, 0.25, 1.0, 3.0}) {
    EXPECT_NEAR(half.conjugate(w), w * w / 2.0, 1e-14);
    EXPECT_NEAR(half.conjugate(w), conjugate_by_scan(half, w, 10.0), 1e-9);
  }
  const Penalty sq = Penalty::power(2.0, 1.0);
  EXPECT_NEAR(sq.conjugate(3.0), 9.0 / 4.0, 1e-14);
  const Penalty cubic = Penalty::power(3.0, 0.7);
  for (double w : {0.1, 1.0, 4.0}) EXPECT_NEAR(cubic.conjugate(w), conjugate_by_scan(cubic, w, 5.0), 1e-9);
}

TEST(Penalty, TableConjugateMatchesScan) {
  test::Gen gen(0x5eed0102);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<double> knots{0.0};
    std::vector<double> values{0.0};
    double slope = gen.uniform(0.0, 0.5);
    for (int k = 0; k < 4; ++k) {
      const double next = knots.back() + gen.uniform(0.2, 1.0);
      values.push_back(values.back() + slope * (next * next - knots.back() * knots.back()));
      knots.push_back(next);
      slope += gen.uniform(0.1, 1.5);
    }
    const Penalty pen = Penalty::table(knots, values);
    for (double w : {0.0, 0.2, 1.0, 3.0, 12.0}) {
      EXPECT_NEAR(pen.conjugate(w), conjugate_by_scan(pen, w, knots.back()), 1e-9);
    }
  }
}

TEST(Penalty, TableRejectsNonConvexInPower) {
  // Linear in v with a positive slope is concave in v^2.
  EXPECT_THROW(Penalty::table({0.0, 1.0, 2.0}, {0.0, 4.0, 4.5}), InvalidArgument);
  EXPECT_THROW(Penalty::table({0.5, 1.0}, {0.0, 1.0}), InvalidArgument);
  EXPECT_THROW(Penalty::table({0.0, 1.0, 1.0}, {0.0, 1.0, 2.0}), InvalidArgument);
  EXPECT_NO_THROW(Penalty::table({0.0, 1.0, 2.0}, {0.0, 1.0, 7.0}));
}

TEST(Penalty, RejectsInvalidParameters) {
  EXPECT_THROW(Penalty::ball(-1.0), InvalidArgument);
  EXPECT_THROW(Penalty::ball(1.0, 1.0), InvalidArgument);
  EXPECT_THROW(Penalty::power(1.0, 1.0), InvalidArgument);
  EXPECT_THROW(Penalty::power(2.0, 0.0), InvalidArgument);
  EXPECT_THROW(Penalty::power(1.5, 1.0, 2.0), InvalidArgument);
  EXPECT_THROW(Penalty::ball(1.0, 2.0, -0.5), InvalidArgument);
  EXPECT_THROW(Penalty::ball(1.0).conjugate(-1.0), InvalidArgument);
}

TEST(Penalty, PhiT) {
  const Penalty ball = Penalty::ball(0.5);
  for (double t : {0.1, 0.5, 1.0}) {
    EXPECT_EQ(ball.phi_t(t, 0.5 * t), 0.0);
    EXPECT_EQ(ball.phi_t(t, 0.5 * t * (1.0 + 1e-9)), kInf);
  }
  const Penalty pw = Penalty::power(2.0, 0.7);
  for (double t : {0.1, 0.5, 2.0}) {
    for (double v : {0.0, 0.3, 2.0}) EXPECT_NEAR(pw.phi_t(t, v), 0.7 * v * v / t, 1e-14);
  }
  // Growth constant damps the radius: phi_t(v) = t phi(e^{-ct} v / t).
  const Penalty grown = Penalty::ball(0.5, 2.0, 0.3);
  EXPECT_EQ(grown.phi_t(1.0, 0.5 * std::exp(0.3)), 0.0);
  EXPECT_EQ(grown.phi_t(1.0, 0.5 * std::exp(0.3) * (1.0 + 1e-9)), kInf);
  // phi_0 is the indicator of {0}.
  EXPECT_EQ(ball.phi_t(0.0, 0.0), 0.0);
  EXPECT_EQ(ball.phi_t(0.0, 1e-12), kInf);
}

TEST(Penalty, RadiusBoundLip) {
  for (double c : {0.0, 0.4}) {
    for (double L : {0.0, 1.0, 10.0}) {
      EXPECT_NEAR(Penalty::ball(0.7, 2.0, c).radius_bound_lip(L), 0.7 * std::exp(c), 1e-9);
    }
  }
  EXPECT_NEAR(Penalty::power(2.0, 1.0).radius_bound_lip(0.0), 1.0, 1e-9);
  // v^2 <= 1 + L v  <=>  v <= (L + sqrt(L^2 + 4)) / 2.
  for (double L : {0.5, 2.0, 9.0}) {
    EXPECT_NEAR(Penalty::power(2.0, 1.0).radius_bound_lip(L), 0.5 * (L + std::sqrt(L * L + 4.0)),
                1e-8);
  }
}

TEST(Penalty, RadiusBoundLipMonotoneInL) {
  test::Gen gen(0x5eed0103);
  for (int trial = 0; trial < 60; ++trial) {
    const Penalty pen = gen.penalty().with_growth(gen.uniform(0.0, 1.0));
    const double l1 = gen.uniform(0.0, 5.0);
    const double l2 = l1 + gen.uniform(0.0, 5.0);
    EXPECT_LE(pen.radius_bound_lip(l1), pen.radius_bound_lip(l2) * (1.0 + 1e-10));
  }
}

TEST(Penalty, RadiusBoundBounded) {
  for (double C : {0.0, 1.0, 4.0}) {
    const BoundedRadius ball = Penalty::ball(0.6).radius_bound_bounded(C);
    EXPECT_NEAR(ball.M, 0.36, 1e-14);
    EXPECT_NEAR(ball.b, std::sqrt(2.0 * 0.36 * (1.0 + C)), 1e-12);
    EXPECT_DOUBLE_EQ(ball.alpha, 0.5);

    const BoundedRadius pw = Penalty::power(3.0, 1.0, 3.0).radius_bound_bounded(C);
    EXPECT_NEAR(pw.M, 1.0, 1e-12);
    EXPECT_NEAR(pw.b, std::cbrt(2.0 * (1.0 + C)), 1e-12);
    EXPECT_NEAR(pw.alpha, 2.0 / 3.0, 1e-15);
  }
}

TEST(Penalty, RadiusBoundBoundedDominatesRatio) {
  // v^p <= M (1 + phi(v)) must hold everywhere.
  test::Gen gen(0x5eed0104);
  for (int trial = 0; trial < 60; ++trial) {
    const Penalty pen = gen.penalty();
    const double M = pen.radius_bound_bounded(1.0).M;
    for (int k = 0; k <= 2000; ++k) {
      const double v = 1e-3 * std::pow(1.01, k);
      const double f = pen.phi(v);
      if (std::isfinite(f)) {
        EXPECT_LE(std::pow(v, 2.0), M * (1.0 + f) * (1.0 + 1e-9) + 1e-12);
      }
    }
  }
}

TEST(Penalty, FenchelYoung) {
  test::Gen gen(0x5eed0105);
  for (int trial = 0; trial < 60; ++trial) {
    const Penalty pen = gen.penalty();
    for (int k = 0; k < 50; ++k) {
      const double v = gen.uniform(0.0, 4.0);
      const double w = gen.uniform(0.0, 10.0);
      EXPECT_LE(v * w, pen.phi(v) + pen.conjugate(w) + 1e-9);
    }
  }
}

TEST(Penalty, ShapeOnSampleGrids) {
  test::Gen gen(0x5eed0106);
  for (int trial = 0; trial < 60; ++trial) {
    const Penalty pen = gen.penalty();
    const double p = pen.transport_order();
    for (int k = 1; k < 200; ++k) {
      const double v0 = 0.02 * (k - 1);
      const double v1 = 0.02 * k;
      const double v2 = 0.02 * (k + 1);
      // phi nondecreasing and midpoint convex.
      EXPECT_LE(pen.phi(v0), pen.phi(v1));
      const double f0 = pen.phi(v0);
      const double f2 = pen.phi(v2);
      if (std::isfinite(f0) && std::isfinite(f2)) {
        EXPECT_LE(pen.phi(v1), 0.5 * (f0 + f2) + 1e-9);
      }
      // B -> phi(B^(1/p)) midpoint convex.
      const double g0 = pen.phi(std::pow(v0, 1.0 / p));
      const double g2 = pen.phi(std::pow(v2, 1.0 / p));
      if (std::isfinite(g0) && std::isfinite(g2)) {
        EXPECT_LE(pen.phi(std::pow(v1, 1.0 / p)), 0.5 * (g0 + g2) + 1e-9);
      }
      // conjugate nondecreasing and midpoint convex.
      const double w0 = 0.05 * (k - 1);
      const double w1 = 0.05 * k;
      const double w2 = 0.05 * (k + 1);
      EXPECT_LE(pen.conjugate(w0), pen.conjugate(w1) + 1e-12);
      EXPECT_LE(pen.conjugate(w1), 0.5 * (pen.conjugate(w0) + pen.conjugate(w2)) + 1e-9);
      EXPECT_TRUE(std::isfinite(pen.conjugate(w2)));
    }
  }
}

TEST(Penalty, TableBiconjugateAtKnots) {
  test::Gen gen(0x5eed0107);
  for (int trial = 0; trial < 30; ++trial) {
    Penalty pen = gen.penalty();
    while (pen.kind() != PenaltyKind::Table) pen = gen.penalty();
    const auto& knots = pen.knots();
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
      const double v = knots[k];
      const double bi = concave_max([&](double w) { return v * w - pen.conjugate(w); }, 0.0, 1e3);
      EXPECT_NEAR(bi, pen.phi(v), 1e-8) << "knot " << k;
    }
  }
}

TEST(Penalty, BudgetConjugateMatchesScan) {
  test::Gen gen(0x5eed0108);
  for (int trial = 0; trial < 60; ++trial) {
    const Penalty pen = gen.penalty().with_growth(gen.coin() ? 0.0 : gen.uniform(0.0, 0.5));
    const double t = gen.uniform(0.05, 1.0);
    const double lambda = gen.uniform(0.0, 20.0);
    const double cap = gen.uniform(0.01, 2.0);
    double scan = 0.0;
    const int n = 40000;
    for (int k = 0; k <= n; ++k) {
      const double B = cap * k / n;
      const double val = lambda * B - pen.phi_t(t, std::pow(B, 1.0 / pen.transport_order()));
      if (std::isfinite(val)) scan = std::max(scan, val);
    }
    const BudgetConjugate got = pen.budget_conjugate_at(t, lambda, cap);
    EXPECT_GE(got.value, scan - 1e-12);
    EXPECT_LE(got.value, scan + 1e-3 * (1.0 + lambda) * cap);
    // The reported budget attains the value; step inside by an ulp-scale margin
    // so a ball edge does not round outside the indicator.
    const double B = got.budget * (1.0 - 1e-12);
    EXPECT_NEAR(lambda * B - pen.phi_t(t, std::pow(B, 1.0 / pen.transport_order())), got.value,
                1e-9 * (1.0 + got.value));
    EXPECT_LE(got.budget, cap * (1.0 + 1e-12));
  }
}

TEST(Penalty, MaximizeLinearMatchesScan) {
  test::Gen gen(0x5eed0109);
  for (int trial = 0; trial < 100; ++trial) {
    const Penalty pen = gen.penalty();
    const double s = gen.uniform(-1.0, 6.0);
    const double lo = gen.uniform(0.0, 1.0);
    const double hi = lo + gen.uniform(0.0, 3.0);
    const double arg = pen.maximize_linear(s, lo, hi);
    ASSERT_GE(arg, lo);
    ASSERT_LE(arg, hi);
    const auto obj = [&](double v) { return s * v - pen.phi(v); };
    double best = obj(lo);
    for (int k = 0; k <= 20000; ++k) best = std::max(best, obj(lo + (hi - lo) * k / 20000));
    if (std::isfinite(best)) {
      EXPECT_GE(obj(arg), best - 1e-9);
    }
  }
}

}  // namespace
}  // namespace robsem
