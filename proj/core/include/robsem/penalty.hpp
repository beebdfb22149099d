// SPDX-License-Identifier: Apache-2.0
//
// Convex penalisation of the transport radius.
//
// A Penalty bundles a convex, lower semicontinuous phi: [0, inf) -> [0, inf]
// with phi(0) = 0, the growth constant c of the reference model and the
// transport order p. It provides the conjugate phi*, the time-scaled family
//   phi_t(v) = t * phi(exp(-c t) v / t),
// the radius bounds that make the worst-case search finite, and the
// conjugate of the budget form B -> phi_t(B^(1/p)) used by the dual solver.

#pragma once

#include <cstddef>
#include <limits>
#include <vector>

namespace robsem {

enum class PenaltyKind { Ball, Power, Table };

/// Value and maximising budget of chi*(lambda).
struct BudgetConjugate {
  double value = 0.0;
  double budget = 0.0;  ///< a subgradient of chi* at lambda
};

struct BoundedRadius {
  double M = 0.0;      ///< v^p <= M (1 + phi(v)) for all v >= 0.
  double b = 0.0;      ///< Radius constant: W_p <= b t^alpha.
  double alpha = 0.0;  ///< (p - 1) / p.
};

class Penalty {
 public:
  static constexpr double kInfinity = std::numeric_limits<double>::infinity();

  /// phi = 0 on [0, a], +inf beyond.
  static Penalty ball(double a, double p = 2.0, double c = 0.0);
  /// phi(v) = scale * v^exponent.
  static Penalty power(double exponent, double scale, double p = 2.0, double c = 0.0);
  /// Through (knots, values), linear in v^p between knots, +inf after the
  /// last knot. knots[0] must be 0 with value 0. Values must be convex and
  /// nondecreasing as a function of knot^p.
  static Penalty table(std::vector<double> knots, std::vector<double> values, double p = 2.0,
                       double c = 0.0);

  Penalty with_growth(double c) const;

  PenaltyKind kind() const { return kind_; }
  double transport_order() const { return p_; }
  double growth() const { return c_; }
  double ball_radius() const { return a_; }
  double exponent() const { return exponent_; }
  double scale() const { return scale_; }
  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& knot_values() const { return values_; }

  double phi(double v) const;
  double conjugate(double w) const;
  /// Slope of phi* at w (right derivative); bounds the slope on [0, w].
  double conjugate_slope(double w) const;
  double phi_t(double t, double v) const;

  /// sup J with J = {v >= 0 : phi(exp(-c max(1, horizon)) v) <= 1 + L v}.
  /// For horizon <= 1 this is the classical constant.
  double radius_bound_lip(double L, double horizon = 1.0) const;
  BoundedRadius radius_bound_bounded(double C) const;

  /// Largest transport radius that can matter in the worst case at time t
  /// for a payoff with Lipschitz constant L and sup-norm C.
  double radius_cap(double L, double C, double t) const;

  /// chi*(lambda) = sup_{0 <= B <= budget_cap} (lambda B - phi_t(B^(1/p))).
  double budget_conjugate(double t, double lambda, double budget_cap) const;
  BudgetConjugate budget_conjugate_at(double t, double lambda, double budget_cap) const;

  /// argmax over v in [lo, hi] of (s v - phi(v)); lo is returned when the
  /// whole interval lies outside dom(phi).
  double maximize_linear(double s, double lo, double hi) const;

 private:
  struct TableArgmax {
    double arg;
    double value;
  };

  Penalty() = default;
  void validate() const;
  /// Slope in v^p of the table piece [knots[k-1], knots[k]].
  double table_slope(std::size_t k) const;
  /// argmax of s v - phi(v) over [lo, hi] within the table's domain.
  TableArgmax table_argmax(double s, double lo, double hi) const;

  PenaltyKind kind_ = PenaltyKind::Ball;
  double p_ = 2.0;
  double c_ = 0.0;
  double a_ = 0.0;
  double exponent_ = 2.0;
  double scale_ = 1.0;
  std::vector<double> knots_;
  std::vector<double> values_;
};

}  // namespace robsem
