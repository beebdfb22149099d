// SPDX-License-Identifier: Apache-2.0
//
// One-step operators evaluated pointwise:
//
//   T(t)u(x)      = int u(psi_t(x) + y) mu_t(dy)
//   I(t)u(x)      = sup_nu  int u(psi_t(x) + z) nu(dz) - phi_t(W_p(mu_t, nu))
//   E(t)u(x)      = sup_theta int u(x + y + t theta) mu_t(dy) - t phi(exp(-ct)|theta|)
//   I_mart(t)u(x) = I(t)u(x) restricted to nu with int z nu(dz) = 0
//
// u is a grid function evaluated through its piecewise linear interpolant
// (and extension), so the perturbations nu range over all finitely supported
// measures on the line, not only over grid nodes.
//
// The worst case is computed from the Lagrangian dual
//   I(t)u(x) = inf_{lambda > 0} chi*(lambda)
//              + sum_i w_i max_z (u(z) - lambda |z - psi_t(x) - y_i|^p),
// with chi*(lambda) = sup_{B <= B_cap} (lambda B - phi_t(B^(1/p))). Both
// terms are convex in lambda. The primal form
//   sup_{r <= r_cap} ball_sup(mu_t, p, r, u) - phi_t(r)
// is kept as an independent route.

#pragma once

#include <cstddef>
#include <vector>

#include "robsem/grid.hpp"
#include "robsem/measures.hpp"
#include "robsem/models.hpp"
#include "robsem/penalty.hpp"

namespace robsem {

/// Best response of a single atom against a (tilted, penalised) payoff.
struct Response {
  double z = 0.0;        ///< destination
  double payoff = 0.0;   ///< g(z)
  double cost = 0.0;     ///< |z - y|^p
};

/// Payoff known on a finite candidate set (the grid-restricted LP).
/// Atoms are first snapped to their nearest candidate, so a zero radius
/// reproduces the projected expectation.
class NodePayoff {
 public:
  NodePayoff(std::vector<double> nodes, std::vector<double> values, double p);

  /// argmax_j g_j - lambda |z_j - y|^p - tilt (z_j - y). For lambda = 0,
  /// ties are broken by the smaller cost. Remaining ties: lowest index.
  Response respond(double y, double lambda, double tilt = 0.0) const;
  double snap(double y) const;
  std::size_t size() const { return nodes_.size(); }

 private:
  std::vector<double> nodes_;
  std::vector<double> values_;
  double p_;
};

/// Payoff given by the interpolant of a grid function.
class InterpolatedPayoff {
 public:
  InterpolatedPayoff(const GridFunction& u, double p);

  /// argmax_z u(z) - lambda |z - y|^p - tilt (z - y), lambda > 0.
  Response respond(double y, double lambda, double tilt = 0.0) const;
  double snap(double y) const { return y; }
  double value(double z) const { return u_(z); }
  double lipschitz() const { return lipschitz_; }

 private:
  const GridFunction& u_;
  double p_;
  double lipschitz_;
  double upper_;  ///< sup of u, or +inf when an extension ray rises
  std::vector<double> slopes_;
};

struct TransportMove {
  std::size_t atom;
  double from;
  double to;
  double mass;
};

struct BallSupResult {
  double value = 0.0;
  double budget_used = 0.0;  ///< sum of mass * |to - from|^p
  std::vector<TransportMove> plan;
};

/// max sum_ij pi_ij g(z_j) subject to sum_j pi_ij = w_i and
/// sum_ij pi_ij |z_j - y_i|^p <= r^p, by parametric Lagrangian search.
BallSupResult ball_sup(const DiscreteMeasure& mu, double p, double r, const NodePayoff& g);
BallSupResult ball_sup(const DiscreteMeasure& mu, double p, double r, const InterpolatedPayoff& g);

/// The one-step operators for a fixed model, penalty, step length and
/// payoff. The penalty's growth constant is replaced by the model's.
class OneStep {
 public:
  OneStep(const ReferenceModel& model, const Penalty& pen, double t, int n_atoms,
          const TestFunction& u);

  double expectation(double x) const;
  double worst_case(double x) const;
  double worst_case_primal(double x) const;
  /// Requires an identity flow unless `generalised` is set, in which case
  /// psi_t(x) replaces x.
  double drift_shift(double x, bool generalised = false) const;
  /// Requires centred noise.
  double martingale(double x) const;

  double radius_cap() const { return r_cap_; }
  double step() const { return t_; }
  const DiscreteMeasure& noise() const { return mu_; }
  /// True when the reachable window around x leaves the grid.
  bool touches_boundary(double x) const;
  bool flow_clamped(double x) const;

 private:
  struct DualValue {
    double value;
    double slope;         ///< d/dlambda
    double displacement;  ///< sum_i w_i (z_i - xi_i), minus d/dtilt
    double lambda = 0.0;
  };
  DualValue dual_objective(double center, double lambda, double tilt) const;
  /// inf over lambda; `displacement` is taken at the best lambda found.
  /// A positive `start` replaces the default first bracket point.
  DualValue minimise_lambda(double center, double tilt, double start = 0.0) const;

  const ReferenceModel& model_;
  Penalty pen_;
  double t_;
  DiscreteMeasure mu_;
  const TestFunction& u_;
  InterpolatedPayoff payoff_;
  bool constant_;  ///< u is constant on the whole line; every operator returns it
  double r_cap_;
  double budget_cap_;
};

double apply_T(const ReferenceModel& model, double t, const TestFunction& u, double x, int n_atoms);
double apply_I(const ReferenceModel& model, const Penalty& pen, double t, const TestFunction& u,
               double x, int n_atoms);
double apply_E(const ReferenceModel& model, const Penalty& pen, double t, const TestFunction& u,
               double x, int n_atoms, bool generalised = false);
double apply_I_mart(const ReferenceModel& model, const Penalty& pen, double t,
                    const TestFunction& u, double x, int n_atoms);

}  // namespace robsem
