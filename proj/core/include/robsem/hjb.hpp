// SPDX-License-Identifier: Apache-2.0
//
// Explicit finite-difference solver for
//   u_t = sigma^2/2 u_xx + b(x) u_x + phi*(|u_x|),   u(0) = u0,
// the nonlinear Kolmogorov equation whose viscosity solution is S(t)u0.
// GBM problems are posed in log coordinates, where the coefficients are
// constant.
//
// Discretisation per node k, time level n:
//   diffusion  central second difference;
//   drift      upwind: D+ where b > 0, D- where b < 0;
//   |u_x|      max(D+u, -D-u, 0), monotone for the maximising Hamiltonian.
// The scheme is monotone when
//   dt (sigma^2 / dx^2 + (|b|_max + Lip(phi*)) / dx) <= 1,
// with Lip(phi*) taken on [0, e^{cT} Lip(u0)]. A safety factor of 0.9 is
// applied.
#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "robsem/grid.hpp"
#include "robsem/models.hpp"
#include "robsem/penalty.hpp"

namespace robsem {

struct PdeProblem {
  std::function<double(double)> drift;
  double sigma = 0.0;
  Penalty penalty = Penalty::ball(0.0);
  bool robust = true;  ///< false drops the phi* term
  double x_min = 0.0;
  double x_max = 1.0;
  std::size_t n_nodes = 2;
  double horizon = 0.0;
  double dt = 0.0;  ///< 0 selects the largest stable step
  /// Bound on |u_x| over the run; used for the monotonicity condition.
  double gradient_bound = 0.0;

  /// Coefficients from a reference model (chart coordinates). The gradient
  /// bound is e^{cT} lip0.
  static PdeProblem from_model(const ReferenceModel& model, const Penalty& pen, double x_min,
                               double x_max, std::size_t n_nodes, double horizon, double lip0,
                               double dt = 0.0);

  double dx() const { return (x_max - x_min) / static_cast<double>(n_nodes - 1); }
  double max_abs_drift() const;
  /// Largest dt satisfying the monotonicity condition.
  double stable_dt() const;
};

struct HjbSnapshot {
  double t;
  GridFunction u;
};

struct HjbResult {
  GridFunction u;
  double dt = 0.0;
  std::size_t steps = 0;
  std::vector<HjbSnapshot> snapshots;  ///< includes t = 0 and t = horizon
};

/// Throws NumericError when dt violates the stability condition or a
/// non-finite value appears; InvalidArgument when u0 lives on another grid.
/// snapshot_stride = 0 keeps only the initial and final layers.
HjbResult solve(const PdeProblem& problem, const GridFunction& u0,
                std::size_t snapshot_stride = 0);

struct ResidualReport {
  double max_residual = 0.0;
  std::size_t checked = 0;
  std::size_t kinks = 0;
  std::vector<double> kink_locations;
};

/// |u_t - (sigma^2/2 u_xx + b u_x + phi*(|u_x|))| at interior nodes between
/// consecutive snapshots, skipping nodes whose one-sided slopes differ by
/// more than 10 dx (reported as kinks).
ResidualReport viscosity_residual(const PdeProblem& problem,
                                  const std::vector<HjbSnapshot>& path);

}  // namespace robsem
