// SPDX-License-Identifier: Apache-2.0
//
// Sensitivity of the robust semigroup with respect to the uncertainty:
//   S(t)u - T(t)u <= I(t)u - T(t)u <= t phi*(e^{ct} Lip(u)),
// and the first-order expansions
//   (I(h)u - T(h)u)/h      -> phi*(|u'|),
//   (I_mart(h)u - T(h)u)/h -> 0             as h -> 0.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "robsem/grid.hpp"
#include "robsem/models.hpp"
#include "robsem/penalty.hpp"

namespace robsem {

struct SensitivityOptions {
  int n_atoms = 64;
  int s_levels = 6;        ///< dyadic depth for S; 0 skips S
  int mc_samples = 0;      ///< Monte-Carlo illustration of T; 0 skips it
  double s_tolerance = 1e-3;  ///< slack for S - T against the bound; S is a composed estimate
  std::uint64_t seed = 0;
};

struct SensitivityReport {
  std::string model;
  std::string penalty;
  double t = 0.0;
  std::uint64_t seed = 0;

  std::vector<double> x;
  std::vector<double> T;
  std::vector<double> I;
  std::vector<double> S;       ///< empty when skipped
  std::vector<double> bound;   ///< t phi*(e^{ct} L)
  std::vector<double> T_mc;    ///< empty when skipped
  double max_gap = 0.0;        ///< max of I - T
  double min_slack = 0.0;      ///< min of bound - (I - T)
};

/// Evaluates at every grid node. Throws InvariantViolation when
/// I - T > bound + 1e-8 or S - T > bound + 1e-8 anywhere.
SensitivityReport global_bound(const ReferenceModel& model, const Penalty& pen, double t,
                               const TestFunction& u, const SensitivityOptions& opts = {});

struct ExpansionRow {
  double h = 0.0;
  double residual = 0.0;         ///< max over samples
  std::vector<double> quotient;  ///< per sample
};

struct ExpansionReport {
  std::vector<double> x;
  std::vector<double> first_order;  ///< phi*(|u'(x)|); zero for the martingale case
  std::vector<ExpansionRow> rows;     ///< I-based (or I_mart-based) quotients
  std::vector<ExpansionRow> s_rows;   ///< S-based quotients; empty when skipped
  /// Residual strictly decreasing over the last three h values.
  bool converging = false;
};

/// h_sequence defaults to {2^-4, ..., 2^-10}. `derivative` is u' in chart
/// coordinates; when empty the interpolant's central difference is used.
ExpansionReport first_order_expansion(const ReferenceModel& model, const Penalty& pen,
                                      const TestFunction& u, const std::vector<double>& x_samples,
                                      std::vector<double> h_sequence = {},
                                      const std::function<double(double)>& derivative = {},
                                      const SensitivityOptions& opts = {});

/// Requires centred reference noise.
ExpansionReport martingale_expansion(const ReferenceModel& model, const Penalty& pen,
                                     const TestFunction& u, const std::vector<double>& x_samples,
                                     std::vector<double> h_sequence = {},
                                     const SensitivityOptions& opts = {});

/// sup over nodes in [lo, hi] of |I_mart(pi)u - T(t)u| for the uniform
/// partition of [0, t] into `steps` pieces.
double martingale_collapse(const ReferenceModel& model, const Penalty& pen, double t, int steps,
                           const TestFunction& u, double lo, double hi,
                           const SensitivityOptions& opts = {});

std::vector<double> default_h_sequence();

}  // namespace robsem
