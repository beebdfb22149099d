// SPDX-License-Identifier: Apache-2.0
#include "robsem/hjb.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "robsem/error.hpp"

namespace robsem {
namespace {

constexpr double kSafety = 0.9;

void validate(const PdeProblem& p) {
  if (!p.drift) throw InvalidArgument("hjb: drift is not set");
  if (!(p.sigma >= 0.0)) throw InvalidArgument("hjb: sigma must be >= 0");
  if (!(p.x_min < p.x_max)) throw InvalidArgument("hjb: x_min must be < x_max");
  if (p.n_nodes < 3) throw InvalidArgument("hjb: need at least 3 nodes");
  if (!(p.horizon >= 0.0)) throw InvalidArgument("hjb: horizon must be >= 0");
  if (!(p.dt >= 0.0)) throw InvalidArgument("hjb: dt must be >= 0");
  if (!(p.gradient_bound >= 0.0)) throw InvalidArgument("hjb: gradient bound must be >= 0");
}

}  // namespace

PdeProblem PdeProblem::from_model(const ReferenceModel& model, const Penalty& pen, double x_min,
                                  double x_max, std::size_t n_nodes, double horizon, double lip0,
                                  double dt) {
  PdeProblem p;
  p.drift = [model](double z) { return model.drift(z); };
  p.sigma = model.volatility();
  p.penalty = pen.with_growth(model.growth());
  p.x_min = x_min;
  p.x_max = x_max;
  p.n_nodes = n_nodes;
  p.horizon = horizon;
  p.dt = dt;
  p.gradient_bound = std::exp(model.growth() * horizon) * lip0;
  return p;
}

double PdeProblem::max_abs_drift() const {
  double m = 0.0;
  const double h = dx();
  for (std::size_t k = 0; k < n_nodes; ++k) {
    m = std::max(m, std::abs(drift(x_min + h * static_cast<double>(k))));
  }
  return m;
}

double PdeProblem::stable_dt() const {
  validate(*this);
  const double h = dx();
  const double slope = robust ? penalty.conjugate_slope(gradient_bound) : 0.0;
  const double rate = sigma * sigma / (h * h) + (max_abs_drift() + slope) / h;
  if (!std::isfinite(rate)) throw NumericError("hjb: unbounded coefficients");
  return rate == 0.0 ? horizon : kSafety / rate;
}

HjbResult solve(const PdeProblem& problem, const GridFunction& u0, std::size_t snapshot_stride) {
  validate(problem);
  const std::size_t n = problem.n_nodes;
  if (u0.size() != n || u0.x_min() != problem.x_min || u0.x_max() != problem.x_max) {
    throw InvalidArgument("hjb: initial datum is not on the problem grid");
  }
  const double h = problem.dx();
  const double limit = problem.stable_dt();
  double dt = problem.dt;
  std::size_t steps = 0;
  if (problem.horizon > 0.0) {
    if (dt == 0.0) dt = limit;
    if (dt > limit * (1.0 + 1e-12)) {
      std::ostringstream msg;
      msg << "hjb: dt = " << dt << " violates the stability limit " << limit;
      throw NumericError(msg.str());
    }
    steps = static_cast<std::size_t>(std::ceil(problem.horizon / dt - 1e-12));
    dt = problem.horizon / static_cast<double>(steps);
  }

  std::vector<double> drift(n);
  for (std::size_t k = 0; k < n; ++k) drift[k] = problem.drift(u0.node(k));
  const double diff = 0.5 * problem.sigma * problem.sigma / (h * h);

  HjbResult out{u0, dt, steps, {}};
  out.snapshots.push_back({0.0, u0});
  GridFunction current = u0;
  std::vector<double> next(n);
  for (std::size_t s = 0; s < steps; ++s) {
    const auto u = current.values();
    const double ghost_lo = current(problem.x_min - h);
    const double ghost_hi = current(problem.x_max + h);
    for (std::size_t k = 0; k < n; ++k) {
      const double um = k == 0 ? ghost_lo : u[k - 1];
      const double up = k + 1 == n ? ghost_hi : u[k + 1];
      const double dplus = (up - u[k]) / h;
      const double dminus = (u[k] - um) / h;
      double rhs = diff * (up - 2.0 * u[k] + um);
      rhs += drift[k] > 0.0 ? drift[k] * dplus : drift[k] * dminus;
      if (problem.robust) {
        rhs += problem.penalty.conjugate(std::max({dplus, -dminus, 0.0}));
      }
      next[k] = u[k] + dt * rhs;
      if (!std::isfinite(next[k])) {
        std::ostringstream msg;
        msg << "hjb: non-finite value at x = " << current.node(k) << ", t = " << (s + 1) * dt;
        throw NumericError(msg.str());
      }
    }
    current = current.with_values(next, current.slope_cap());
    if (snapshot_stride > 0 && (s + 1) % snapshot_stride == 0 && s + 1 < steps) {
      out.snapshots.push_back({static_cast<double>(s + 1) * dt, current});
    }
  }
  if (steps > 0) out.snapshots.push_back({problem.horizon, current});
  out.u = std::move(current);
  return out;
}

ResidualReport viscosity_residual(const PdeProblem& problem,
                                  const std::vector<HjbSnapshot>& path) {
  ResidualReport report;
  const double kink_threshold = 10.0 * problem.dx();
  for (std::size_t s = 0; s + 1 < path.size(); ++s) {
    const GridFunction& a = path[s].u;
    const GridFunction& b = path[s + 1].u;
    const double dt = path[s + 1].t - path[s].t;
    if (!(dt > 0.0)) continue;
    const double h = a.dx();
    const auto va = a.values();
    const auto vb = b.values();
    for (std::size_t k = 1; k + 1 < va.size(); ++k) {
      // Evaluate the spatial operator on the time-averaged layer.
      const auto avg = [&](std::size_t j) { return 0.5 * (va[j] + vb[j]); };
      const double dplus = (avg(k + 1) - avg(k)) / h;
      const double dminus = (avg(k) - avg(k - 1)) / h;
      if (std::abs(dplus - dminus) > kink_threshold) {
        if (s == 0) {
          ++report.kinks;
          report.kink_locations.push_back(a.node(k));
        }
        continue;
      }
      const double ux = 0.5 * (dplus + dminus);
      const double uxx = (dplus - dminus) / h;
      double rhs = 0.5 * problem.sigma * problem.sigma * uxx + problem.drift(a.node(k)) * ux;
      if (problem.robust) rhs += problem.penalty.conjugate(std::abs(ux));
      const double ut = (vb[k] - va[k]) / dt;
      report.max_residual = std::max(report.max_residual, std::abs(ut - rhs));
      ++report.checked;
    }
  }
  return report;
}

}  // namespace robsem
