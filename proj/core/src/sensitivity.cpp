// SPDX-License-Identifier: Apache-2.0
#include "robsem/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "robsem/error.hpp"
#include "robsem/iteration.hpp"
#include "robsem/onestep.hpp"
#include "robsem/parallel.hpp"

namespace robsem {
namespace {

constexpr double kBoundSlack = 1e-8;

std::string describe(const Penalty& pen) {
  std::ostringstream s;
  switch (pen.kind()) {
    case PenaltyKind::Ball: s << "ball(" << pen.ball_radius() << ")"; break;
    case PenaltyKind::Power: s << "power(" << pen.exponent() << "," << pen.scale() << ")"; break;
    case PenaltyKind::Table: s << "table(" << pen.knots().size() << " knots)"; break;
  }
  return s.str();
}

// Residuals below this are round-off amplified by 1/h; they count as converged.
constexpr double kRoundoffResidual = 1e-9;

bool strictly_decreasing_tail(const std::vector<ExpansionRow>& rows) {
  if (rows.size() < 3) return false;
  const std::size_t n = rows.size();
  const auto drops = [](double before, double after) {
    return after < before || (before <= kRoundoffResidual && after <= kRoundoffResidual);
  };
  return drops(rows[n - 3].residual, rows[n - 2].residual) &&
         drops(rows[n - 2].residual, rows[n - 1].residual);
}

std::function<double(double)> derivative_or_default(const TestFunction& u,
                                                    const std::function<double(double)>& d) {
  if (d) return d;
  const double h = u.u.dx();
  return [&u, h](double x) { return (u.u(x + h) - u.u(x - h)) / (2.0 * h); };
}

}  // namespace

std::vector<double> default_h_sequence() {
  std::vector<double> hs;
  for (int k = 4; k <= 10; ++k) hs.push_back(std::ldexp(1.0, -k));
  return hs;
}

SensitivityReport global_bound(const ReferenceModel& model, const Penalty& pen, double t,
                               const TestFunction& u, const SensitivityOptions& opts) {
  if (!(t >= 0.0)) throw InvalidArgument("global_bound: t must be >= 0");
  const Penalty p = pen.with_growth(model.growth());
  SensitivityReport r;
  r.model = model.name();
  r.penalty = describe(p);
  r.t = t;
  r.seed = opts.seed;

  const std::size_t n = u.u.size();
  r.x = u.u.nodes();
  r.T.resize(n);
  r.I.resize(n);
  const OneStep step(model, p, t, opts.n_atoms, u);
  parallel_for(n, [&](std::size_t k) {
    r.T[k] = step.expectation(r.x[k]);
    r.I[k] = step.worst_case(r.x[k]);
  });
  const double bound = t * p.conjugate(std::exp(model.growth() * t) * u.lipschitz);
  r.bound.assign(n, bound);

  if (opts.s_levels > 0) {
    IterationOptions io;
    io.n_atoms = opts.n_atoms;
    const LevelSequence seq = dyadic_iterate(model, p, t, u, opts.s_levels, io);
    const auto s = seq.levels.back().values();
    r.S.assign(s.begin(), s.end());
  }
  if (opts.mc_samples > 0) {
    // One sample of the noise, reused at every x.
    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> normal(model.noise_mean(t),
                                            std::sqrt(model.noise_variance(t)));
    std::vector<double> ys(static_cast<std::size_t>(opts.mc_samples));
    for (double& y : ys) y = normal(rng);
    r.T_mc.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double center = model.flow(t, r.x[k]);
      double acc = 0.0;
      for (double y : ys) acc += u.u(center + y);
      r.T_mc[k] = acc / static_cast<double>(ys.size());
    }
  }

  r.max_gap = -Penalty::kInfinity;
  r.min_slack = Penalty::kInfinity;
  for (std::size_t k = 0; k < n; ++k) {
    const double gap = r.I[k] - r.T[k];
    r.max_gap = std::max(r.max_gap, gap);
    r.min_slack = std::min(r.min_slack, bound - gap);
    if (gap > bound + kBoundSlack) {
      std::ostringstream msg;
      msg << "global_bound: I - T = " << gap << " exceeds bound " << bound << " at x = " << r.x[k];
      throw InvariantViolation(msg.str());
    }
    if (!r.S.empty() && r.S[k] - r.T[k] > bound + std::max(kBoundSlack, opts.s_tolerance)) {
      std::ostringstream msg;
      msg << "global_bound: S - T = " << r.S[k] - r.T[k] << " exceeds bound " << bound
          << " at x = " << r.x[k];
      throw InvariantViolation(msg.str());
    }
  }
  return r;
}

ExpansionReport first_order_expansion(const ReferenceModel& model, const Penalty& pen,
                                      const TestFunction& u, const std::vector<double>& x_samples,
                                      std::vector<double> h_sequence,
                                      const std::function<double(double)>& derivative,
                                      const SensitivityOptions& opts) {
  if (h_sequence.empty()) h_sequence = default_h_sequence();
  const Penalty p = pen.with_growth(model.growth());
  const auto du = derivative_or_default(u, derivative);
  ExpansionReport rep;
  rep.x = x_samples;
  for (double x : x_samples) rep.first_order.push_back(p.conjugate(std::abs(du(x))));

  const std::size_t m = x_samples.size();
  for (double h : h_sequence) {
    if (!(h > 0.0)) throw InvalidArgument("first_order_expansion: h must be > 0");
    const OneStep step(model, p, h, opts.n_atoms, u);
    ExpansionRow row{h, 0.0, std::vector<double>(m)};
    std::vector<double> T(m);
    parallel_for(m, [&](std::size_t i) {
      T[i] = step.expectation(x_samples[i]);
      row.quotient[i] = (step.worst_case(x_samples[i]) - T[i]) / h;
    });
    for (std::size_t i = 0; i < m; ++i) {
      row.residual = std::max(row.residual, std::abs(row.quotient[i] - rep.first_order[i]));
    }
    rep.rows.push_back(std::move(row));

    if (opts.s_levels > 0) {
      IterationOptions io;
      io.n_atoms = opts.n_atoms;
      const Partition pi = Partition::uniform(h, 1 << opts.s_levels);
      const GridFunction s = compose(model, p, pi, u, StepKind::I, io).u;
      ExpansionRow srow{h, 0.0, std::vector<double>(m)};
      for (std::size_t i = 0; i < m; ++i) {
        srow.quotient[i] = (s(x_samples[i]) - T[i]) / h;
        srow.residual = std::max(srow.residual, std::abs(srow.quotient[i] - rep.first_order[i]));
      }
      rep.s_rows.push_back(std::move(srow));
    }
  }
  rep.converging = strictly_decreasing_tail(rep.rows);
  return rep;
}

ExpansionReport martingale_expansion(const ReferenceModel& model, const Penalty& pen,
                                     const TestFunction& u, const std::vector<double>& x_samples,
                                     std::vector<double> h_sequence,
                                     const SensitivityOptions& opts) {
  if (h_sequence.empty()) h_sequence = default_h_sequence();
  const Penalty p = pen.with_growth(model.growth());
  ExpansionReport rep;
  rep.x = x_samples;
  rep.first_order.assign(x_samples.size(), 0.0);
  const std::size_t m = x_samples.size();
  for (double h : h_sequence) {
    if (!(h > 0.0)) throw InvalidArgument("martingale_expansion: h must be > 0");
    const OneStep step(model, p, h, opts.n_atoms, u);
    ExpansionRow row{h, 0.0, std::vector<double>(m)};
    parallel_for(m, [&](std::size_t i) {
      row.quotient[i] = (step.martingale(x_samples[i]) - step.expectation(x_samples[i])) / h;
    });
    for (double q : row.quotient) row.residual = std::max(row.residual, std::abs(q));
    rep.rows.push_back(std::move(row));
  }
  rep.converging = strictly_decreasing_tail(rep.rows);
  return rep;
}

double martingale_collapse(const ReferenceModel& model, const Penalty& pen, double t, int steps,
                           const TestFunction& u, double lo, double hi,
                           const SensitivityOptions& opts) {
  IterationOptions io;
  io.n_atoms = opts.n_atoms;
  const GridFunction mart =
      compose(model, pen, Partition::uniform(t, steps), u, StepKind::IMart, io).u;
  const GridFunction ref = compose(model, pen, Partition({0.0, t}), u, StepKind::T, io).u;
  return sup_distance(mart, ref, lo, hi);
}

}  // namespace robsem
