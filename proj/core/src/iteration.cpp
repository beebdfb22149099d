// SPDX-License-Identifier: Apache-2.0
#include "robsem/iteration.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "robsem/error.hpp"
#include "robsem/onestep.hpp"
#include "robsem/parallel.hpp"

namespace robsem {
namespace {

void check_levels(int n_levels) {
  if (n_levels < 0 || n_levels > kMaxLevels) {
    throw InvalidArgument("n_levels must lie in [0, " + std::to_string(kMaxLevels) + "]");
  }
}

double sup_gap(const GridFunction& upper, const GridFunction& lower) {
  const auto a = upper.values();
  const auto b = lower.values();
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, a[k] - b[k]);
  return worst;
}

}  // namespace

CompositionResult compose(const ReferenceModel& model, const Penalty& pen, const Partition& pi,
                          const TestFunction& u, StepKind stepper, const IterationOptions& opts) {
  const std::vector<double> increments = pi.increments();
  TestFunction current = u;
  CompositionResult out{u.u, {}, 0, 0};
  const std::size_t n = u.u.size();
  const double c = model.growth();

  for (auto it = increments.rbegin(); it != increments.rend(); ++it) {
    const double h = *it;
    const OneStep step(model, pen, h, opts.n_atoms, current);
    std::vector<double> values(n);
    std::atomic<std::size_t> boundary{0};
    std::atomic<std::size_t> clamps{0};
    parallel_for(n, [&](std::size_t k) {
      const double x = current.u.node(k);
      switch (stepper) {
        case StepKind::I: values[k] = step.worst_case(x); break;
        case StepKind::E: values[k] = step.drift_shift(x, opts.generalised_drift); break;
        case StepKind::IMart: values[k] = step.martingale(x); break;
        case StepKind::T: values[k] = step.expectation(x); break;
      }
      if (!std::isfinite(values[k])) throw NumericError("compose: non-finite value");
      if (stepper != StepKind::T && step.touches_boundary(x)) ++boundary;
      if (step.flow_clamped(x)) ++clamps;
    });
    out.boundary_evaluations += boundary;
    out.flow_clamps += clamps;

    GridFunction next = current.u.with_values(std::move(values), current.u.slope_cap());
    const double declared = std::max(std::exp(c * h) * current.lipschitz, next.lipschitz());
    const double sup = next.sup_norm();
    current = TestFunction(std::move(next), declared, sup);
    out.lipschitz.push_back(declared);
  }
  out.u = current.u;
  return out;
}

namespace {

LevelSequence iterate(const ReferenceModel& model, const Penalty& pen, double t,
                      const TestFunction& u, int n_levels, StepKind stepper,
                      const IterationOptions& opts) {
  check_levels(n_levels);
  if (!(t >= 0.0)) throw InvalidArgument("t must be >= 0");
  LevelSequence seq;
  for (int level = 0; level <= n_levels; ++level) {
    const Partition pi = level == 0 || t == 0.0 ? Partition({0.0, t}) : Partition::dyadic(t, level);
    CompositionResult r = compose(model, pen, pi, u, stepper, opts);
    seq.boundary_evaluations += r.boundary_evaluations;
    seq.flow_clamps += r.flow_clamps;
    seq.levels.push_back(std::move(r.u));
  }
  return seq;
}

}  // namespace

LevelSequence dyadic_iterate(const ReferenceModel& model, const Penalty& pen, double t,
                             const TestFunction& u, int n_levels, const IterationOptions& opts) {
  return iterate(model, pen, t, u, n_levels, StepKind::I, opts);
}

LevelSequence nisio_iterate(const ReferenceModel& model, const Penalty& pen, double t,
                            const TestFunction& u, int n_levels, const IterationOptions& opts) {
  return iterate(model, pen, t, u, n_levels, StepKind::E, opts);
}

SEstimate estimate_S(const ReferenceModel& model, const Penalty& pen, double t,
                     const TestFunction& u, int n_levels, bool richardson,
                     const IterationOptions& opts) {
  LevelSequence dyadic = dyadic_iterate(model, pen, t, u, n_levels, opts);
  LevelSequence nisio;
  if (model.identity_flow() || opts.generalised_drift) {
    nisio = nisio_iterate(model, pen, t, u, n_levels, opts);
  }

  std::vector<double> widths;
  for (std::size_t k = 0; k < nisio.levels.size(); ++k) {
    widths.push_back(sup_gap(dyadic.levels[k], nisio.levels[k]));
  }
  std::vector<double> decrements;
  for (std::size_t k = 1; k < dyadic.levels.size(); ++k) {
    decrements.push_back(sup_gap(dyadic.levels[k - 1], dyadic.levels[k]));
  }

  GridFunction estimate = dyadic.levels.back();
  if (richardson && dyadic.levels.size() >= 2) {
    const auto fine = dyadic.levels.back().values();
    const auto coarse = dyadic.levels[dyadic.levels.size() - 2].values();
    std::vector<double> values(fine.size());
    for (std::size_t k = 0; k < fine.size(); ++k) values[k] = 2.0 * fine[k] - coarse[k];
    estimate = estimate.with_values(std::move(values), estimate.slope_cap());
  }
  return {std::move(estimate), std::move(dyadic), std::move(nisio), std::move(widths),
          std::move(decrements)};
}

}  // namespace robsem
