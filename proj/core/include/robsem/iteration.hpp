// SPDX-License-Identifier: Apache-2.0
//
// Compositions of one-step operators over time partitions:
//   I(pi)u = I(t_1 - t_0) ... I(t_m - t_{m-1}) u,
// the dyadic scheme I^n(t)u (nonincreasing in n, infimum S(t)u) and the
// Nisio scheme E(pi_n)u over dyadic partitions (nondecreasing in n).
#pragma once

#include <cstddef>
#include <vector>

#include "robsem/grid.hpp"
#include "robsem/models.hpp"
#include "robsem/penalty.hpp"

namespace robsem {

enum class StepKind { I, E, IMart, T };

struct IterationOptions {
  int n_atoms = 64;
  /// E-steps on non-identity flows use psi_t(x) in place of x.
  bool generalised_drift = false;
};

struct CompositionResult {
  GridFunction u;
  /// Declared Lipschitz constant after each step (right to left).
  std::vector<double> lipschitz;
  /// Node evaluations whose reachable window left the grid.
  std::size_t boundary_evaluations = 0;
  /// Node evaluations whose flow hit the working-interval clamp.
  std::size_t flow_clamps = 0;
};

/// Applies the stepper over the increments of pi, last increment first,
/// re-sampling onto u's grid after each step.
CompositionResult compose(const ReferenceModel& model, const Penalty& pen, const Partition& pi,
                          const TestFunction& u, StepKind stepper,
                          const IterationOptions& opts = {});

constexpr int kMaxLevels = 20;

struct LevelSequence {
  std::vector<GridFunction> levels;
  std::size_t boundary_evaluations = 0;
  std::size_t flow_clamps = 0;
};

/// [I^0(t)u, ..., I^n(t)u].
LevelSequence dyadic_iterate(const ReferenceModel& model, const Penalty& pen, double t,
                             const TestFunction& u, int n_levels,
                             const IterationOptions& opts = {});

/// [E(pi_0)u, ..., E(pi_n)u] over dyadic partitions.
LevelSequence nisio_iterate(const ReferenceModel& model, const Penalty& pen, double t,
                            const TestFunction& u, int n_levels,
                            const IterationOptions& opts = {});

struct SEstimate {
  GridFunction estimate;
  LevelSequence dyadic;
  LevelSequence nisio;  ///< empty when the drift scheme does not apply
  /// sup over nodes of (I^k - E(pi_k)), per level.
  std::vector<double> bracket_widths;
  /// sup over nodes of (I^{k-1} - I^k), for k >= 1.
  std::vector<double> decrements;
};

/// Deepest dyadic level, or 2 I^n - I^{n-1} when `richardson` is set.
SEstimate estimate_S(const ReferenceModel& model, const Penalty& pen, double t,
                     const TestFunction& u, int n_levels, bool richardson = false,
                     const IterationOptions& opts = {});

}  // namespace robsem
