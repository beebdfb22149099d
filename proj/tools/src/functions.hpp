// SPDX-License-Identifier: Apache-2.0
//
// Builtin initial data for experiments.
#pragma once

#include <functional>
#include <string>

#include "robsem/grid.hpp"

namespace robsem::cli {

struct FunctionSpec {
  std::string type;          ///< constant | linear-clamped | bump | sine-bump | abs-neg | custom
  double value = 1.0;        ///< constant
  double bound = 5.0;        ///< clamp level K for linear-clamped and abs-neg
  double radius = 2.0;       ///< support radius R for bump and sine-bump
  std::string path;          ///< custom: CSV with columns x,value
  Extension extension = Extension::Constant;
  double slope_cap = 0.0;
};

struct Builtin {
  std::function<double(double)> f;
  std::function<double(double)> df;  ///< empty for custom data
};

/// exp(1 - 1/(1 - (x/R)^2)) on |x| < R, 0 elsewhere.
double bump(double x, double R);
double bump_derivative(double x, double R);

Builtin make_builtin(const FunctionSpec& spec);

/// Samples the spec on the grid. Custom data is linearly interpolated onto
/// the grid nodes.
GridFunction sample_function(const FunctionSpec& spec, double x_min, double x_max,
                             std::size_t n_nodes);

}  // namespace robsem::cli
