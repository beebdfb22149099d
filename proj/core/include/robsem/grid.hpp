// SPDX-License-Identifier: Apache-2.0
//
// Grid-sampled functions and time partitions.

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace robsem {

/// How a GridFunction continues outside [x_min, x_max].
enum class Extension {
  Constant,    ///< flat continuation with the edge value
  ClampSlope,  ///< linear continuation with the edge slope clamped to +-slope_cap
};

/// A function sampled on a uniform grid, evaluated off-grid by linear
/// interpolation and by its declared extension beyond the grid.
class GridFunction {
 public:
  GridFunction(double x_min, double x_max, std::vector<double> values,
               Extension extension = Extension::Constant, double slope_cap = 0.0);

  static GridFunction sample(double x_min, double x_max, std::size_t n_nodes,
                             const std::function<double(double)>& f,
                             Extension extension = Extension::Constant, double slope_cap = 0.0);

  double operator()(double x) const;

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  double dx() const { return dx_; }
  std::size_t size() const { return values_.size(); }
  double node(std::size_t k) const {
    return k + 1 == values_.size() ? x_max_ : x_min_ + dx_ * static_cast<double>(k);
  }
  std::span<const double> values() const { return values_; }
  std::vector<double> nodes() const;
  Extension extension() const { return extension_; }
  double slope_cap() const { return slope_cap_; }

  /// Slope of segment [x_k, x_{k+1}].
  double segment_slope(std::size_t k) const { return (values_[k + 1] - values_[k]) / dx_; }
  /// Slopes of the two extension rays.
  double left_slope() const { return left_slope_; }
  double right_slope() const { return right_slope_; }

  /// Lipschitz constant of the interpolant including its extension.
  double lipschitz() const;
  double sup_norm() const;
  bool in_range(double x) const { return x >= x_min_ && x <= x_max_; }

  /// Same grid and extension policy, new node values.
  GridFunction with_values(std::vector<double> values, double slope_cap) const;

 private:
  double x_min_;
  double x_max_;
  double dx_;
  std::vector<double> values_;
  Extension extension_;
  double slope_cap_;
  double left_slope_ = 0.0;
  double right_slope_ = 0.0;
};

/// Sup-norm of the nodewise difference on nodes with x in [lo, hi].
double sup_distance(const GridFunction& a, const GridFunction& b, double lo, double hi);

/// A grid function together with its declared Lipschitz constant and sup
/// bound. Both are estimated from the node data unless supplied.
struct TestFunction {
  GridFunction u;
  double lipschitz;
  double sup_bound;

  explicit TestFunction(GridFunction f);
  TestFunction(GridFunction f, double lipschitz, double sup_bound);
};

/// Strictly increasing time grid 0 = t_0 < ... < t_m = t.
class Partition {
 public:
  explicit Partition(std::vector<double> times);

  /// {0, h, 2h, ..., kh, t} with h = 2^-level and k the largest integer with
  /// kh <= t; the composed operator applies the remainder t - kh first.
  static Partition dyadic(double t, int level);
  static Partition uniform(double t, int steps);

  const std::vector<double>& times() const { return times_; }
  double horizon() const { return times_.back(); }
  std::size_t steps() const { return times_.size() - 1; }
  /// Increments t_{i+1} - t_i, left to right.
  std::vector<double> increments() const;
  /// True when every point of this partition is also in `finer`.
  bool is_refined_by(const Partition& finer, double tol = 1e-12) const;

 private:
  std::vector<double> times_;
};

}  // namespace robsem
