// SPDX-License-Identifier: Apache-2.0
#include "robsem/grid.hpp"

#include <algorithm>
#include <cmath>

#include "robsem/error.hpp"

namespace robsem {

GridFunction::GridFunction(double x_min, double x_max, std::vector<double> values,
                           Extension extension, double slope_cap)
    : x_min_(x_min),
      x_max_(x_max),
      dx_(0.0),
      values_(std::move(values)),
      extension_(extension),
      slope_cap_(slope_cap) {
  if (!(x_min_ < x_max_)) throw InvalidArgument("GridFunction: x_min must be < x_max");
  if (values_.size() < 2) throw InvalidArgument("GridFunction: need at least 2 nodes");
  for (double v : values_) {
    if (!std::isfinite(v)) throw InvalidArgument("GridFunction: non-finite node value");
  }
  if (!(slope_cap_ >= 0.0)) throw InvalidArgument("GridFunction: slope cap must be >= 0");
  dx_ = (x_max_ - x_min_) / static_cast<double>(values_.size() - 1);
  if (extension_ == Extension::ClampSlope) {
    left_slope_ = std::clamp(segment_slope(0), -slope_cap_, slope_cap_);
    right_slope_ = std::clamp(segment_slope(values_.size() - 2), -slope_cap_, slope_cap_);
  }
}

GridFunction GridFunction::sample(double x_min, double x_max, std::size_t n_nodes,
                                  const std::function<double(double)>& f, Extension extension,
                                  double slope_cap) {
  if (n_nodes < 2) throw InvalidArgument("GridFunction: need at least 2 nodes");
  std::vector<double> values(n_nodes);
  const double dx = (x_max - x_min) / static_cast<double>(n_nodes - 1);
  for (std::size_t k = 0; k < n_nodes; ++k) values[k] = f(x_min + dx * static_cast<double>(k));
  return GridFunction(x_min, x_max, std::move(values), extension, slope_cap);
}

std::vector<double> GridFunction::nodes() const {
  std::vector<double> out(values_.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = node(k);
  return out;
}

double GridFunction::operator()(double x) const {
  if (x <= x_min_) return values_.front() + left_slope_ * (x - x_min_);
  if (x >= x_max_) return values_.back() + right_slope_ * (x - x_max_);
  const double s = (x - x_min_) / dx_;
  auto k = static_cast<std::size_t>(s);
  if (k + 1 >= values_.size()) k = values_.size() - 2;
  const double frac = s - static_cast<double>(k);
  return values_[k] + frac * (values_[k + 1] - values_[k]);
}

double GridFunction::lipschitz() const {
  double L = std::max(std::abs(left_slope_), std::abs(right_slope_));
  for (std::size_t k = 0; k + 1 < values_.size(); ++k) L = std::max(L, std::abs(segment_slope(k)));
  return L;
}

double GridFunction::sup_norm() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

GridFunction GridFunction::with_values(std::vector<double> values, double slope_cap) const {
  if (values.size() != values_.size()) throw InvalidArgument("GridFunction: size mismatch");
  return GridFunction(x_min_, x_max_, std::move(values), extension_, slope_cap);
}

double sup_distance(const GridFunction& a, const GridFunction& b, double lo, double hi) {
  if (a.size() != b.size()) throw InvalidArgument("sup_distance: grids differ");
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double x = a.node(k);
    if (x < lo || x > hi) continue;
    m = std::max(m, std::abs(a.values()[k] - b.values()[k]));
  }
  return m;
}

TestFunction::TestFunction(GridFunction f)
    : u(std::move(f)), lipschitz(u.lipschitz()), sup_bound(u.sup_norm()) {}

TestFunction::TestFunction(GridFunction f, double L, double C)
    : u(std::move(f)), lipschitz(L), sup_bound(C) {
  if (!(lipschitz >= 0.0) || !(sup_bound >= 0.0)) {
    throw InvalidArgument("TestFunction: L and C must be >= 0");
  }
  const double tol = 1e-12;
  for (std::size_t k = 0; k + 1 < u.size(); ++k) {
    if (std::abs(u.values()[k + 1] - u.values()[k]) > lipschitz * u.dx() + tol) {
      throw InvalidArgument("TestFunction: declared Lipschitz constant violated on the grid");
    }
  }
  if (u.sup_norm() > sup_bound + tol) {
    throw InvalidArgument("TestFunction: declared sup bound violated on the grid");
  }
}

Partition::Partition(std::vector<double> times) : times_(std::move(times)) {
  if (times_.size() < 2) throw InvalidArgument("Partition: need at least two points");
  if (times_.front() != 0.0) throw InvalidArgument("Partition: must start at 0");
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i] > times_[i - 1]) || !std::isfinite(times_[i])) {
      throw InvalidArgument("Partition: times must be strictly increasing");
    }
  }
}

Partition Partition::dyadic(double t, int level) {
  if (!(t > 0.0)) throw InvalidArgument("Partition::dyadic: t must be > 0");
  if (level < 0) throw InvalidArgument("Partition::dyadic: level must be >= 0");
  const double h = std::ldexp(1.0, -level);
  const auto k = static_cast<long long>(std::floor(t / h));
  std::vector<double> times;
  times.reserve(static_cast<std::size_t>(k) + 2);
  for (long long i = 0; i <= k; ++i) times.push_back(h * static_cast<double>(i));
  const double rest = t - h * static_cast<double>(k);
  if (k == 0) {
    times = {0.0, t};
  } else if (rest > 1e-14 * std::max(1.0, t)) {
    times.push_back(t);
  } else {
    times.back() = t;
  }
  return Partition(std::move(times));
}

Partition Partition::uniform(double t, int steps) {
  if (!(t > 0.0) || steps < 1) throw InvalidArgument("Partition::uniform: need t > 0, steps >= 1");
  std::vector<double> times(static_cast<std::size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i) times[static_cast<std::size_t>(i)] = t * i / steps;
  times.back() = t;
  return Partition(std::move(times));
}

std::vector<double> Partition::increments() const {
  std::vector<double> out(times_.size() - 1);
  for (std::size_t i = 0; i + 1 < times_.size(); ++i) out[i] = times_[i + 1] - times_[i];
  return out;
}

bool Partition::is_refined_by(const Partition& finer, double tol) const {
  for (double t : times_) {
    const bool found = std::any_of(finer.times_.begin(), finer.times_.end(),
                                   [&](double s) { return std::abs(s - t) <= tol; });
    if (!found) return false;
  }
  return true;
}

}  // namespace robsem
