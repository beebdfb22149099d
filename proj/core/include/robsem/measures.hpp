// SPDX-License-Identifier: Apache-2.0
//
// Finitely supported probability measures on the real line.
//
// A DiscreteMeasure is the computational stand-in for the reference noise
// laws and for their perturbations. Transport distances between two such
// measures are computed exactly through the quantile (comonotone) coupling,
// which is optimal for every convex cost on the line.

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace robsem {

class DiscreteMeasure {
 public:
  /// Positions closer than this are merged on construction.
  static constexpr double kMergeTolerance = 1e-12;
  /// Allowed deviation of the total mass from one.
  static constexpr double kMassTolerance = 1e-12;

  /// Builds a measure from unsorted atoms and weights. Zero weights are
  /// dropped, atoms are sorted and coincident atoms merged.
  /// Throws InvalidArgument on negative or non-finite input, mismatched
  /// lengths or a total mass that differs from one.
  DiscreteMeasure(std::vector<double> atoms, std::vector<double> weights);

  static DiscreteMeasure dirac(double x);
  /// Equal weights 1/n on the given atoms.
  static DiscreteMeasure uniform(std::vector<double> atoms);

  std::span<const double> atoms() const { return atoms_; }
  std::span<const double> weights() const { return weights_; }
  std::size_t size() const { return atoms_.size(); }

  double mean() const;
  double min_atom() const { return atoms_.front(); }
  double max_atom() const { return atoms_.back(); }
  double min_weight() const;

  template <class F>
  double expectation(F&& f) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) acc += weights_[i] * f(atoms_[i]);
    return acc;
  }

  /// Two-column CSV with header `atom,weight`.
  std::string to_csv() const;
  static DiscreteMeasure from_csv(const std::string& text);

  friend bool operator==(const DiscreteMeasure&, const DiscreteMeasure&) = default;

 private:
  std::vector<double> atoms_;
  std::vector<double> weights_;
};

/// Wasserstein-p distance between two discrete measures, p >= 1.
double wasserstein_p(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p);

/// (sum_i w_i |y_i|^p)^(1/p), the distance to the Dirac mass at zero.
double pth_moment(const DiscreteMeasure& mu, double p);

/// Translation by d (convolution with a Dirac mass at d).
DiscreteMeasure shift(const DiscreteMeasure& mu, double d);

/// Equal-weight atoms at the quantile midpoints of N(mean, variance).
DiscreteMeasure discretize_gaussian(double mean, double variance, int n_atoms);

/// exp applied to the atoms of discretize_gaussian(mu_log, sigma_log^2, n).
DiscreteMeasure discretize_lognormal(double mu_log, double sigma_log, int n_atoms);

/// Standard normal quantile function.
double normal_quantile(double q);

}  // namespace robsem
