// SPDX-License-Identifier: Apache-2.0
#include "robsem/measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include <boost/math/distributions/normal.hpp>

#include "robsem/error.hpp"

namespace robsem {

DiscreteMeasure::DiscreteMeasure(std::vector<double> atoms, std::vector<double> weights) {
  if (atoms.size() != weights.size()) {
    throw InvalidArgument("DiscreteMeasure: atoms and weights differ in length");
  }
  std::vector<std::size_t> order;
  order.reserve(atoms.size());
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (!std::isfinite(atoms[i]) || !std::isfinite(weights[i])) {
      throw InvalidArgument("DiscreteMeasure: non-finite atom or weight");
    }
    if (weights[i] < 0.0) throw InvalidArgument("DiscreteMeasure: negative weight");
    if (weights[i] > 0.0) order.push_back(i);
  }
  if (order.empty()) throw InvalidArgument("DiscreteMeasure: no mass");
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return atoms[a] < atoms[b]; });

  double total = 0.0;
  for (std::size_t idx : order) {
    const double y = atoms[idx];
    const double w = weights[idx];
    total += w;
    if (!atoms_.empty() && y - atoms_.back() <= kMergeTolerance) {
      const double merged = weights_.back() + w;
      atoms_.back() = (atoms_.back() * weights_.back() + y * w) / merged;
      weights_.back() = merged;
    } else {
      atoms_.push_back(y);
      weights_.push_back(w);
    }
  }
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw InvalidArgument("DiscreteMeasure: weights sum to " + std::to_string(total) +
                          ", expected 1");
  }
}

DiscreteMeasure DiscreteMeasure::dirac(double x) { return DiscreteMeasure({x}, {1.0}); }

DiscreteMeasure DiscreteMeasure::uniform(std::vector<double> atoms) {
  if (atoms.empty()) throw InvalidArgument("DiscreteMeasure::uniform: no atoms");
  const double w = 1.0 / static_cast<double>(atoms.size());
  std::vector<double> weights(atoms.size(), w);
  // Compensate the rounding of n * (1/n) on the last weight.
  const double sum = std::accumulate(weights.begin(), weights.end() - 1, 0.0);
  weights.back() = 1.0 - sum;
  return DiscreteMeasure(std::move(atoms), std::move(weights));
}

double DiscreteMeasure::mean() const {
  return expectation([](double y) { return y; });
}

double DiscreteMeasure::min_weight() const {
  return *std::min_element(weights_.begin(), weights_.end());
}

std::string DiscreteMeasure::to_csv() const {
  std::string out = "atom,weight\n";
  char buf[96];
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", atoms_[i], weights_[i]);
    out += buf;
  }
  return out;
}

DiscreteMeasure DiscreteMeasure::from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  bool header_seen = false;
  std::vector<double> atoms, weights;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line.rfind("atom,weight", 0) != 0) {
        throw InvalidArgument("measure CSV: expected header 'atom,weight'");
      }
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw InvalidArgument("measure CSV: malformed row: " + line);
    try {
      atoms.push_back(std::stod(line.substr(0, comma)));
      weights.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw InvalidArgument("measure CSV: malformed row: " + line);
    }
  }
  if (!header_seen) throw InvalidArgument("measure CSV: missing header");
  return DiscreteMeasure(std::move(atoms), std::move(weights));
}

double wasserstein_p(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p) {
  if (!(p >= 1.0)) throw InvalidArgument("wasserstein_p: p must be >= 1");
  const auto ya = mu.atoms();
  const auto wa = mu.weights();
  const auto za = nu.atoms();
  const auto wb = nu.weights();

  // Sweep the two quantile functions simultaneously; on each common
  // quantile interval both are constant.
  std::size_t i = 0, j = 0;
  double left_a = wa[0], left_b = wb[0];
  double cost = 0.0;
  while (i < ya.size() && j < za.size()) {
    const double mass = std::min(left_a, left_b);
    cost += mass * std::pow(std::abs(ya[i] - za[j]), p);
    left_a -= mass;
    left_b -= mass;
    if (left_a <= left_b) {
      if (++i < ya.size()) left_a = wa[i];
    } else {
      if (++j < za.size()) left_b = wb[j];
    }
  }
  return std::pow(std::max(cost, 0.0), 1.0 / p);
}

double pth_moment(const DiscreteMeasure& mu, double p) {
  if (!(p >= 1.0)) throw InvalidArgument("pth_moment: p must be >= 1");
  const double m = mu.expectation([p](double y) { return std::pow(std::abs(y), p); });
  return std::pow(m, 1.0 / p);
}

DiscreteMeasure shift(const DiscreteMeasure& mu, double d) {
  std::vector<double> atoms(mu.atoms().begin(), mu.atoms().end());
  for (double& y : atoms) y += d;
  return DiscreteMeasure(std::move(atoms),
                         std::vector<double>(mu.weights().begin(), mu.weights().end()));
}

double normal_quantile(double q) {
  static const boost::math::normal_distribution<double> standard;
  return boost::math::quantile(standard, q);
}

DiscreteMeasure discretize_gaussian(double mean, double variance, int n_atoms) {
  if (!(variance >= 0.0)) throw InvalidArgument("discretize_gaussian: negative variance");
  if (n_atoms < 1) throw InvalidArgument("discretize_gaussian: n_atoms must be >= 1");
  if (variance == 0.0 || n_atoms == 1) return DiscreteMeasure::dirac(mean);

  const auto n = static_cast<std::size_t>(n_atoms);
  const double sd = std::sqrt(variance);
  std::vector<double> z(n);
  // Fill the lower half and mirror it, so the atoms are exactly symmetric.
  for (std::size_t i = 0; i < n / 2; ++i) {
    const double q = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    z[i] = sd * normal_quantile(q);
    z[n - 1 - i] = -z[i];
  }
  if (n % 2 == 1) z[n / 2] = 0.0;
  for (double& v : z) v += mean;
  return DiscreteMeasure::uniform(std::move(z));
}

DiscreteMeasure discretize_lognormal(double mu_log, double sigma_log, int n_atoms) {
  if (!(sigma_log >= 0.0)) throw InvalidArgument("discretize_lognormal: negative sigma");
  const DiscreteMeasure g = discretize_gaussian(mu_log, sigma_log * sigma_log, n_atoms);
  std::vector<double> atoms(g.atoms().begin(), g.atoms().end());
  for (double& y : atoms) y = std::exp(y);
  return DiscreteMeasure(std::move(atoms),
                         std::vector<double>(g.weights().begin(), g.weights().end()));
}

}  // namespace robsem
