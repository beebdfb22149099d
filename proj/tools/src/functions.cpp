// SPDX-License-Identifier: Apache-2.0
#include "functions.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "robsem/error.hpp"

namespace robsem::cli {

double bump(double x, double R) {
  const double q = x / R;
  if (std::abs(q) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - q * q));
}

double bump_derivative(double x, double R) {
  const double q = x / R;
  if (std::abs(q) >= 1.0) return 0.0;
  const double s = 1.0 - q * q;
  return bump(x, R) * (-2.0 * q / (R * s * s));
}

Builtin make_builtin(const FunctionSpec& spec) {
  const double K = spec.bound;
  const double R = spec.radius;
  if (spec.type == "constant") {
    const double c = spec.value;
    return {[c](double) { return c; }, [](double) { return 0.0; }};
  }
  if (spec.type == "linear-clamped") {
    return {[K](double x) { return std::clamp(x, -K, K); },
            [K](double x) { return std::abs(x) < K ? 1.0 : 0.0; }};
  }
  if (spec.type == "bump") {
    if (!(R > 0.0)) throw InvalidArgument("function.radius must be > 0");
    return {[R](double x) { return bump(x, R); }, [R](double x) { return bump_derivative(x, R); }};
  }
  if (spec.type == "sine-bump") {
    if (!(R > 0.0)) throw InvalidArgument("function.radius must be > 0");
    return {[R](double x) { return std::sin(x) * bump(x, R); },
            [R](double x) { return std::cos(x) * bump(x, R) + std::sin(x) * bump_derivative(x, R); }};
  }
  if (spec.type == "abs-neg") {
    return {[K](double x) { return -std::min(std::abs(x), K); },
            [K](double x) { return std::abs(x) < K ? (x > 0.0 ? -1.0 : (x < 0.0 ? 1.0 : 0.0)) : 0.0; }};
  }
  if (spec.type == "custom") {
    std::ifstream in(spec.path);
    if (!in) throw InvalidArgument("function.path: cannot open '" + spec.path + "'");
    std::vector<double> xs;
    std::vector<double> vs;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#' || line.rfind("x,", 0) == 0) continue;
      std::replace(line.begin(), line.end(), ',', ' ');
      std::istringstream row(line);
      double x;
      double v;
      if (!(row >> x >> v)) throw InvalidArgument("function.path: malformed row '" + line + "'");
      xs.push_back(x);
      vs.push_back(v);
    }
    if (xs.size() < 2 || !std::is_sorted(xs.begin(), xs.end())) {
      throw InvalidArgument("function.path: need at least two rows with increasing x");
    }
    return {[xs, vs](double x) {
              if (x <= xs.front()) return vs.front();
              if (x >= xs.back()) return vs.back();
              const auto it = std::upper_bound(xs.begin(), xs.end(), x);
              const auto k = static_cast<std::size_t>(it - xs.begin()) - 1;
              const double w = (x - xs[k]) / (xs[k + 1] - xs[k]);
              return vs[k] + w * (vs[k + 1] - vs[k]);
            },
            {}};
  }
  throw InvalidArgument("function.type: unknown builtin '" + spec.type + "'");
}

GridFunction sample_function(const FunctionSpec& spec, double x_min, double x_max,
                             std::size_t n_nodes) {
  const Builtin b = make_builtin(spec);
  return GridFunction::sample(x_min, x_max, n_nodes, b.f, spec.extension, spec.slope_cap);
}

}  // namespace robsem::cli
