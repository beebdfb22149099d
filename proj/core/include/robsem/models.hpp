// SPDX-License-Identifier: Apache-2.0
//
// Reference dynamics  X_t^x = psi_t(x) + Y_t,  Y_t ~ mu_t.
//
// Every model works in chart coordinates z = V(x). For all models except
// geometric Brownian motion V is the identity; for GBM V = log, so that the
// multiplicative dynamics become additive and the derivative norm entering
// the generator is |x du/dx| = |d/dz u(exp z)|.

#pragma once

#include <string>
#include <vector>

#include "robsem/grid.hpp"
#include "robsem/measures.hpp"

namespace robsem {

enum class ModelType { Brownian, OrnsteinUhlenbeck, GeometricBrownian, Koopman };
enum class Chart { Identity, Log };

struct FlowResult {
  double value;
  bool clamped;
};

class ReferenceModel {
 public:
  /// psi_t(x) = x, mu_t = N(m t, sigma^2 t).
  static ReferenceModel brownian(double sigma, double drift = 0.0);
  /// psi_t(x) = exp(beta t) x, mu_t = law of the stochastic convolution.
  static ReferenceModel ou1d(double beta, double m, double sigma);
  /// Multiplicative noise exp((alpha - sigma^2/2) t + sigma W_t), handled in
  /// log coordinates.
  static ReferenceModel gbm(double alpha, double sigma);
  /// Deterministic flow of x' = F(x), F(x) = sum_i coeffs[i] x^i, integrated
  /// by RK4 with step <= rk4_dt on [x_min, x_max]. A negative lipschitz
  /// estimates c = max |F'| on a 10^4 point grid.
  static ReferenceModel koopman(std::vector<double> coeffs, double rk4_dt, double x_min,
                                double x_max, double lipschitz = -1.0);

  ModelType type() const { return type_; }
  std::string name() const;
  double growth() const { return c_; }
  Chart chart() const { return chart_; }
  bool identity_flow() const;

  /// psi_t in chart coordinates.
  double flow(double t, double z) const { return flow_checked(t, z).value; }
  FlowResult flow_checked(double t, double z) const;

  /// mu_t in chart coordinates.
  DiscreteMeasure noise_law(double t, int n_atoms) const;
  /// Mean and variance of mu_t (before discretisation).
  double noise_mean(double t) const;
  double noise_variance(double t) const;

  /// Drift b(z) and volatility sigma of the generator in chart coordinates.
  double drift(double z) const;
  double volatility() const { return sigma_; }

  double to_chart(double x) const;
  double from_chart(double z) const;
  /// Factor converting d/dx into d/dz: du/dz = chart_jacobian(x) * du/dx.
  double chart_jacobian(double x) const;

  /// Brownian model that coincides with this one in chart coordinates
  /// (only for GBM; returns *this for the others).
  ReferenceModel chart_equivalent() const;

  double koopman_polynomial(double x) const;
  double koopman_derivative(double x) const;

  const std::vector<double>& coefficients() const { return coeffs_; }
  double beta() const { return beta_; }
  double mean_rate() const { return m_; }
  double alpha() const { return alpha_; }

 private:
  ReferenceModel() = default;

  ModelType type_ = ModelType::Brownian;
  Chart chart_ = Chart::Identity;
  double sigma_ = 0.0;
  double m_ = 0.0;
  double beta_ = 0.0;
  double alpha_ = 0.0;
  double c_ = 0.0;
  std::vector<double> coeffs_;
  double rk4_dt_ = 1e-3;
  double x_min_ = 0.0;
  double x_max_ = 0.0;
};

/// Chapman-Kolmogorov residual
///   max_x | int u(psi_{t+s}(x) + y) mu_{t+s}(dy)
///           - int int u(psi_s(psi_t(x) + y_t) + y_s) mu_s(dy_s) mu_t(dy_t) |.
double check_consistency(const ReferenceModel& model, double s, double t, const GridFunction& u,
                         const std::vector<double>& x_samples, int n_atoms);

}  // namespace robsem
