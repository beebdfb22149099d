// SPDX-License-Identifier: Apache-2.0
#include "robsem/models.hpp"

#include <algorithm>
#include <cmath>

#include "robsem/error.hpp"

namespace robsem {

ReferenceModel ReferenceModel::brownian(double sigma, double drift) {
  if (!(sigma >= 0.0)) throw InvalidArgument("brownian: sigma must be >= 0");
  ReferenceModel m;
  m.type_ = ModelType::Brownian;
  m.sigma_ = sigma;
  m.m_ = drift;
  return m;
}

ReferenceModel ReferenceModel::ou1d(double beta, double mean_rate, double sigma) {
  if (!(sigma >= 0.0)) throw InvalidArgument("ou: sigma must be >= 0");
  ReferenceModel m;
  m.type_ = ModelType::OrnsteinUhlenbeck;
  m.beta_ = beta;
  m.m_ = mean_rate;
  m.sigma_ = sigma;
  m.c_ = std::max(beta, 0.0);
  return m;
}

ReferenceModel ReferenceModel::gbm(double alpha, double sigma) {
  if (!(sigma >= 0.0)) throw InvalidArgument("gbm: sigma must be >= 0");
  ReferenceModel m;
  m.type_ = ModelType::GeometricBrownian;
  m.chart_ = Chart::Log;
  m.alpha_ = alpha;
  m.sigma_ = sigma;
  m.m_ = alpha - 0.5 * sigma * sigma;
  return m;
}

ReferenceModel ReferenceModel::koopman(std::vector<double> coeffs, double rk4_dt, double x_min,
                                       double x_max, double lipschitz) {
  if (!(rk4_dt > 0.0)) throw InvalidArgument("koopman: rk4_dt must be > 0");
  if (!(x_min < x_max)) throw InvalidArgument("koopman: working interval must be non-empty");
  ReferenceModel m;
  m.type_ = ModelType::Koopman;
  m.coeffs_ = std::move(coeffs);
  m.rk4_dt_ = rk4_dt;
  m.x_min_ = x_min;
  m.x_max_ = x_max;
  if (lipschitz >= 0.0) {
    m.c_ = lipschitz;
  } else {
    constexpr int kSamples = 10000;
    double c = 0.0;
    for (int i = 0; i <= kSamples; ++i) {
      const double x = x_min + (x_max - x_min) * i / kSamples;
      c = std::max(c, std::abs(m.koopman_derivative(x)));
    }
    m.c_ = c;
  }
  return m;
}

std::string ReferenceModel::name() const {
  switch (type_) {
    case ModelType::Brownian: return "brownian";
    case ModelType::OrnsteinUhlenbeck: return "ou";
    case ModelType::GeometricBrownian: return "gbm";
    case ModelType::Koopman: return "koopman";
  }
  return "unknown";
}

bool ReferenceModel::identity_flow() const {
  switch (type_) {
    case ModelType::Brownian:
    case ModelType::GeometricBrownian:
      return true;
    case ModelType::OrnsteinUhlenbeck:
      return beta_ == 0.0;
    case ModelType::Koopman:
      return std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return c == 0.0; });
  }
  return false;
}

double ReferenceModel::koopman_polynomial(double x) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double ReferenceModel::koopman_derivative(double x) const {
  double acc = 0.0;
  for (std::size_t i = coeffs_.size(); i-- > 1;) acc = acc * x + static_cast<double>(i) * coeffs_[i];
  return acc;
}

FlowResult ReferenceModel::flow_checked(double t, double z) const {
  switch (type_) {
    case ModelType::Brownian:
    case ModelType::GeometricBrownian:
      return {z, false};
    case ModelType::OrnsteinUhlenbeck:
      return {std::exp(beta_ * t) * z, false};
    case ModelType::Koopman: {
      if (t <= 0.0 || identity_flow()) return {z, false};
      bool clamped = false;
      const auto clamp = [&](double v) {
        if (v < x_min_ || v > x_max_) {
          clamped = true;
          return std::clamp(v, x_min_, x_max_);
        }
        return v;
      };
      const auto steps = static_cast<long long>(std::ceil(t / rk4_dt_ - 1e-12));
      const double h = t / static_cast<double>(std::max<long long>(steps, 1));
      double x = clamp(z);
      for (long long i = 0; i < steps; ++i) {
        const double k1 = koopman_polynomial(x);
        const double k2 = koopman_polynomial(x + 0.5 * h * k1);
        const double k3 = koopman_polynomial(x + 0.5 * h * k2);
        const double k4 = koopman_polynomial(x + h * k3);
        x = clamp(x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
      }
      return {x, clamped};
    }
  }
  return {z, false};
}

double ReferenceModel::noise_mean(double t) const {
  switch (type_) {
    case ModelType::Brownian:
    case ModelType::GeometricBrownian:
      return m_ * t;
    case ModelType::OrnsteinUhlenbeck:
      return beta_ == 0.0 ? m_ * t : m_ * std::expm1(beta_ * t) / beta_;
    case ModelType::Koopman:
      return 0.0;
  }
  return 0.0;
}

double ReferenceModel::noise_variance(double t) const {
  switch (type_) {
    case ModelType::Brownian:
    case ModelType::GeometricBrownian:
      return sigma_ * sigma_ * t;
    case ModelType::OrnsteinUhlenbeck:
      return beta_ == 0.0 ? sigma_ * sigma_ * t
                          : sigma_ * sigma_ * std::expm1(2.0 * beta_ * t) / (2.0 * beta_);
    case ModelType::Koopman:
      return 0.0;
  }
  return 0.0;
}

DiscreteMeasure ReferenceModel::noise_law(double t, int n_atoms) const {
  if (t < 0.0) throw InvalidArgument("noise_law: t must be >= 0");
  if (t == 0.0 || type_ == ModelType::Koopman) return DiscreteMeasure::dirac(0.0);
  return discretize_gaussian(noise_mean(t), noise_variance(t), n_atoms);
}

double ReferenceModel::drift(double z) const {
  switch (type_) {
    case ModelType::Brownian:
    case ModelType::GeometricBrownian:
      return m_;
    case ModelType::OrnsteinUhlenbeck:
      return beta_ * z + m_;
    case ModelType::Koopman:
      return koopman_polynomial(z);
  }
  return 0.0;
}

double ReferenceModel::to_chart(double x) const {
  if (chart_ == Chart::Log) {
    if (!(x > 0.0)) throw InvalidArgument("gbm: state must be > 0");
    return std::log(x);
  }
  return x;
}

double ReferenceModel::from_chart(double z) const {
  return chart_ == Chart::Log ? std::exp(z) : z;
}

double ReferenceModel::chart_jacobian(double x) const {
  return chart_ == Chart::Log ? x : 1.0;
}

ReferenceModel ReferenceModel::chart_equivalent() const {
  if (type_ != ModelType::GeometricBrownian) return *this;
  return brownian(sigma_, m_);
}

double check_consistency(const ReferenceModel& model, double s, double t, const GridFunction& u,
                         const std::vector<double>& x_samples, int n_atoms) {
  if (s < 0.0 || t < 0.0) throw InvalidArgument("check_consistency: times must be >= 0");
  const DiscreteMeasure mu_st = model.noise_law(s + t, n_atoms);
  const DiscreteMeasure mu_t = model.noise_law(t, n_atoms);
  const DiscreteMeasure mu_s = model.noise_law(s, n_atoms);
  // Integrands are centred at u(x_min) so that constants cancel exactly.
  const double ref = u.values()[0];
  const auto v = [&](double z) { return u(z) - ref; };
  double worst = 0.0;
  for (double x : x_samples) {
    const double base = model.flow(t + s, x);
    const double lhs = mu_st.expectation([&](double y) { return v(base + y); });
    const double inner_base = model.flow(t, x);
    const double rhs = mu_t.expectation([&](double yt) {
      const double mid = model.flow(s, inner_base + yt);
      return mu_s.expectation([&](double ys) { return v(mid + ys); });
    });
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

}  // namespace robsem
