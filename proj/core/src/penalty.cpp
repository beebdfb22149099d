// SPDX-License-Identifier: Apache-2.0
#include "robsem/penalty.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "robsem/error.hpp"

namespace robsem {
namespace {

constexpr double kBisectionRelTol = 1e-10;
constexpr double kRadiusSearchCap = 1152921504606846976.0;  // 2^60

bool is_one(double s) { return std::abs(s - 1.0) <= 1e-14; }

}  // namespace

Penalty Penalty::ball(double a, double p, double c) {
  Penalty pen;
  pen.kind_ = PenaltyKind::Ball;
  pen.a_ = a;
  pen.p_ = p;
  pen.c_ = c;
  pen.validate();
  return pen;
}

Penalty Penalty::power(double exponent, double scale, double p, double c) {
  Penalty pen;
  pen.kind_ = PenaltyKind::Power;
  pen.exponent_ = exponent;
  pen.scale_ = scale;
  pen.p_ = p;
  pen.c_ = c;
  pen.validate();
  return pen;
}

Penalty Penalty::table(std::vector<double> knots, std::vector<double> values, double p, double c) {
  Penalty pen;
  pen.kind_ = PenaltyKind::Table;
  pen.knots_ = std::move(knots);
  pen.values_ = std::move(values);
  pen.p_ = p;
  pen.c_ = c;
  pen.validate();
  return pen;
}

Penalty Penalty::with_growth(double c) const {
  Penalty pen = *this;
  pen.c_ = c;
  pen.validate();
  return pen;
}

void Penalty::validate() const {
  if (!(p_ > 1.0) || !std::isfinite(p_)) throw InvalidArgument("penalty: transport order p must be > 1");
  if (!(c_ >= 0.0) || !std::isfinite(c_)) throw InvalidArgument("penalty: growth constant c must be >= 0");
  switch (kind_) {
    case PenaltyKind::Ball:
      if (!(a_ >= 0.0) || !std::isfinite(a_)) throw InvalidArgument("penalty: ball radius a must be >= 0");
      break;
    case PenaltyKind::Power:
      if (!(exponent_ > 1.0) || !std::isfinite(exponent_)) {
        throw InvalidArgument("penalty: power exponent must be > 1");
      }
      if (!(scale_ > 0.0) || !std::isfinite(scale_)) throw InvalidArgument("penalty: power scale must be > 0");
      // v -> scale * v^(exponent / p) is convex iff exponent >= p.
      if (exponent_ < p_ - 1e-14) {
        throw InvalidArgument("penalty: power exponent must be >= transport order p");
      }
      break;
    case PenaltyKind::Table: {
      if (knots_.size() < 2 || knots_.size() != values_.size()) {
        throw InvalidArgument("penalty: table needs >= 2 knots with matching values");
      }
      if (knots_[0] != 0.0 || values_[0] != 0.0) {
        throw InvalidArgument("penalty: table must start at (0, 0)");
      }
      double prev_slope = 0.0;
      for (std::size_t k = 1; k < knots_.size(); ++k) {
        if (!(knots_[k] > knots_[k - 1]) || !std::isfinite(knots_[k])) {
          throw InvalidArgument("penalty: table knots must be strictly increasing");
        }
        if (!std::isfinite(values_[k])) throw InvalidArgument("penalty: table values must be finite");
        const double slope = table_slope(k);
        if (slope < -1e-12) throw InvalidArgument("penalty: table must be nondecreasing");
        if (slope < prev_slope - 1e-9) {
          throw InvalidArgument("penalty: table must be convex in v^p");
        }
        prev_slope = slope;
      }
      break;
    }
  }
}

double Penalty::phi(double v) const {
  if (v < 0.0) throw InvalidArgument("penalty: phi evaluated at negative argument");
  switch (kind_) {
    case PenaltyKind::Ball:
      return v <= a_ ? 0.0 : kInfinity;
    case PenaltyKind::Power:
      return scale_ * std::pow(v, exponent_);
    case PenaltyKind::Table: {
      if (v > knots_.back()) return kInfinity;
      const auto it = std::upper_bound(knots_.begin(), knots_.end(), v);
      if (it == knots_.end()) return values_.back();
      const std::size_t k = static_cast<std::size_t>(it - knots_.begin());
      return values_[k - 1] + table_slope(k) * (std::pow(v, p_) - std::pow(knots_[k - 1], p_));
    }
  }
  return kInfinity;
}

double Penalty::conjugate(double w) const {
  if (w < 0.0) throw InvalidArgument("penalty: conjugate evaluated at negative argument");
  switch (kind_) {
    case PenaltyKind::Ball:
      return a_ * w;
    case PenaltyKind::Power: {
      const double e = exponent_;
      const double v = std::pow(w / (scale_ * e), 1.0 / (e - 1.0));
      return (e - 1.0) * scale_ * std::pow(v, e);
    }
    case PenaltyKind::Table:
      return table_argmax(w, 0.0, knots_.back()).value;
  }
  return 0.0;
}

double Penalty::conjugate_slope(double w) const {
  if (w < 0.0) throw InvalidArgument("penalty: conjugate slope at negative argument");
  switch (kind_) {
    case PenaltyKind::Ball:
      return a_;
    case PenaltyKind::Power:
      return std::pow(w / (scale_ * exponent_), 1.0 / (exponent_ - 1.0));
    case PenaltyKind::Table:
      return table_argmax(w, 0.0, knots_.back()).arg;
  }
  return 0.0;
}

double Penalty::phi_t(double t, double v) const {
  if (v < 0.0) throw InvalidArgument("penalty: phi_t evaluated at negative argument");
  if (t <= 0.0) return v == 0.0 ? 0.0 : kInfinity;
  return t * phi(std::exp(-c_ * t) * v / t);
}

double Penalty::table_slope(std::size_t k) const {
  return (values_[k] - values_[k - 1]) / (std::pow(knots_[k], p_) - std::pow(knots_[k - 1], p_));
}

Penalty::TableArgmax Penalty::table_argmax(double s, double lo, double hi) const {
  // On piece k, phi(v) = values[k-1] + slope_k (v^p - knots[k-1]^p), so
  // s v - phi(v) is concave there with stationary point (s / (p slope_k))^(1/(p-1)).
  TableArgmax best{lo, s * lo - phi(lo)};
  const auto consider = [&](double v) {
    const double val = s * v - phi(v);
    if (val >= best.value) best = {v, val};
  };
  for (std::size_t k = 1; k < knots_.size(); ++k) {
    const double a = std::max(lo, knots_[k - 1]);
    const double b = std::min(hi, knots_[k]);
    if (a > b) continue;
    const double slope = table_slope(k);
    double v = b;
    if (slope > 0.0) v = s > 0.0 ? std::pow(s / (p_ * slope), 1.0 / (p_ - 1.0)) : 0.0;
    consider(a);
    consider(std::clamp(v, a, b));
    consider(b);
  }
  return best;
}

double Penalty::radius_bound_lip(double L, double horizon) const {
  if (!(L >= 0.0)) throw InvalidArgument("radius_bound_lip: L must be >= 0");
  const double damp = std::exp(-c_ * std::max(1.0, horizon));
  const auto inside = [&](double v) { return phi(damp * v) <= 1.0 + L * v; };

  double lo = 0.0;
  double hi = 1.0;
  if (inside(hi)) {
    while (inside(hi)) {
      lo = hi;
      hi *= 2.0;
      if (hi > kRadiusSearchCap) {
        throw NumericError("radius_bound_lip: growth condition violated, radius unbounded");
      }
    }
  }
  for (int it = 0; it < 200 && hi - lo > kBisectionRelTol * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (inside(mid) ? lo : hi) = mid;
  }
  return lo;
}

BoundedRadius Penalty::radius_bound_bounded(double C) const {
  if (!(C >= 0.0)) throw InvalidArgument("radius_bound_bounded: C must be >= 0");
  const double p = p_;
  const auto ratio = [&](double v) {
    const double f = phi(v);
    return std::isfinite(f) ? std::pow(v, p) / (1.0 + f) : 0.0;
  };
  double M = 0.0;
  switch (kind_) {
    case PenaltyKind::Ball:
      M = std::pow(a_, p);
      break;
    case PenaltyKind::Power: {
      if (is_one(exponent_ / p)) {
        M = 1.0 / scale_;  // the ratio increases to its asymptote 1/scale
      } else {
        const double v = std::pow(p / (scale_ * (exponent_ - p)), 1.0 / exponent_);
        M = ratio(v);
      }
      break;
    }
    case PenaltyKind::Table: {
      for (double v : knots_) M = std::max(M, ratio(v));
      const double vmax = knots_.back();
      constexpr int kSamples = 4096;
      for (int i = 1; i <= kSamples; ++i) M = std::max(M, ratio(vmax * i / kSamples));
      break;
    }
  }
  BoundedRadius out;
  out.M = M;
  out.b = std::exp(c_) * std::pow(2.0 * M * (1.0 + C), 1.0 / p);
  out.alpha = (p - 1.0) / p;
  return out;
}

double Penalty::radius_cap(double L, double C, double t) const {
  if (t <= 0.0) return 0.0;
  const double lip = radius_bound_lip(L, t) * t;
  const BoundedRadius br = radius_bound_bounded(C);
  double bounded;
  if (t <= 1.0) {
    bounded = br.b * std::pow(t, br.alpha);
  } else {
    bounded = std::exp(c_ * t) * t * std::pow(br.M * (1.0 + (1.0 + 2.0 * C) / t), 1.0 / p_);
  }
  return std::min(lip, bounded);
}

BudgetConjugate Penalty::budget_conjugate_at(double t, double lambda, double budget_cap) const {
  if (t <= 0.0 || budget_cap <= 0.0) return {0.0, 0.0};
  // radius r = rho * v, budget B = r^p, phi_t(r) = t phi(v).
  const double rho = t * std::exp(c_ * t);
  switch (kind_) {
    case PenaltyKind::Ball: {
      const double B = std::min(budget_cap, std::pow(rho * a_, p_));
      return {lambda * B, B};
    }
    case PenaltyKind::Power: {
      const double s = exponent_ / p_;
      const double K = t * scale_ * std::pow(rho, -exponent_);
      if (is_one(s)) {
        return lambda > K ? BudgetConjugate{(lambda - K) * budget_cap, budget_cap}
                          : BudgetConjugate{0.0, 0.0};
      }
      double B = std::pow(lambda / (K * s), 1.0 / (s - 1.0));
      B = std::min(B, budget_cap);
      const double value = lambda * B - K * std::pow(B, s);
      return value > 0.0 ? BudgetConjugate{value, B} : BudgetConjugate{0.0, 0.0};
    }
    case PenaltyKind::Table: {
      // Linear in B between knots: the maximum sits on a knot or on the cap.
      const double v_cap = std::pow(budget_cap, 1.0 / p_) / rho;
      const double scale = lambda * std::pow(rho, p_);
      BudgetConjugate best{0.0, 0.0};
      const auto consider = [&](double v) {
        const double val = scale * std::pow(v, p_) - t * phi(v);
        if (val > best.value) best = {val, std::pow(rho * v, p_)};
      };
      for (double v : knots_) {
        if (v > v_cap) break;
        consider(v);
      }
      if (v_cap <= knots_.back()) consider(v_cap);
      return best;
    }
  }
  return {0.0, 0.0};
}

double Penalty::budget_conjugate(double t, double lambda, double budget_cap) const {
  return budget_conjugate_at(t, lambda, budget_cap).value;
}

double Penalty::maximize_linear(double s, double lo, double hi) const {
  switch (kind_) {
    case PenaltyKind::Ball: {
      if (lo > a_) return lo;
      return s > 0.0 ? std::min(hi, a_) : lo;
    }
    case PenaltyKind::Power: {
      const double v = s > 0.0 ? std::pow(s / (scale_ * exponent_), 1.0 / (exponent_ - 1.0)) : 0.0;
      return std::clamp(v, lo, hi);
    }
    case PenaltyKind::Table:
      if (lo > knots_.back()) return lo;
      return table_argmax(s, lo, std::min(hi, knots_.back())).arg;
  }
  return lo;
}

}  // namespace robsem
