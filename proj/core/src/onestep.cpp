// SPDX-License-Identifier: Apache-2.0
#include "robsem/onestep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "robsem/error.hpp"

namespace robsem {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGolden = 0.6180339887498949;
constexpr int kBisectionIterations = 96;
constexpr double kLambdaRelTol = 1e-12;
constexpr double kTiltRelTol = 1e-10;
constexpr double kDualAbsTol = 1e-14;
constexpr double kTiltAbsTol = 1e-12;

double power_p(double d, double p) {
  d = std::abs(d);
  return p == 2.0 ? d * d : std::pow(d, p);
}

/// Distance at which |s| = lambda p d^(p-1).
double stationary_distance(double s, double lambda, double p) {
  const double ratio = std::abs(s) / (lambda * p);
  return p == 2.0 ? ratio : std::pow(ratio, 1.0 / (p - 1.0));
}

struct PlanAt {
  std::vector<Response> responses;
  double spend = 0.0;
  double value = 0.0;
};

template <class Payoff>
PlanAt plan_at(const Payoff& g, std::span<const double> ys, std::span<const double> ws,
               double lambda) {
  PlanAt out;
  out.responses.reserve(ys.size());
  for (std::size_t i = 0; i < ys.size(); ++i) {
    Response r = g.respond(ys[i], lambda);
    out.spend += ws[i] * r.cost;
    out.value += ws[i] * r.payoff;
    out.responses.push_back(r);
  }
  return out;
}

template <class Payoff>
BallSupResult ball_sup_impl(const DiscreteMeasure& mu, double p, double r, const Payoff& g) {
  if (!(r >= 0.0)) throw InvalidArgument("ball_sup: radius must be >= 0");
  if (!(p >= 1.0)) throw InvalidArgument("ball_sup: p must be >= 1");
  const auto ws = mu.weights();
  std::vector<double> ys(mu.size());
  for (std::size_t i = 0; i < ys.size(); ++i) ys[i] = g.snap(mu.atoms()[i]);
  const double budget = std::pow(r, p);

  const auto finish = [&](const PlanAt& lo, const PlanAt* hi) {
    BallSupResult out;
    double theta = 1.0;
    if (hi != nullptr && lo.spend > hi->spend) {
      theta = std::clamp((budget - hi->spend) / (lo.spend - hi->spend), 0.0, 1.0);
    }
    const auto emit = [&](const PlanAt& plan, double share) {
      if (share <= 0.0) return;
      for (std::size_t i = 0; i < ys.size(); ++i) {
        out.plan.push_back({i, ys[i], plan.responses[i].z, share * ws[i]});
      }
      out.value += share * plan.value;
      out.budget_used += share * plan.spend;
    };
    emit(lo, theta);
    if (hi != nullptr) emit(*hi, 1.0 - theta);
    return out;
  };

  const auto stay = [&] {
    PlanAt plan;
    for (std::size_t i = 0; i < ys.size(); ++i) {
      Response resp = g.respond(ys[i], kInf);
      plan.value += ws[i] * resp.payoff;
      plan.spend += ws[i] * resp.cost;
      plan.responses.push_back(resp);
    }
    return plan;
  };
  if (budget == 0.0) return finish(stay(), nullptr);

  double lambda_hi = 1.0;
  PlanAt hi = plan_at(g, ys, ws, lambda_hi);
  for (int it = 0; hi.spend > budget; ++it) {
    if (it > 2000) throw NumericError("ball_sup: could not meet the transport budget");
    lambda_hi *= 2.0;
    hi = plan_at(g, ys, ws, lambda_hi);
  }
  double lambda_lo = lambda_hi;
  PlanAt lo = hi;
  for (int it = 0; lo.spend <= budget; ++it) {
    if (it > 64) return finish(lo, nullptr);  // the budget never binds
    lambda_hi = lambda_lo;
    hi = std::move(lo);
    lambda_lo *= 0.5;
    lo = plan_at(g, ys, ws, lambda_lo);
  }
  for (int it = 0; it < kBisectionIterations; ++it) {
    const double mid = 0.5 * (lambda_lo + lambda_hi);
    if (!(mid > lambda_lo && mid < lambda_hi)) break;
    PlanAt m = plan_at(g, ys, ws, mid);
    if (m.spend > budget) {
      lambda_lo = mid;
      lo = std::move(m);
    } else {
      lambda_hi = mid;
      hi = std::move(m);
    }
    if (std::abs(hi.spend - budget) <= 1e-10 * budget) break;
  }
  return finish(lo, &hi);
}

}  // namespace

// ---------------------------------------------------------------------------
// NodePayoff

NodePayoff::NodePayoff(std::vector<double> nodes, std::vector<double> values, double p)
    : nodes_(std::move(nodes)), values_(std::move(values)), p_(p) {
  if (nodes_.empty()) throw InvalidArgument("NodePayoff: empty candidate set");
  if (nodes_.size() != values_.size()) throw InvalidArgument("NodePayoff: size mismatch");
  if (!std::is_sorted(nodes_.begin(), nodes_.end())) {
    throw InvalidArgument("NodePayoff: nodes must be sorted");
  }
}

double NodePayoff::snap(double y) const {
  const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), y);
  if (it == nodes_.begin()) return nodes_.front();
  if (it == nodes_.end()) return nodes_.back();
  const double right = *it;
  const double left = *(it - 1);
  return (y - left) <= (right - y) ? left : right;
}

Response NodePayoff::respond(double y, double lambda, double tilt) const {
  Response best;
  double best_value = -kInf;
  double best_cost = kInf;
  for (std::size_t j = 0; j < nodes_.size(); ++j) {
    const double cost = power_p(nodes_[j] - y, p_);
    double val;
    if (std::isinf(lambda)) {
      val = cost == 0.0 ? values_[j] : -kInf;
    } else {
      val = values_[j] - lambda * cost - tilt * (nodes_[j] - y);
    }
    if (val > best_value || (val == best_value && cost < best_cost)) {
      best_value = val;
      best_cost = cost;
      best = {nodes_[j], values_[j], cost};
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// InterpolatedPayoff

InterpolatedPayoff::InterpolatedPayoff(const GridFunction& u, double p)
    : u_(u), p_(p), lipschitz_(u.lipschitz()), upper_(kInf) {
  slopes_.resize(u.size() - 1);
  for (std::size_t k = 0; k + 1 < u.size(); ++k) slopes_[k] = u.segment_slope(k);
  if (u.left_slope() >= 0.0 && u.right_slope() <= 0.0) {
    const auto v = u.values();
    upper_ = *std::max_element(v.begin(), v.end());
  }
}

Response InterpolatedPayoff::respond(double y, double lambda, double tilt) const {
  const double uy = u_(y);
  Response best{y, uy, 0.0};
  const double lip = lipschitz_ + std::abs(tilt);
  if (lip == 0.0 || std::isinf(lambda)) return best;
  if (!(lambda > 0.0)) throw InvalidArgument("InterpolatedPayoff: lambda must be > 0");
  double best_value = uy;

  // A local maximiser at distance d needs lambda p d^(p-1) <= lip, and a
  // gain of lambda d^p must be paid for by u rising above u(y).
  double reach = stationary_distance(lip, lambda, p_);
  if (std::isfinite(upper_)) {
    const double room = std::max(upper_ - uy, 0.0) / lambda;
    if (tilt == 0.0) {
      reach = std::min(reach, p_ == 2.0 ? std::sqrt(room) : std::pow(room, 1.0 / p_));
    } else {
      // lambda d^p <= room lambda + |tilt| d fails once d exceeds both terms below.
      reach = std::min(reach, std::max(std::pow(2.0 * room, 1.0 / p_),
                                       stationary_distance(2.0 * tilt, lambda, p_)));
    }
  }
  if (reach == 0.0) return best;
  const double lo = y - reach;
  const double hi = y + reach;
  const double x_min = u_.x_min();
  const double x_max = u_.x_max();
  const auto values = u_.values();
  const std::size_t n = u_.size();
  const double dx = u_.dx();
  const bool quadratic = p_ == 2.0;
  const double inv_2lambda = 0.5 / lambda;

  // Maximise ua + slope (z - a) - tilt (z - y) - lambda |z - y|^p on [a, b].
  const auto piece = [&](double a, double b, double ua, double slope) {
    const double s = slope - tilt;
    double z = y;
    if (s != 0.0) {
      z = quadratic ? y + s * inv_2lambda : y + std::copysign(stationary_distance(s, lambda, p_), s);
    }
    z = std::clamp(z, a, b);
    const double d = z - y;
    const double gain = ua + slope * (z - a);
    const double cost = quadratic ? d * d : std::pow(std::abs(d), p_);
    const double val = gain - tilt * d - lambda * cost;
    if (val > best_value) {
      best_value = val;
      best = {z, gain, cost};
    }
  };

  if (lo < x_min) {
    // Ray (-inf, x_min]; anchored at x_min.
    const double slope = u_.left_slope();
    const double s = slope - tilt;
    double z = y;
    if (s != 0.0) z = y + std::copysign(stationary_distance(s, lambda, p_), s);
    z = std::min(z, x_min);
    const double d = z - y;
    const double gain = values[0] + slope * (z - x_min);
    const double cost = power_p(d, p_);
    const double val = gain - tilt * d - lambda * cost;
    if (val > best_value) {
      best_value = val;
      best = {z, gain, cost};
    }
  }
  if (hi > x_min && lo < x_max) {
    const double s_lo = std::max(0.0, (lo - x_min) / dx);
    const double s_hi = std::min(static_cast<double>(n - 2), (hi - x_min) / dx);
    const auto k_lo = static_cast<std::size_t>(std::min(s_lo, static_cast<double>(n - 2)));
    const auto k_hi = static_cast<std::size_t>(std::max(s_hi, 0.0));
    for (std::size_t k = k_lo; k <= k_hi; ++k) {
      piece(u_.node(k), u_.node(k + 1), values[k], slopes_[k]);
    }
  }
  if (hi > x_max) {
    const double slope = u_.right_slope();
    const double s = slope - tilt;
    double z = y;
    if (s != 0.0) z = y + std::copysign(stationary_distance(s, lambda, p_), s);
    z = std::max(z, x_max);
    const double d = z - y;
    const double gain = values[n - 1] + slope * (z - x_max);
    const double cost = power_p(d, p_);
    const double val = gain - tilt * d - lambda * cost;
    if (val > best_value) {
      best_value = val;
      best = {z, gain, cost};
    }
  }
  return best;
}

BallSupResult ball_sup(const DiscreteMeasure& mu, double p, double r, const NodePayoff& g) {
  return ball_sup_impl(mu, p, r, g);
}

BallSupResult ball_sup(const DiscreteMeasure& mu, double p, double r, const InterpolatedPayoff& g) {
  return ball_sup_impl(mu, p, r, g);
}

// ---------------------------------------------------------------------------
// OneStep

OneStep::OneStep(const ReferenceModel& model, const Penalty& pen, double t, int n_atoms,
                 const TestFunction& u)
    : model_(model),
      pen_(pen.with_growth(model.growth())),
      t_(t),
      mu_(model.noise_law(t, n_atoms)),
      u_(u),
      payoff_(u.u, pen_.transport_order()),
      constant_(u.u.lipschitz() == 0.0),
      r_cap_(0.0),
      budget_cap_(0.0) {
  if (!(t >= 0.0)) throw InvalidArgument("OneStep: t must be >= 0");
  const double lip = std::max(u.lipschitz, u.u.lipschitz());
  r_cap_ = pen_.radius_cap(lip, std::max(u.sup_bound, u.u.sup_norm()), t);
  budget_cap_ = std::pow(r_cap_, pen_.transport_order());
}

double OneStep::expectation(double x) const {
  if (constant_) return u_.u.values()[0];
  const double center = model_.flow(t_, x);
  return mu_.expectation([&](double y) { return u_.u(center + y); });
}

OneStep::DualValue OneStep::dual_objective(double center, double lambda, double tilt) const {
  const BudgetConjugate chi = pen_.budget_conjugate_at(t_, lambda, budget_cap_);
  DualValue out{chi.value, chi.budget, 0.0};
  const auto ys = mu_.atoms();
  const auto ws = mu_.weights();
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const double xi = center + ys[i];
    const Response r = payoff_.respond(xi, lambda, tilt);
    out.value += ws[i] * (r.payoff - lambda * r.cost - tilt * (r.z - xi));
    out.slope -= ws[i] * r.cost;
    out.displacement += ws[i] * (r.z - xi);
  }
  return out;
}

OneStep::DualValue OneStep::minimise_lambda(double center, double tilt, double start) const {
  const double lip = payoff_.lipschitz() + std::abs(tilt);
  if (lip == 0.0 || budget_cap_ == 0.0) {
    return {mu_.expectation([&](double y) { return u_.u(center + y); }), 0.0, 0.0};
  }
  const double p = pen_.transport_order();
  const auto F = [&](double lambda) {
    DualValue d = dual_objective(center, lambda, tilt);
    d.lambda = lambda;
    return d;
  };

  // Bracket a sign change of the slope, starting where the budget cap
  // would just be used up by a payoff of slope lip.
  double lo = start > 0.0 ? start : lip / (p * std::pow(r_cap_, p - 1.0));
  DualValue f_lo = F(lo);
  DualValue best = f_lo;
  if (f_lo.slope == 0.0) return f_lo;
  double hi = lo;
  DualValue f_hi = f_lo;
  if (f_lo.slope < 0.0) {
    for (int it = 0; f_hi.slope < 0.0; ++it) {
      if (it > 400) return best;
      lo = hi;
      f_lo = f_hi;
      hi *= 4.0;
      f_hi = F(hi);
      if (f_hi.value < best.value) best = f_hi;
    }
  } else {
    for (int it = 0; f_lo.slope > 0.0; ++it) {
      // The infimum is approached as lambda -> 0; by convexity it is at least
      // F(lo) - lo F'(lo).
      if (it > 400 || lo * f_lo.slope <= kDualAbsTol * (1.0 + std::abs(best.value)) ||
          !(0.25 * lo > 0.0)) {
        return best;
      }
      hi = lo;
      f_hi = f_lo;
      lo *= 0.25;
      f_lo = F(lo);
      if (f_lo.value < best.value) best = f_lo;
    }
  }
  if (f_lo.slope == 0.0) return f_lo.value <= best.value ? f_lo : best;
  if (f_hi.slope == 0.0) return f_hi.value <= best.value ? f_hi : best;

  // Illinois iteration on the slope; across a kink (one-sided slopes of very
  // different size) the tangent crossing, which lands on it in one step. The tangent lines at the bracket ends
  // bound the minimum from below.
  double w_lo = f_lo.slope;
  double w_hi = f_hi.slope;
  int side = 0;
  for (int it = 0; it < 200; ++it) {
    const double cross = (f_hi.value - f_lo.value + f_lo.slope * lo - f_hi.slope * hi) /
                         (f_lo.slope - f_hi.slope);
    const double lower = f_lo.value + f_lo.slope * (cross - lo);
    if (best.value - lower <= kDualAbsTol * (1.0 + std::abs(best.value))) break;
    if (hi - lo <= kLambdaRelTol * hi) break;
    double mid = (lo * w_hi - hi * w_lo) / (w_hi - w_lo);
    const bool kinked = std::min(-f_lo.slope, f_hi.slope) < 1e-3 * std::max(-f_lo.slope, f_hi.slope);
    if (kinked || !(mid > lo && mid < hi)) mid = cross;
    if (it % 4 == 3 || !(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
    const DualValue f_mid = F(mid);
    if (f_mid.value < best.value) best = f_mid;
    if (f_mid.slope == 0.0) break;
    if (f_mid.slope < 0.0) {
      lo = mid;
      f_lo = f_mid;
      w_lo = f_mid.slope;
      if (side == -1) w_hi *= 0.5;
      side = -1;
    } else {
      hi = mid;
      f_hi = f_mid;
      w_hi = f_mid.slope;
      if (side == 1) w_lo *= 0.5;
      side = 1;
    }
  }
  return best;
}

double OneStep::worst_case(double x) const {
  if (constant_) return u_.u.values()[0];
  return minimise_lambda(model_.flow(t_, x), 0.0).value;
}

double OneStep::worst_case_primal(double x) const {
  const double center = model_.flow(t_, x);
  const double T = expectation(x);
  if (constant_ || r_cap_ == 0.0) return T;
  const double p = pen_.transport_order();
  const DiscreteMeasure shifted = shift(mu_, center);

  const auto objective = [&](double budget) {
    const double r = std::pow(std::max(budget, 0.0), 1.0 / p);
    const double pen = pen_.phi_t(t_, r);
    if (std::isinf(pen)) return -kInf;
    return ball_sup(shifted, p, r, payoff_).value - pen;
  };

  constexpr int kScan = 33;
  std::vector<double> budgets(kScan + 1);
  std::vector<double> values(kScan + 1);
  budgets[0] = 0.0;
  values[0] = T;
  for (int j = 1; j <= kScan; ++j) {
    const double r = r_cap_ * std::ldexp(1.0, j - kScan);
    budgets[j] = std::pow(r, p);
    values[j] = objective(budgets[j]);
  }
  const auto best_it = std::max_element(values.begin(), values.end());
  const auto j = static_cast<std::size_t>(best_it - values.begin());
  double best = *best_it;

  // Concave in the budget: refine between the scan neighbours.
  double a = j == 0 ? 0.0 : budgets[j - 1];
  double c = j == kScan ? budgets[kScan] : budgets[j + 1];
  const auto neg = [&](double B) { return -objective(B); };
  double x1 = c - kGolden * (c - a);
  double x2 = a + kGolden * (c - a);
  double f1 = neg(x1);
  double f2 = neg(x2);
  for (int it = 0; it < 64; ++it) {
    if (f1 <= f2) {
      c = x2;
      x2 = x1;
      f2 = f1;
      x1 = c - kGolden * (c - a);
      f1 = neg(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (c - a);
      f2 = neg(x2);
    }
    best = std::max({best, -f1, -f2});
  }
  if (pen_.kind() == PenaltyKind::Ball) {
    // The domain edge of the indicator is the natural maximiser.
    const double edge = std::min(r_cap_, t_ * std::exp(pen_.growth() * t_) * pen_.ball_radius());
    best = std::max(best, objective(std::pow(edge, p)));
  }
  return std::max(best, T);
}

double OneStep::drift_shift(double x, bool generalised) const {
  if (t_ == 0.0) return u_.u(x);
  if (!model_.identity_flow() && !generalised) {
    throw InvalidArgument("drift_shift: model flow is not the identity");
  }
  if (constant_) return u_.u.values()[0];
  const GridFunction& g = u_.u;
  const double base = model_.flow(t_, x);
  const auto ys = mu_.atoms();
  const auto ws = mu_.weights();
  const double theta_max = r_cap_ / t_;
  const double c = pen_.growth();
  const double damp = std::exp(-c * t_);
  const double grow = std::exp(c * t_);
  const auto penalty = [&](double theta) { return t_ * pen_.phi(damp * std::abs(theta)); };
  if (theta_max == 0.0) return mu_.expectation([&](double y) { return g(base + y); });

  // S(theta) = sum_i w_i u(base + y_i + t theta) is piecewise linear in theta
  // with kinks where base + y_i + t theta hits a node. Sweep the kinks from
  // -theta_max, carrying the slope.
  const std::size_t n = g.size();
  const double x_min = g.x_min();
  const double dx = g.dx();
  const auto slope_right_of = [&](double z) {
    if (z < x_min) return g.left_slope();
    if (z >= g.x_max()) return g.right_slope();
    const auto k = std::min(static_cast<std::size_t>((z - x_min) / dx), n - 2);
    return g.segment_slope(k);
  };
  const auto kink = [&](std::size_t k) {
    const double left = k == 0 ? g.left_slope() : g.segment_slope(k - 1);
    const double right = k + 1 == n ? g.right_slope() : g.segment_slope(k);
    return right - left;
  };

  struct Event {
    double theta;
    double jump;
  };
  std::vector<Event> events;
  double value = 0.0;
  double slope = 0.0;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const double q = base + ys[i];
    const double lo = q - t_ * theta_max;
    const double hi = q + t_ * theta_max;
    value += ws[i] * g(lo);
    slope += ws[i] * t_ * slope_right_of(lo);
    if (hi < x_min || lo >= g.x_max()) continue;
    // Nodes strictly inside (lo, hi); a node at lo is already in the slope.
    auto k = static_cast<std::size_t>(std::max(0.0, std::floor((lo - x_min) / dx)));
    while (k < n && g.node(k) <= lo) ++k;
    for (; k < n && g.node(k) < hi; ++k) {
      events.push_back({(g.node(k) - q) / t_, ws[i] * t_ * kink(k)});
    }
  }
  events.push_back({0.0, 0.0});
  events.push_back({theta_max, 0.0});
  std::sort(events.begin(), events.end(),
            [](const Event& a, const Event& b) { return a.theta < b.theta; });

  double best = -kInf;
  const auto consider = [&](double theta, double s) {
    const double pen = penalty(theta);
    if (std::isfinite(pen)) best = std::max(best, s - pen);
  };
  double ta = -theta_max;
  consider(ta, value);
  for (const Event& e : events) {
    const double tb = std::clamp(e.theta, -theta_max, theta_max);
    if (tb > ta) {
      // Linear piece on [ta, tb] with slope `slope`.
      double th;
      if (ta >= 0.0) {
        th = grow * pen_.maximize_linear(slope * grow / t_, damp * ta, damp * tb);
      } else {
        th = -grow * pen_.maximize_linear(-slope * grow / t_, damp * -tb, damp * -ta);
      }
      th = std::clamp(th, ta, tb);
      consider(th, value + slope * (th - ta));
      value += slope * (tb - ta);
      consider(tb, value);
      ta = tb;
    }
    slope += e.jump;
  }
  return best;
}

double OneStep::martingale(double x) const {
  if (std::abs(mu_.mean()) > 1e-10) {
    throw InvalidArgument("martingale: reference noise is not centred");
  }
  if (constant_) return u_.u.values()[0];
  const double center = model_.flow(t_, x);
  const double lip = payoff_.lipschitz();
  if (lip == 0.0 || budget_cap_ == 0.0) return expectation(x);
  // G(tilt) = inf_lambda F(lambda, tilt) is convex with -displacement as a
  // subgradient; its minimiser lies in [-lip, lip].
  double warm = 0.0;
  const auto G = [&](double tilt) {
    const DualValue g = minimise_lambda(center, tilt, warm);
    warm = g.lambda;
    return g;
  };
  double best = G(0.0).value;
  double lo = -lip;
  double hi = lip;
  DualValue g_lo = G(lo);
  DualValue g_hi = G(hi);
  best = std::min({best, g_lo.value, g_hi.value});
  if (-g_lo.displacement >= 0.0) return best;
  if (-g_hi.displacement <= 0.0) return best;
  // The tangents at lo and hi bound min G from below.
  double v_lo = g_lo.value, v_hi = g_hi.value;
  double d_lo = -g_lo.displacement;
  double d_hi = -g_hi.displacement;
  for (int it = 0; it < 100 && hi - lo > kTiltRelTol * lip; ++it) {
    const double cross = (v_hi - v_lo + d_lo * lo - d_hi * hi) / (d_lo - d_hi);
    const double floor = v_lo + d_lo * (cross - lo);
    if (best - floor <= kTiltAbsTol * (1.0 + std::abs(best))) break;
    double mid = std::clamp(cross, lo, hi);
    if (it % 4 == 3 || !(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
    const DualValue g = G(mid);
    best = std::min(best, g.value);
    const double d = -g.displacement;
    if (d == 0.0) break;
    if (d < 0.0) {
      lo = mid;
      v_lo = g.value;
      d_lo = d;
    } else {
      hi = mid;
      v_hi = g.value;
      d_hi = d;
    }
  }
  return best;
}

bool OneStep::touches_boundary(double x) const {
  const double center = model_.flow(t_, x);
  const double reach =
      r_cap_ == 0.0 ? 0.0 : r_cap_ / std::pow(mu_.min_weight(), 1.0 / pen_.transport_order());
  return center + mu_.min_atom() - reach < u_.u.x_min() ||
         center + mu_.max_atom() + reach > u_.u.x_max();
}

bool OneStep::flow_clamped(double x) const { return model_.flow_checked(t_, x).clamped; }

double apply_T(const ReferenceModel& model, double t, const TestFunction& u, double x, int n_atoms) {
  return OneStep(model, Penalty::ball(0.0), t, n_atoms, u).expectation(x);
}

double apply_I(const ReferenceModel& model, const Penalty& pen, double t, const TestFunction& u,
               double x, int n_atoms) {
  return OneStep(model, pen, t, n_atoms, u).worst_case(x);
}

double apply_E(const ReferenceModel& model, const Penalty& pen, double t, const TestFunction& u,
               double x, int n_atoms, bool generalised) {
  if (t < 0.0) throw InvalidArgument("apply_E: t must be >= 0");
  return OneStep(model, pen, t, n_atoms, u).drift_shift(x, generalised);
}

double apply_I_mart(const ReferenceModel& model, const Penalty& pen, double t,
                    const TestFunction& u, double x, int n_atoms) {
  return OneStep(model, pen, t, n_atoms, u).martingale(x);
}

}  // namespace robsem
