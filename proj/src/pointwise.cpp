#include "fracp/pointwise.hpp"

#include <algorithm>
#include <cmath>

#include "fracp/error.hpp"

namespace fracp {

namespace {

void require_p(double p) {
  if (!(p > 1.0 && std::isfinite(p))) throw Error(ErrorCode::InvalidParams, "requires 1<p<inf");
}

// base^expo * factor with the convention 0 * anything = 0, so that singular powers
// multiplied by a vanishing factor stay finite.
double pow_times(double base, double expo, double factor) {
  if (factor == 0.0) return 0.0;
  return std::pow(base, expo) * factor;
}

CheckResult make(double lhs, double rhs, double scale, bool lhs_is_larger) {
  CheckResult r;
  r.lhs = lhs;
  r.rhs = rhs;
  const double s = std::max({std::abs(lhs), std::abs(rhs), 1.0, scale});
  r.slack = (lhs_is_larger ? lhs - rhs : rhs - lhs) / s;
  r.holds = r.slack >= -kPointwiseSlack;
  return r;
}

}  // namespace

double j_p(double t, double p) {
  if (t == 0.0) return 0.0;
  return std::pow(std::abs(t), p - 2.0) * t;
}

double j_p_tau(double t, double p, double tau) {
  if (t == 0.0) return 0.0;
  return std::pow(tau + t * t, 0.5 * (p - 2.0)) * t;
}

ConvexTestFunction ConvexTestFunction::smooth_abs(double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "smooth_abs needs eps > 0");
  return {Kind::SmoothAbs, eps};
}

ConvexTestFunction ConvexTestFunction::square() { return {Kind::Square, 0.0}; }

ConvexTestFunction ConvexTestFunction::exp() { return {Kind::Exp, 0.0}; }

double ConvexTestFunction::value(double t) const {
  switch (kind_) {
    case Kind::SmoothAbs:
      return std::hypot(eps_, t);
    case Kind::Square:
      return t * t;
    case Kind::Exp:
      return std::exp(t);
  }
  return 0.0;
}

double ConvexTestFunction::derivative(double t) const {
  switch (kind_) {
    case Kind::SmoothAbs:
      return t / std::hypot(eps_, t);
    case Kind::Square:
      return 2.0 * t;
    case Kind::Exp:
      return std::exp(t);
  }
  return 0.0;
}

double ConvexTestFunction::difference(double a, double b) const {
  switch (kind_) {
    case Kind::SmoothAbs:
      return (a - b) * (a + b) / (std::hypot(eps_, a) + std::hypot(eps_, b));
    case Kind::Square:
      return (a - b) * (a + b);
    case Kind::Exp:
      return std::exp(b) * std::expm1(a - b);
  }
  return 0.0;
}

bool ConvexTestFunction::convex_on_grid(double lo, double hi, int points) const {
  double prev = derivative(lo);
  for (int i = 1; i < points; ++i) {
    const double t = lo + (hi - lo) * i / (points - 1);
    const double d = derivative(t);
    if (d < prev) return false;
    prev = d;
  }
  return true;
}

CheckResult check_convex_subsolution(double a, double b, double A, double B, double tau,
                                     const ConvexTestFunction& f, double p) {
  require_p(p);
  if (A < 0.0 || B < 0.0 || tau < 0.0) {
    throw Error(ErrorCode::NegativeWeight, "A, B and tau must be nonnegative");
  }
  const double jab = j_p(a - b, p);
  const double ta = A * j_p_tau(f.derivative(a), p, tau);
  const double tb = B * j_p_tau(f.derivative(b), p, tau);
  const double lhs = jab * (ta - tb);
  const double df = f.difference(a, b);
  const double base = tau * (a - b) * (a - b) + df * df;
  const double phi = pow_times(base, 0.5 * (p - 2.0), df);
  const double rhs = phi * (A - B);
  const double scale = std::abs(jab) * (std::abs(ta) + std::abs(tb)) + std::abs(phi) * (A + B);
  return make(lhs, rhs, scale, true);
}

double moser_g(double t, const MoserProfile& g) {
  const double m = std::min(t, g.cap) + g.delta;
  return g.decreasing ? std::pow(m, -g.beta) : std::pow(m, g.beta);
}

double moser_primitive(double t, const MoserProfile& g, double p) {
  const double m = std::min(t, g.cap);
  const double c = std::pow(g.beta, 1.0 / p);
  if (!g.decreasing) {
    const double e = (g.beta + p - 1.0) / p;
    return c / e * (std::pow(m + g.delta, e) - std::pow(g.delta, e));
  }
  const double e = 1.0 - (g.beta + 1.0) / p;
  if (std::abs(e) < 1e-12) return c * (std::log(m + g.delta) - std::log(g.delta));
  return c / e * (std::pow(m + g.delta, e) - std::pow(g.delta, e));
}

CheckResult check_moser_power(double a, double b, const MoserProfile& g, double p) {
  require_p(p);
  if (a < 0.0 || b < 0.0) throw Error(ErrorCode::NegativeInput, "a and b must be nonnegative");
  if (!(g.beta > 0.0) || g.delta < 0.0 || !(g.cap > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "requires beta > 0, delta >= 0, cap > 0");
  }
  if (g.decreasing && !(g.delta > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "decreasing profile needs delta > 0");
  }
  const double jab = j_p(a - b, p);
  const double ga = moser_g(a, g), gb = moser_g(b, g);
  const double lhs = g.decreasing ? jab * (gb - ga) : jab * (ga - gb);
  const double Ga = moser_primitive(a, g, p), Gb = moser_primitive(b, g, p);
  const double rhs = std::pow(std::abs(Ga - Gb), p);
  const double scale = std::abs(jab) * std::max(ga, gb) +
                       p * std::pow(std::abs(Ga - Gb), p - 1.0) * std::max(std::abs(Ga), std::abs(Gb));
  return make(lhs, rhs, scale, true);
}

CheckResult check_power_difference(double a, double b, double beta, double p) {
  require_p(p);
  if (a < 0.0 || b < 0.0) throw Error(ErrorCode::NegativeInput, "a and b must be nonnegative");
  if (!(beta >= 1.0)) throw Error(ErrorCode::InvalidArgument, "requires beta >= 1");
  const double d = std::abs(a - b);
  const double lhs = pow_times(d, p, std::pow(a, beta - 1.0) + std::pow(b, beta - 1.0));
  const double ab = std::pow(a, beta), bb = std::pow(b, beta);
  const double C = std::max(1.0, 3.0 - beta);
  const double rhs = C * j_p(a - b, p) * (ab - bb);
  const double scale = C * std::abs(j_p(a - b, p)) * std::max(ab, bb);
  return make(lhs, rhs, scale, false);
}

CheckResult check_beta_p(double beta, double p) {
  if (!(beta > 0.0)) throw Error(ErrorCode::InvalidArgument, "requires beta > 0");
  if (!(p >= 1.0)) throw Error(ErrorCode::InvalidArgument, "requires p >= 1");
  const double value = std::pow(1.0 / beta, 1.0 / p) * (beta + (p - 1.0)) / p;
  return make(value, 1.0, 0.0, true);
}

CheckResult check_two_sign_profile(double U, double V, double t, double p) {
  require_p(p);
  if (U * V > 0.0) throw Error(ErrorCode::SameSign, "requires U V <= 0");
  const double first = std::pow(std::abs(U - t * V), p);
  const double coef = j_p(U - V, p) * V;
  const double second = coef * std::pow(std::abs(t), p);
  const double g_t = first + second;
  const double g_1 = j_p(U - V, p) * U;
  return make(g_t, g_1, first + std::abs(second), false);
}

CheckResult check_nodal_lower_bound(double a, double b, double p) {
  require_p(p);
  if (a * b > 0.0) throw Error(ErrorCode::SameSign, "requires a b <= 0");
  const double lhs = j_p(a - b, p) * a;
  const double base = p <= 2.0 ? std::abs(a - b) : std::abs(a);
  const double rhs = std::pow(std::abs(a), p) - (p - 1.0) * pow_times(base, p - 2.0, a * b);
  return make(lhs, rhs, 0.0, true);
}

CheckResult check_split_power(double a, double b, double p, double c_p) {
  require_p(p);
  const double lhs = std::pow(std::abs(a - b), p);
  const double mixed = c_p * pow_times(a * a + b * b, 0.5 * (p - 2.0), std::abs(a * b));
  const double rhs = std::pow(std::abs(a), p) + std::pow(std::abs(b), p) + mixed;
  return make(lhs, rhs, 0.0, false);
}

namespace {

// ((1+m)^p - 1 - m^p) / (m (1+m^2)^{(p-2)/2}) without cancellation at either end.
double cp_ratio(double m, double p) {
  double num;
  if (m <= 1.0) {
    num = std::expm1(p * std::log1p(m)) - std::pow(m, p);
  } else {
    num = std::pow(m, p) * std::expm1(p * std::log1p(1.0 / m)) - 1.0;
  }
  const double den = m * std::pow(1.0 + m * m, 0.5 * (p - 2.0));
  return num / den;
}

}  // namespace

double estimate_cp(double p) {
  require_p(p);
  constexpr int kGrid = 10000;
  const double lo = std::log(1e-6), hi = std::log(1e6);
  const double step = (hi - lo) / (kGrid - 1);
  int arg = 0;
  double best = -1.0;
  for (int k = 0; k < kGrid; ++k) {
    const double v = cp_ratio(std::exp(lo + k * step), p);
    if (v > best) {
      best = v;
      arg = k;
    }
  }
  // Golden-section in log m over the neighbouring grid cells.
  double x0 = lo + std::max(arg - 1, 0) * step;
  double x3 = lo + std::min(arg + 1, kGrid - 1) * step;
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = x3 - phi * (x3 - x0), x2 = x0 + phi * (x3 - x0);
  double f1 = cp_ratio(std::exp(x1), p), f2 = cp_ratio(std::exp(x2), p);
  for (int it = 0; it < 100 && x3 - x0 > 1e-14; ++it) {
    if (f1 > f2) {
      x3 = x2;
      x2 = x1;
      f2 = f1;
      x1 = x3 - phi * (x3 - x0);
      f1 = cp_ratio(std::exp(x1), p);
    } else {
      x0 = x1;
      x1 = x2;
      f1 = f2;
      x2 = x0 + phi * (x3 - x0);
      f2 = cp_ratio(std::exp(x2), p);
    }
  }
  best = std::max({best, f1, f2});
  return 1.001 * std::max(best, p);
}

CheckResult check_jp_strong_monotone(double a, double b, double p) {
  require_p(p);
  const double ja = j_p(a, p), jb = j_p(b, p);
  const double d = b - a;
  if (p <= 2.0) {
    const double w = std::pow(a * a + b * b, 0.5 * (2.0 - p));
    const double lhs = w * (jb - ja) * d;
    const double rhs = (p - 1.0) * d * d;
    return make(lhs, rhs, w * (std::abs(ja) + std::abs(jb)) * std::abs(d), true);
  }
  const double lhs = (jb - ja) * d;
  const double rhs = std::pow(2.0, 2.0 - p) * std::pow(std::abs(d), p);
  return make(lhs, rhs, (std::abs(ja) + std::abs(jb)) * std::abs(d), true);
}

CheckResult check_jp_monotone(double a, double b, double p) {
  require_p(p);
  const double ja = j_p(a, p), jb = j_p(b, p);
  CheckResult r = make((ja - jb) * (a - b), 0.0, 0.0, true);
  if (j_p(-a, p) != -ja || j_p(-b, p) != -jb) {
    r.holds = false;
    r.slack = -1.0;
  }
  return r;
}

CheckResult check_odd_loop(double U, double V, double w1, double w2, double p) {
  require_p(p);
  if (U * V > 0.0) throw Error(ErrorCode::SameSign, "requires U V <= 0");
  if (std::abs(w1 * w1 + w2 * w2 - 1.0) > 1e-12) {
    throw Error(ErrorCode::NotOnCircle, "omega must lie on the unit circle");
  }
  const double first = j_p(w1 * U - w1 * V, p) * w1 * U;
  const double second = j_p(w2 * U - w2 * V, p) * w2 * V;
  const double lhs = first - second;
  const double rhs = std::pow(std::abs(w1 * U - w2 * V), p);
  const double scale = std::pow(std::abs(w1 * U) + std::abs(w2 * V), p);
  return make(lhs, rhs, scale, true);
}

}  // namespace fracp
