#pragma once

#include <limits>

namespace fracp {

/// Outcome of a scalar inequality. slack is the signed margin divided by the rounding
/// scale, oriented so that the inequality holds iff slack >= -kPointwiseSlack.
struct CheckResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool holds = true;
};

inline constexpr double kPointwiseSlack = 1e-12;

/// |t|^{p-2} t, with j_p(0) = 0.
double j_p(double t, double p);

/// (tau + t^2)^{(p-2)/2} t, zero at t = 0.
double j_p_tau(double t, double p, double tau);

class ConvexTestFunction {
 public:
  enum class Kind { SmoothAbs, Square, Exp };

  /// sqrt(eps^2 + t^2)
  static ConvexTestFunction smooth_abs(double eps);
  static ConvexTestFunction square();
  static ConvexTestFunction exp();

  Kind kind() const { return kind_; }
  double eps() const { return eps_; }
  double value(double t) const;
  double derivative(double t) const;
  /// f(a) - f(b) evaluated without cancellation.
  double difference(double a, double b) const;
  /// Derivative nondecreasing on a uniform grid of [lo, hi].
  bool convex_on_grid(double lo, double hi, int points = 1001) const;

 private:
  ConvexTestFunction(Kind kind, double eps) : kind_(kind), eps_(eps) {}
  Kind kind_;
  double eps_;
};

/// J_p(a-b) [A J_{p,tau}(f'(a)) - B J_{p,tau}(f'(b))]
///   >= (tau (a-b)^2 + (f(a)-f(b))^2)^{(p-2)/2} (f(a)-f(b)) (A-B).
CheckResult check_convex_subsolution(double a, double b, double A, double B, double tau,
                                     const ConvexTestFunction& f, double p);

/// g(t) = (min{t, cap} + delta)^beta on t >= 0, or its reciprocal power when decreasing.
struct MoserProfile {
  double beta = 1.0;
  double delta = 0.0;
  double cap = std::numeric_limits<double>::infinity();
  bool decreasing = false;
};

double moser_g(double t, const MoserProfile& g);
/// int_0^t |g'|^{1/p}, in closed form.
double moser_primitive(double t, const MoserProfile& g, double p);

/// J_p(a-b)(g(a)-g(b)) >= |G(a)-G(b)|^p for increasing g; for decreasing g the left
/// side uses g(b)-g(a) and G is built from -g'.
CheckResult check_moser_power(double a, double b, const MoserProfile& g, double p);

/// |a-b|^p (a^{beta-1} + b^{beta-1}) <= max{1, 3-beta} J_p(a-b) (a^beta - b^beta), a, b >= 0.
CheckResult check_power_difference(double a, double b, double beta, double p);

/// (1/beta)^{1/p} (beta+p-1)/p >= 1; lhs carries the value.
CheckResult check_beta_p(double beta, double p);

/// g(t) = |U - tV|^p + J_p(U-V) V |t|^p <= g(1), for U V <= 0. lhs = g(t), rhs = g(1).
CheckResult check_two_sign_profile(double U, double V, double t, double p);

/// J_p(a-b) a >= |a|^p - (p-1) |a-b|^{p-2} a b for p <= 2, and with |a|^{p-2} for p > 2;
/// requires a b <= 0.
CheckResult check_nodal_lower_bound(double a, double b, double p);

/// |a-b|^p <= |a|^p + |b|^p + c_p (a^2+b^2)^{(p-2)/2} |a b|.
CheckResult check_split_power(double a, double b, double p, double c_p);

/// 1.001 times the larger of p and the numerical supremum over m > 0 of
/// ((1+m)^p - 1 - m^p) / (m (1+m^2)^{(p-2)/2}).
double estimate_cp(double p);

/// Strong monotonicity of J_p: for p <= 2
///   (a^2+b^2)^{(2-p)/2} (J_p(b)-J_p(a)) (b-a) >= (p-1) |b-a|^2,
/// for p > 2  (J_p(b)-J_p(a)) (b-a) >= 2^{2-p} |b-a|^p.
CheckResult check_jp_strong_monotone(double a, double b, double p);

/// (J_p(a) - J_p(b)) (a - b) >= 0 together with exact oddness of J_p.
CheckResult check_jp_monotone(double a, double b, double p);

/// J_p(w1 U - w1 V) w1 U - J_p(w2 U - w2 V) w2 V >= |w1 U - w2 V|^p for U V <= 0 and
/// (w1, w2) on the unit circle.
CheckResult check_odd_loop(double U, double V, double w1, double w2, double p);

}  // namespace fracp
