#include <gtest/gtest.h>

#include <cmath>

#include "fracp/battery.hpp"
#include "fracp/error.hpp"
#include "fracp/pointwise.hpp"

using namespace fracp;

namespace {

void expect_code(ErrorCode code, const auto& fn) {
  try {
    fn();
    ADD_FAILURE() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code);
  }
}

}  // namespace

TEST(Jp, Examples) {
  EXPECT_DOUBLE_EQ(j_p(-3.0, 2.0), -3.0);
  EXPECT_DOUBLE_EQ(j_p(2.0, 3.0), 4.0);
  EXPECT_DOUBLE_EQ(j_p(4.0, 1.5), 2.0);
  EXPECT_EQ(j_p(0.0, 1.3), 0.0);
  EXPECT_EQ(j_p_tau(0.0, 1.3, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(j_p_tau(2.0, 3.0, 0.0), 4.0);
  EXPECT_DOUBLE_EQ(j_p_tau(1.0, 4.0, 3.0), 4.0);
}

TEST(ConvexSubsolution, Examples) {
  const auto sq = ConvexTestFunction::square();
  const auto r = check_convex_subsolution(1.0, 0.0, 1.0, 0.0, 0.0, sq, 2.0);
  EXPECT_DOUBLE_EQ(r.lhs, 2.0);
  EXPECT_DOUBLE_EQ(r.rhs, 1.0);
  EXPECT_TRUE(r.holds);

  const auto eq = check_convex_subsolution(0.7, 0.7, 2.0, 3.0, 0.5, ConvexTestFunction::exp(), 3.0);
  EXPECT_EQ(eq.lhs, 0.0);
  EXPECT_EQ(eq.rhs, 0.0);
  EXPECT_TRUE(eq.holds);

  expect_code(ErrorCode::NegativeWeight,
              [&] { check_convex_subsolution(1.0, 0.0, -1.0, 0.0, 0.0, sq, 2.0); });
  expect_code(ErrorCode::NegativeWeight,
              [&] { check_convex_subsolution(1.0, 0.0, 1.0, 0.0, -1.0, sq, 2.0); });
}

TEST(ConvexTestFunction, Convexity) {
  EXPECT_TRUE(ConvexTestFunction::smooth_abs(0.1).convex_on_grid(-5.0, 5.0));
  EXPECT_TRUE(ConvexTestFunction::square().convex_on_grid(-5.0, 5.0));
  EXPECT_TRUE(ConvexTestFunction::exp().convex_on_grid(-5.0, 5.0));
  const auto f = ConvexTestFunction::exp();
  const double d = std::ldexp(1.0, -30);
  EXPECT_NEAR(f.difference(1.0, 1.0 - d), -std::exp(1.0) * std::expm1(-d), 1e-15 * d);
  EXPECT_THROW(ConvexTestFunction::smooth_abs(0.0), Error);
}

TEST(MoserPower, IdentityProfileEquality) {
  const MoserProfile g{1.0, 0.0};
  const auto r = check_moser_power(2.0, 1.0, g, 2.0);
  EXPECT_DOUBLE_EQ(r.lhs, 1.0);
  EXPECT_DOUBLE_EQ(r.rhs, 1.0);
  EXPECT_TRUE(r.holds);
  EXPECT_TRUE(check_moser_power(1.5, 1.5, MoserProfile{3.0, 0.2}, 2.5).holds);
}

TEST(MoserPower, PrimitiveMatchesQuadrature) {
  for (const MoserProfile& g : {MoserProfile{2.5, 0.3}, MoserProfile{1.0, 0.5, 1.2},
                                MoserProfile{0.5, 0.4, INFINITY, true}}) {
    const double p = 2.3;
    const int n = 200000;
    const double t = 2.0;
    double q = 0.0;
    for (int i = 0; i < n; ++i) {
      const double a = t * i / n, b = t * (i + 1) / n;
      const double d = std::abs(moser_g(b, g) - moser_g(a, g)) / (b - a);
      q += std::pow(d, 1.0 / p) * (b - a);
    }
    EXPECT_NEAR(moser_primitive(t, g, p), q, 1e-5 * q);
  }
}

TEST(PowerDifference, Examples) {
  const auto r = check_power_difference(1.0, 0.0, 2.0, 2.0);
  EXPECT_DOUBLE_EQ(r.lhs, 1.0);
  EXPECT_DOUBLE_EQ(r.rhs, 1.0);
  EXPECT_TRUE(r.holds);
  const auto one = check_power_difference(3.0, 1.0, 1.0, 2.5);
  EXPECT_NEAR(one.lhs, 2.0 * std::pow(2.0, 2.5), 1e-12);
  EXPECT_NEAR(one.rhs, one.lhs, 1e-12 * one.lhs);
  EXPECT_TRUE(one.holds);
  expect_code(ErrorCode::NegativeInput, [] { check_power_difference(-1.0, 0.0, 2.0, 2.0); });
}

TEST(BetaP, Examples) {
  EXPECT_DOUBLE_EQ(check_beta_p(1.0, 3.0).lhs, 1.0);
  EXPECT_TRUE(check_beta_p(1.0, 3.0).holds);
  EXPECT_NEAR(check_beta_p(7.0, 1.0).lhs, 1.0, 1e-15);
  EXPECT_TRUE(check_beta_p(7.0, 1.0).holds);
  EXPECT_GT(check_beta_p(4.0, 2.0).lhs, 1.0);
}

TEST(TwoSignProfile, Examples) {
  const auto zero = check_two_sign_profile(0.0, -2.0, 3.0, 2.5);
  EXPECT_NEAR(zero.lhs, 0.0, 1e-12 * std::pow(6.0, 2.5));
  EXPECT_NEAR(zero.rhs, 0.0, 1e-12 * std::pow(2.0, 2.5));
  EXPECT_TRUE(zero.holds);
  for (double t : {-4.0, 0.0, 0.5, 7.0}) {
    const auto r = check_two_sign_profile(1.5, 0.0, t, 2.5);
    EXPECT_DOUBLE_EQ(r.lhs, std::pow(1.5, 2.5));
    EXPECT_DOUBLE_EQ(r.rhs, std::pow(1.5, 2.5));
  }
  expect_code(ErrorCode::SameSign, [] { check_two_sign_profile(1.0, 1.0, 0.3, 2.0); });
}

TEST(NodalLowerBound, Examples) {
  const auto r = check_nodal_lower_bound(1.0, -1.0, 2.0);
  EXPECT_DOUBLE_EQ(r.lhs, 2.0);
  EXPECT_DOUBLE_EQ(r.rhs, 2.0);
  EXPECT_TRUE(r.holds);
  const auto b0 = check_nodal_lower_bound(-1.7, 0.0, 3.0);
  EXPECT_DOUBLE_EQ(b0.lhs, std::pow(1.7, 3.0));
  EXPECT_DOUBLE_EQ(b0.rhs, std::pow(1.7, 3.0));
  expect_code(ErrorCode::SameSign, [] { check_nodal_lower_bound(1.0, 1.0, 2.0); });
}

TEST(SplitPower, Examples) {
  const auto r = check_split_power(1.3, 0.0, 2.7, 0.0);
  EXPECT_DOUBLE_EQ(r.lhs, r.rhs);
  EXPECT_TRUE(check_split_power(2.0, 0.5, 3.0, 0.0).holds);
  EXPECT_TRUE(check_split_power(-2.0, -0.1, 1.4, 0.0).holds);
  EXPECT_TRUE(check_split_power(1.0, -1.0, 3.0, estimate_cp(3.0)).holds);
}

TEST(EstimateCp, KnownValues) {
  EXPECT_NEAR(estimate_cp(2.0), 2.002, 1e-9);
  EXPECT_NEAR(estimate_cp(1.5), 1.5015, 1e-9);
  EXPECT_NEAR(estimate_cp(3.0), 4.246883, 1e-6);
  expect_code(ErrorCode::InvalidParams, [] { estimate_cp(1.0); });
}

TEST(StrongMonotone, Examples) {
  const auto r = check_jp_strong_monotone(1.0, 0.0, 3.0);
  EXPECT_DOUBLE_EQ(r.lhs, 1.0);
  EXPECT_DOUBLE_EQ(r.rhs, 0.5);
  EXPECT_TRUE(r.holds);
  const auto eq = check_jp_strong_monotone(0.4, 0.4, 1.5);
  EXPECT_EQ(eq.lhs, 0.0);
  EXPECT_EQ(eq.rhs, 0.0);
  EXPECT_TRUE(check_jp_monotone(-2.0, 3.0, 1.2).holds);
}

TEST(OddLoop, Examples) {
  const auto r = check_odd_loop(1.0, -1.0, 1.0, 0.0, 2.0);
  EXPECT_DOUBLE_EQ(r.lhs, 2.0);
  EXPECT_DOUBLE_EQ(r.rhs, 1.0);
  EXPECT_TRUE(r.holds);
  expect_code(ErrorCode::SameSign, [] { check_odd_loop(1.0, 1.0, 1.0, 0.0, 2.0); });
  expect_code(ErrorCode::NotOnCircle, [] { check_odd_loop(1.0, -1.0, 1.0, 1.0, 2.0); });
}

TEST(Battery, SmallRunIsCleanAndReproducible) {
  const auto a = run_property_battery(20000, 7);
  ASSERT_EQ(a.size(), battery_checks().size());
  ASSERT_EQ(a.size(), 10u);
  for (const auto& s : a) {
    EXPECT_EQ(s.violations, 0u) << s.check << " " << s.counterexample;
    EXPECT_GE(s.worst_slack, -kPointwiseSlack);
  }
  const auto b = run_check(a[3].check, 20000, 7);
  EXPECT_EQ(b.samples, a[3].samples);
  EXPECT_EQ(b.worst_slack, a[3].worst_slack);
  EXPECT_THROW(run_check("no_such_check", 10, 1), Error);
}
