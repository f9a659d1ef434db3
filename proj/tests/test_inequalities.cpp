#include <gtest/gtest.h>

#include <cmath>

#include "fracp/inequalities.hpp"
#include "helpers.hpp"

using namespace fracp;
using fracp::testing::intervals;
using fracp::testing::kernel;

namespace {

SolverOptions tight() {
  SolverOptions o;
  o.grad_tol = 1e-10;
  return o;
}

const Params kP2{0.5, 2.0, 1};
constexpr double kH = 1.0 / 32.0;

GridFunction bump(const LatticeDomain& dom, double center, double r) {
  GridFunction u = GridFunction::Zero(static_cast<Eigen::Index>(dom.size()));
  for (std::size_t i = 0; i < dom.size(); ++i) {
    const double y = (dom.coordinate(i)[0] - center) / r;
    if (std::abs(y) < 1.0) u[static_cast<Eigen::Index>(i)] = 1.0 - y * y;
  }
  return u;
}

}  // namespace

TEST(FaberKrahn, IntervalIsEqualityCase) {
  const auto dom = build_lattice(intervals({{0.0, 1.0}}), kH, kP2);
  const auto r = faber_krahn_check(dom, kP2, tight());
  EXPECT_TRUE(r.holds);
  EXPECT_LT(std::abs(r.margin), 0.02);
  EXPECT_DOUBLE_EQ(r.measure, 1.0);
}

TEST(FaberKrahn, SplitDomainsExceedBall) {
  for (const ShapeSpec& spec : {intervals({{0.0, 0.5}, {3.0, 3.5}}), intervals({{0.0, 0.7}, {1.5, 1.8}})}) {
    const auto dom = build_lattice(spec, kH, kP2);
    const auto r = faber_krahn_check(dom, kP2, tight());
    EXPECT_TRUE(r.holds);
    EXPECT_GT(r.lambda1, r.ball_bound);
    EXPECT_NEAR(r.measure, 1.0, 1e-12);
  }
}

TEST(HKS, EqualIntervalsAreStrict) {
  const auto two = build_lattice(intervals({{0.0, 1.0}, {4.0, 5.0}}), kH, kP2);
  const auto r2 = hks_check(two, kP2, tight());
  EXPECT_TRUE(r2.strict);
  EXPECT_TRUE(r2.holds_with_slack);
  EXPECT_DOUBLE_EQ(r2.ball_measure, 1.0);
  EXPECT_DOUBLE_EQ(r2.scaled_bound, r2.lambda1_ball);

  const auto one = build_lattice(intervals({{0.0, 2.0}}), kH, kP2);
  const auto r1 = hks_check(one, kP2, tight());
  EXPECT_TRUE(r1.strict);
  EXPECT_GT(r1.lambda2 / r1.scaled_bound, r2.lambda2 / r2.scaled_bound);
}

TEST(HKSSweep, GapPositiveAndDecreasing) {
  const auto rows = hks_sweep(0.5, {2.0, 4.0, 8.0}, kP2, 1.0 / 32.0, tight());
  ASSERT_EQ(rows.size(), 3u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_GT(rows[i].gap, 0.0);
    EXPECT_DOUBLE_EQ(rows[i].lambda1_ball, rows[0].lambda1_ball);
    EXPECT_DOUBLE_EQ(rows[i].scaled_bound, rows[i].lambda1_ball);
    if (i > 0) {
      EXPECT_LT(rows[i].gap, rows[i - 1].gap);
    }
  }
}

TEST(HKSSweep, RejectsBadDistances) {
  try {
    hks_sweep(0.5, {0.8}, kP2, kH);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OverlappingBalls);
  }
  EXPECT_THROW(hks_sweep(0.5, {}, kP2, kH), Error);
  EXPECT_THROW(hks_sweep(0.5, {4.0, 2.0}, kP2, kH), Error);
}

TEST(Poincare, ZeroFunctionAndEmptyZeroSet) {
  const auto dom = build_lattice(intervals({{-1.0, 1.0}}), kH, kP2);
  const auto z = poincare_localized_check(dom, GridFunction::Zero(static_cast<Eigen::Index>(dom.size())), 1.0, kP2);
  EXPECT_EQ(z.lhs, 0.0);
  EXPECT_EQ(z.rhs, 0.0);
  EXPECT_TRUE(z.holds);
  try {
    poincare_localized_check(dom, GridFunction::Ones(static_cast<Eigen::Index>(dom.size())), 1.0, kP2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyZeroSet);
  }
}

TEST(Poincare, InnerSupportForm) {
  const Params p{0.5, 2.5, 1};
  const auto dom = build_lattice(intervals({{-1.0, 1.0}}), 1.0 / 64.0, p);
  const GridFunction u = bump(dom, 0.0, 0.5);
  const auto r = poincare_localized_check(dom, u, 1.0, p, 0.5);
  EXPECT_TRUE(r.holds);
  ASSERT_TRUE(r.holds_inner.has_value());
  EXPECT_TRUE(*r.holds_inner);
  EXPECT_GT(r.zero_measure, 0.9);
}

TEST(Sobolev, ZeroAndDegeneration) {
  const Params p{0.4, 2.0, 1};
  const auto dom = build_lattice(intervals({{-1.0, 1.0}}), 1.0 / 64.0, p);
  const auto z = sobolev_localized_check(dom, GridFunction::Zero(static_cast<Eigen::Index>(dom.size())),
                                         {0.0, 0.0}, 0.5, 1.0, p);
  EXPECT_EQ(z.lhs, 0.0);
  EXPECT_EQ(z.seminorm, 0.0);

  double prev = 0.0;
  for (double r : {0.3, 0.6, 0.9}) {
    const auto rep = sobolev_localized_check(dom, bump(dom, 0.0, r), {0.0, 0.0}, r, 1.0, p);
    EXPECT_GT(rep.ratio_seminorm, prev) << "r = " << r;
    prev = rep.ratio_seminorm;
  }
  EXPECT_THROW(sobolev_localized_check(dom, bump(dom, 0.0, 0.8), {0.0, 0.0}, 0.5, 1.0, p), Error);
  try {
    sobolev_localized_check(dom, bump(dom, 0.0, 0.5), {0.0, 0.0}, 0.5, 1.0, Params{0.6, 2.0, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ExponentOutOfRange);
  }
}

TEST(Linf, DiskEigenfunction) {
  const Params p{0.5, 2.0, 2};
  ShapeSpec disk;
  disk.primitives.push_back(Ball{{0.0, 0.0}, 1.0});
  const auto K = assemble_kernel(build_lattice(disk, 0.125, p), p);
  const auto r = solve_lambda1(K, tight());
  const auto rep = linf_bound_check(K, r, 100.0);
  EXPECT_DOUBLE_EQ(rep.lhs, r.u.maxCoeff());
  EXPECT_NEAR(rep.rhs, std::pow(rep.c_tilde * r.lambda, 2.0 / (0.5 * 4.0)), 1e-12 * rep.rhs);
  EXPECT_TRUE(rep.holds);
  EXPECT_GT(linf_bound_check(K, r, 200.0).rhs, rep.rhs);

  const auto K1 = kernel(intervals({{0.0, 1.0}}), kH, Params{0.6, 2.0, 1});
  const auto r1 = solve_lambda1(K1, tight());
  try {
    linf_bound_check(K1, r1, 100.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ExponentOutOfRange);
  }
}
