#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fracp/energy.hpp"
#include "fracp/error.hpp"
#include "helpers.hpp"

using namespace fracp;
using fracp::testing::intervals;
using fracp::testing::kernel;
using fracp::testing::random_function;

TEST(Kernel, AnalyticTailUnitCase) {
  EXPECT_DOUBLE_EQ(analytic_tail(Params{0.5, 2.0, 1}, 2.0), 1.0);
}

TEST(Kernel, UnitDistancePairWeight) {
  const auto K = kernel(intervals({{0.0, 2.0}}), 1.0, Params{0.25, 2.0, 1});
  ASSERT_EQ(K.size(), 2u);
  EXPECT_DOUBLE_EQ(K.pair_weight(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(K.pair_weight(1, 0), 1.0);
  EXPECT_DOUBLE_EQ(K.pair_weight(0, 0), 0.0);
  EXPECT_GT(K.ext_weight(0), 0.0);
  EXPECT_DOUBLE_EQ(K.ext_weight(0), K.ext_weight(1));
}

TEST(Kernel, TruncationRadiusIsHalfOddMultiple) {
  const Params p{0.5, 2.0, 1};
  const auto dom = build_lattice(intervals({{0.0, 1.0}}), 1.0 / 16.0, p);
  const double rt = truncation_radius(dom, 4.0);
  EXPECT_GE(rt, 4.0 * 2.0 * dom.bounding_radius());
  const double k = rt / dom.spacing() - 0.5;
  EXPECT_NEAR(k, std::round(k), 1e-9);
}

TEST(Energy, ZeroFunction) {
  const auto K = kernel(intervals({{0.0, 1.0}}), 0.125, Params{0.5, 2.0, 1});
  const GridFunction z = GridFunction::Zero(static_cast<Eigen::Index>(K.size()));
  EXPECT_EQ(gagliardo_energy(K, z).total, 0.0);
  EXPECT_EQ(energy_gradient(K, z).norm(), 0.0);
  EXPECT_THROW(rayleigh_quotient(K, z), Error);
}

TEST(Energy, TwoNodeInteriorSum) {
  const auto K = kernel(intervals({{0.0, 2.0}}), 1.0, Params{0.25, 2.0, 1});
  GridFunction u(2);
  u << 1.0, 0.0;
  const auto e = gagliardo_energy(K, u);
  EXPECT_DOUBLE_EQ(e.interior, 2.0);
  EXPECT_DOUBLE_EQ(e.exterior, 2.0 * K.ext_weight(0));
  EXPECT_DOUBLE_EQ(e.total, e.interior + e.exterior);
}

TEST(Energy, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(11);
  for (double p : {1.5, 2.0, 3.0}) {
    const auto K = kernel(intervals({{0.0, 1.0}}), 0.1, Params{0.4, p, 1});
    ASSERT_EQ(K.size(), 10u);
    for (int trial = 0; trial < 5; ++trial) {
      const GridFunction u = random_function(K.size(), rng);
      const GridFunction g = energy_gradient(K, u);
      GridFunction fd(g.size());
      for (Eigen::Index i = 0; i < u.size(); ++i) {
        const double step = 1e-6;
        GridFunction up = u, dn = u;
        up[i] += step;
        dn[i] -= step;
        fd[i] = (gagliardo_energy(K, up).total - gagliardo_energy(K, dn).total) / (2.0 * step);
      }
      EXPECT_LT((g - fd).norm() / g.norm(), 1e-5) << "p = " << p;
    }
  }
}

TEST(Energy, HessianMatchesGradientDifferences) {
  std::mt19937_64 rng(12);
  for (double p : {2.0, 3.0, 4.5}) {
    const auto K = kernel(intervals({{0.0, 1.0}}), 0.1, Params{0.6, p, 1});
    const GridFunction u = random_function(K.size(), rng);
    const Eigen::MatrixXd H = energy_hessian(K, u);
    Eigen::MatrixXd fd(H.rows(), H.cols());
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      const double step = 1e-6;
      GridFunction up = u, dn = u;
      up[i] += step;
      dn[i] -= step;
      fd.col(i) = (energy_gradient(K, up) - energy_gradient(K, dn)) / (2.0 * step * p);
    }
    EXPECT_LT((H - fd).norm() / H.norm(), 1e-6) << "p = " << p;
  }
}

TEST(Energy, OperatorMatrixReproducesQuadraticForm) {
  std::mt19937_64 rng(13);
  const auto K = kernel(intervals({{0.0, 1.0}, {1.5, 2.0}}), 1.0 / 16.0, Params{0.5, 2.0, 1});
  const Eigen::MatrixXd A = linear_operator_matrix(K);
  EXPECT_LT((A - A.transpose()).norm(), 1e-14 * A.norm());
  const GridFunction u = random_function(K.size(), rng);
  EXPECT_NEAR(u.dot(A * u), gagliardo_energy(K, u).total, 1e-10 * u.dot(A * u));
  const double matrix_rq = u.dot(A * u) / (K.cell_volume() * u.squaredNorm());
  EXPECT_NEAR(rayleigh_quotient(K, u), matrix_rq, 1e-12 * matrix_rq);
}

TEST(Energy, NormsAndNormalization) {
  const Params p{0.5, 2.0, 1};
  const auto K = kernel(intervals({{0.0, 1.0}}), 0.25, p);
  const GridFunction one = GridFunction::Ones(4);
  EXPECT_DOUBLE_EQ(lp_norm(one, 2.0, 0.25, 1), 1.0);
  EXPECT_DOUBLE_EQ(lp_norm(K, GridFunction::Zero(4)), 0.0);
  const GridFunction n = normalize(K, 2.0 * one);
  EXPECT_LT((n - one).norm(), 1e-15);

  std::mt19937_64 rng(14);
  const GridFunction u = random_function(4, rng);
  EXPECT_EQ(normalize(K, -u), -normalize(K, u));
  EXPECT_THROW(normalize(K, GridFunction::Zero(4)), Error);
}

TEST(Energy, RayleighQuotientIsHomogeneous) {
  std::mt19937_64 rng(15);
  const auto K = kernel(intervals({{0.0, 1.0}}), 1.0 / 32.0, Params{0.3, 2.7, 1});
  const GridFunction u = random_function(K.size(), rng);
  const double r = rayleigh_quotient(K, u);
  EXPECT_NEAR(rayleigh_quotient(K, -5.0 * u), r, 1e-12 * r);
}

TEST(Energy, TranslationInvariance) {
  std::mt19937_64 rng(16);
  const Params p{0.5, 1.7, 1};
  const auto K0 = kernel(intervals({{0.0, 1.0}}), 1.0 / 32.0, p);
  const auto K5 = kernel(intervals({{5.0, 6.0}}), 1.0 / 32.0, p);
  ASSERT_EQ(K0.size(), K5.size());
  const GridFunction u = random_function(K0.size(), rng);
  EXPECT_NEAR(gagliardo_energy(K0, u).total, gagliardo_energy(K5, u).total,
              1e-12 * gagliardo_energy(K0, u).total);
}

TEST(Energy, DilationScalesRayleighQuotient) {
  std::mt19937_64 rng(17);
  const Params p{0.5, 2.5, 1};
  const auto K1 = kernel(intervals({{0.0, 1.0}}), 1.0 / 32.0, p);
  const auto K2 = kernel(intervals({{0.0, 2.0}}), 2.0 / 32.0, p);
  ASSERT_EQ(K1.size(), K2.size());
  const GridFunction u = random_function(K1.size(), rng);
  EXPECT_NEAR(rayleigh_quotient(K2, u) / rayleigh_quotient(K1, u), std::pow(2.0, -p.sp()), 1e-12);
}

TEST(Tail, VanishesInsideAndScales) {
  const Params p{0.4, 2.5, 1};
  const auto K1 = kernel(intervals({{0.0, 4.0}}), 1.0 / 16.0, p);
  const GridFunction z = GridFunction::Zero(static_cast<Eigen::Index>(K1.size()));
  EXPECT_EQ(tail(z, {2.0, 0.0}, 0.5, K1), 0.0);

  GridFunction u(static_cast<Eigen::Index>(K1.size()));
  for (std::size_t i = 0; i < K1.size(); ++i) {
    const double x = K1.domain().coordinate(i)[0];
    u[static_cast<Eigen::Index>(i)] = std::sin(3.0 * x) + 0.2 * x;
  }
  GridFunction inside = u;
  for (std::size_t i = 0; i < K1.size(); ++i) {
    if (std::abs(K1.domain().coordinate(i)[0] - 2.0) >= 0.5) inside[static_cast<Eigen::Index>(i)] = 0.0;
  }
  EXPECT_EQ(tail(inside, {2.0, 0.0}, 0.5, K1), 0.0);

  const auto K2 = kernel(intervals({{0.0, 8.0}}), 2.0 / 16.0, p);
  const double t1 = tail(u, {2.0, 0.0}, 0.5, K1);
  const double t2 = tail(u, {4.0, 0.0}, 1.0, K2);
  EXPECT_GT(t1, 0.0);
  EXPECT_NEAR(t2 / t1, 1.0, 1e-12);
}

TEST(HiddenConvexity, EndpointsAndDiagonal) {
  std::mt19937_64 rng(18);
  const auto K = kernel(intervals({{0.0, 1.0}}), 1.0 / 15.0, Params{0.5, 2.5, 1});
  ASSERT_EQ(K.size(), 15u);
  const GridFunction u = random_function(K.size(), rng, 0.1, 2.0);
  const GridFunction v = random_function(K.size(), rng, 0.1, 2.0);
  EXPECT_NEAR(hidden_convexity_gap(K, u, v, 0.0), 0.0, 1e-12);
  EXPECT_NEAR(hidden_convexity_gap(K, u, u, 0.37), 0.0, 1e-10);
  EXPECT_GE(hidden_convexity_gap(K, u, v, 0.5), -1e-10);
  const GridFunction mid = hidden_convexity_curve(u, v, 1.0, 2.5);
  EXPECT_LT((mid - v).norm(), 1e-14);
}

TEST(HiddenConvexity, RandomPositivePairs) {
  std::mt19937_64 rng(19);
  for (double p : {1.5, 2.0, 3.0}) {
    const auto K = kernel(intervals({{0.0, 1.0}}), 1.0 / 12.0, Params{0.5, p, 1});
    for (int trial = 0; trial < 50; ++trial) {
      const GridFunction u = random_function(K.size(), rng, 1e-3, 3.0);
      const GridFunction v = random_function(K.size(), rng, 1e-3, 3.0);
      for (int k = 0; k <= 10; ++k) {
        EXPECT_GE(hidden_convexity_gap(K, u, v, k / 10.0), -1e-10);
      }
    }
  }
}
