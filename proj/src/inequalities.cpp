#include "fracp/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fracp/parallel.hpp"

namespace fracp {

namespace {

Primitive ball_primitive(int dim, double center_x, double radius) {
  if (dim == 1) return Interval{center_x - radius, center_x + radius};
  return Ball{{center_x, 0.0}, radius};
}

// Ball of prescribed measure at the origin corner, lattice aligned in 1D.
LatticeDomain ball_of_measure(double m, const Params& params, double h) {
  ShapeSpec spec;
  if (params.dim == 1) {
    spec.primitives = {Interval{0.0, m}};
  } else {
    spec.primitives = {Ball{{0.0, 0.0}, std::sqrt(m / std::numbers::pi)}};
  }
  return build_lattice(spec, h, params);
}

double first_eigenvalue(const LatticeDomain& dom, const Params& params, const SolverOptions& opts,
                        double trunc_factor) {
  return solve_lambda1(assemble_kernel(dom, params, trunc_factor), opts).lambda;
}

void check_size(const LatticeDomain& dom, const GridFunction& u) {
  if (static_cast<std::size_t>(u.size()) != dom.size()) {
    throw Error(ErrorCode::DimensionMismatch, "grid function size differs from the domain");
  }
}

}  // namespace

FaberKrahnReport faber_krahn_check(const LatticeDomain& dom, const Params& params,
                                   const SolverOptions& opts, double trunc_factor,
                                   double tol_fk) {
  FaberKrahnReport rep;
  rep.measure = dom.measure();
  rep.lambda1 = first_eigenvalue(dom, params, opts, trunc_factor);
  const LatticeDomain ball = ball_of_measure(rep.measure, params, dom.spacing());
  rep.ball_measure = ball.measure();
  rep.lambda1_ball = first_eigenvalue(ball, params, opts, trunc_factor);
  rep.ball_bound =
      std::pow(rep.ball_measure / rep.measure, params.sp() / params.dim) * rep.lambda1_ball;
  rep.margin = rep.lambda1 / rep.ball_bound - 1.0;
  rep.holds = rep.lambda1 >= rep.ball_bound * (1.0 - tol_fk);
  return rep;
}

HKSReport hks_check(const LatticeDomain& dom, const Params& params, const SolverOptions& opts,
                    double trunc_factor, double slack) {
  HKSReport rep;
  const KernelOperator K = assemble_kernel(dom, params, trunc_factor);
  const EigenResult first = solve_lambda1(K, opts);
  rep.lambda1 = first.lambda;
  rep.lambda2 = solve_lambda2_path(K, first.u, opts).lambda;
  const LatticeDomain ball = ball_of_measure(0.5 * dom.measure(), params, dom.spacing());
  rep.ball_measure = ball.measure();
  rep.lambda1_ball = first_eigenvalue(ball, params, opts, trunc_factor);
  rep.scaled_bound =
      std::pow(2.0 * rep.ball_measure / dom.measure(), params.sp() / params.dim) * rep.lambda1_ball;
  rep.margin = rep.lambda2 - rep.scaled_bound;
  rep.strict = rep.margin > 0.0;
  rep.holds_with_slack = rep.lambda2 > rep.scaled_bound * (1.0 - slack);
  return rep;
}

std::vector<SweepRow> hks_sweep(double radius, const std::vector<double>& distances,
                                const Params& params, double h, const SolverOptions& opts,
                                double trunc_factor) {
  validate(params);
  if (!(radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
  if (distances.empty()) throw Error(ErrorCode::InvalidArgument, "distances must be nonempty");
  for (std::size_t i = 0; i < distances.size(); ++i) {
    if (!(distances[i] > 2.0 * radius)) {
      throw Error(ErrorCode::OverlappingBalls, "center distance must exceed 2R");
    }
    if (i > 0 && !(distances[i] > distances[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "distances must be strictly increasing");
    }
  }

  auto union_at = [&](double d) {
    ShapeSpec spec;
    spec.primitives = {ball_primitive(params.dim, radius, radius),
                       ball_primitive(params.dim, radius + d, radius)};
    return build_lattice(spec, h, params);
  };
  const double trunc = truncation_radius(union_at(distances.back()), trunc_factor);

  ShapeSpec single;
  single.primitives = {ball_primitive(params.dim, radius, radius)};
  const LatticeDomain ball = build_lattice(single, h, params);
  const double lambda_ball =
      solve_lambda1(assemble_kernel_with_radius(ball, params, trunc), opts).lambda;

  std::vector<SweepRow> rows;
  rows.reserve(distances.size());
  for (double d : distances) {
    const LatticeDomain dom = union_at(d);
    const KernelOperator K = assemble_kernel_with_radius(dom, params, trunc);
    const EigenResult first = solve_lambda1(K, opts);
    SweepRow row;
    row.distance = d;
    row.lambda2_union = solve_lambda2_path(K, first.u, opts).lambda;
    row.lambda1_ball = lambda_ball;
    row.scaled_bound =
        std::pow(2.0 * ball.measure() / dom.measure(), params.sp() / params.dim) * lambda_ball;
    row.gap = row.lambda2_union - row.lambda1_ball;
    rows.push_back(row);
  }
  return rows;
}

double localized_seminorm(const LatticeDomain& dom, const GridFunction& u, const Params& params) {
  validate(params);
  check_size(dom, u);
  const Power pw(params.p);
  const double h2N = std::pow(dom.cell_volume(), 2.0);
  const double expo = 0.5 * params.kernel_exponent();
  const std::size_t n = dom.size();
  std::vector<double> rows(n);
  parallel_for(n, [&](std::size_t x) {
    double acc = 0.0;
    const Point px = dom.coordinate(x);
    for (std::size_t y = 0; y < x; ++y) {
      const double diff = u(static_cast<Eigen::Index>(x)) - u(static_cast<Eigen::Index>(y));
      if (diff == 0.0) continue;
      const Point py = dom.coordinate(y);
      double r2 = 0.0;
      for (int k = 0; k < dom.dim(); ++k) r2 += (px[k] - py[k]) * (px[k] - py[k]);
      acc += pw.abs_pow(diff) / std::pow(r2, expo);
    }
    rows[x] = 2.0 * h2N * acc;
  });
  return tree_sum(rows);
}

PoincareReport poincare_localized_check(const LatticeDomain& dom, const GridFunction& u,
                                        double radius, const Params& params,
                                        std::optional<double> inner_radius) {
  validate(params);
  check_size(dom, u);
  if (!(radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
  const Power pw(params.p);
  const int N = params.dim;
  std::size_t zeros = 0;
  double mass = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (u(i) == 0.0) ++zeros;
    mass += pw.abs_pow(u(i));
  }
  if (zeros == 0) throw Error(ErrorCode::EmptyZeroSet, "u has no zeros in the ball");
  mass *= dom.cell_volume();

  PoincareReport rep;
  rep.zero_measure = dom.cell_volume() * static_cast<double>(zeros);
  const double scale = std::pow(2.0, N + params.p);
  const double decay = std::pow(radius, -params.sp());
  rep.lhs = rep.zero_measure / (scale * std::pow(radius, N)) * decay * mass;
  rep.rhs = localized_seminorm(dom, u, params);
  const double slack = 1e-12 * std::max(rep.lhs, rep.rhs);
  rep.holds = rep.lhs <= rep.rhs + slack;
  if (inner_radius) {
    const double r = *inner_radius;
    if (!(r > 0.0 && r < radius)) {
      throw Error(ErrorCode::InvalidArgument, "inner radius must lie in (0, R)");
    }
    rep.lhs_inner = N * unit_ball_measure(N) / scale * std::pow(r / radius, N) *
                    ((radius - r) / r) * decay * mass;
    rep.holds_inner = *rep.lhs_inner <= rep.rhs + 1e-12 * std::max(*rep.lhs_inner, rep.rhs);
  }
  return rep;
}

SobolevReport sobolev_localized_check(const LatticeDomain& dom, const GridFunction& u,
                                      const Point& center, double r, double R,
                                      const Params& params) {
  validate(params);
  check_size(dom, u);
  const int N = params.dim;
  if (!(params.sp() < N)) throw Error(ErrorCode::ExponentOutOfRange, "requires sp < N");
  if (!(r > 0.0 && r < R)) throw Error(ErrorCode::InvalidArgument, "requires 0 < r < R");
  for (std::size_t i = 0; i < dom.size(); ++i) {
    if (u(static_cast<Eigen::Index>(i)) != 0.0 && distance(dom.coordinate(i), center, N) >= r) {
      throw Error(ErrorCode::InvalidArgument, "u must vanish outside B_r");
    }
  }
  const double p = params.p;
  const double p_star = N * p / (N - params.sp());
  const double hN = dom.cell_volume();
  double sum_star = 0.0, sum_p = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    sum_star += std::pow(std::abs(u(i)), p_star);
    sum_p += std::pow(std::abs(u(i)), p);
  }
  SobolevReport rep;
  rep.lhs = std::pow(hN * sum_star, p / p_star);
  rep.seminorm = localized_seminorm(dom, u, params);
  rep.full_norm = rep.seminorm + std::pow(R, -params.sp()) * hN * sum_p;
  auto ratio = [](double a, double b) {
    if (b > 0.0) return a / b;
    return a > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  };
  rep.ratio_seminorm = ratio(rep.lhs, rep.seminorm);
  rep.ratio_full = ratio(rep.lhs, rep.full_norm);
  return rep;
}

LinfReport linf_bound_check(const KernelOperator& K, const EigenResult& result, double T_upper) {
  const Params& params = K.params();
  const int N = params.dim;
  const double s = params.s, p = params.p, sp = params.sp();
  if (!(sp < N)) throw Error(ErrorCode::ExponentOutOfRange, "requires sp < N");
  if (!(T_upper > 0.0)) throw Error(ErrorCode::InvalidArgument, "T_upper must be positive");
  if (static_cast<std::size_t>(result.u.size()) != K.size()) {
    throw Error(ErrorCode::DimensionMismatch, "grid function size differs from the domain");
  }
  const double p_star = N * p / (N - sp);
  LinfReport rep;
  rep.c_tilde = T_upper * std::pow(p_star / p, ((N - sp) / s) * ((p - 1.0) / p));
  rep.lhs = result.u.cwiseAbs().maxCoeff();
  rep.rhs = std::pow(rep.c_tilde * result.lambda, N / (s * p * p)) * lp_norm(K, result.u);
  rep.holds = rep.lhs <= rep.rhs;
  return rep;
}

}  // namespace fracp
