#include "fracp/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "fracp/parallel.hpp"

namespace fracp {

namespace {

constexpr double kRoundoff = 4.0 * std::numeric_limits<double>::epsilon();

void check_size(const KernelOperator& K, const GridFunction& u) {
  if (static_cast<std::size_t>(u.size()) != K.size()) {
    throw Error(ErrorCode::DimensionMismatch, "grid function size differs from the domain");
  }
}

GridFunction jp_vector(const Power& pw, const GridFunction& u) {
  GridFunction out(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) out(i) = pw.jp(u(i));
  return out;
}

GridFunction residual_vector(const KernelOperator& K, const GridFunction& u, double lambda) {
  const Power pw(K.params().p);
  return energy_gradient(K, u) / K.params().p - lambda * K.cell_volume() * jp_vector(pw, u);
}

double preconditioner_eps(const GridFunction& u) { return 1e-3 * u.cwiseAbs().maxCoeff(); }

}  // namespace

namespace detail {

// Descent direction -(p-1) H(u)^{-1} r with H the regularized Jacobian of grad/p.
// For p = 2 a unit step is one step of shifted inverse iteration.
GridFunction preconditioned_direction(const KernelOperator& K, const GridFunction& u,
                                      const GridFunction& r) {
  const double p = K.params().p;
  const Eigen::MatrixXd H = energy_hessian(K, u, preconditioner_eps(u));
  Eigen::LLT<Eigen::MatrixXd> llt(H);
  if (llt.info() != Eigen::Success) return -r;
  GridFunction d = -(p - 1.0) * llt.solve(r);
  if (!d.allFinite() || d.dot(r) >= 0.0) return -r;
  return d;
}

}  // namespace detail

void validate(const SolverOptions& opts) {
  if (opts.max_iter < 1) throw Error(ErrorCode::InvalidParams, "max_iter must be positive");
  if (!(opts.grad_tol > 0.0)) throw Error(ErrorCode::InvalidParams, "grad_tol must be positive");
  if (!(opts.step0 > 0.0)) throw Error(ErrorCode::InvalidParams, "step0 must be positive");
  if (!(opts.armijo_c > 0.0 && opts.armijo_c < 1.0)) {
    throw Error(ErrorCode::InvalidParams, "armijo_c must lie in (0,1)");
  }
  if (opts.path_nodes < 9 || opts.path_nodes % 2 == 0) {
    throw Error(ErrorCode::InvalidParams, "path_nodes must be odd and at least 9");
  }
  if (opts.path_iters < 1) throw Error(ErrorCode::InvalidParams, "path_iters must be positive");
}

double eigen_residual(const KernelOperator& K, const GridFunction& u, double lambda) {
  check_size(K, u);
  return residual_vector(K, u, lambda).norm();
}

EigenResult solve_lambda1(const KernelOperator& K, const SolverOptions& opts,
                          const std::optional<GridFunction>& initial) {
  validate(opts);
  const auto n = static_cast<Eigen::Index>(K.size());
  GridFunction u;
  if (initial) {
    check_size(K, *initial);
    u = normalize(K, initial->cwiseAbs());
  } else {
    u = normalize(K, GridFunction::Ones(n));
  }
  const double p = K.params().p;

  // A Newton finish is accepted only if it keeps the sign and does not raise R, so it
  // cannot jump to a higher critical point.
  auto try_finish = [&](const GridFunction& from, double R_from, EigenResult& out) {
    EigenResult f = polish_critical_point(K, from, opts.grad_tol);
    const bool one_sign = f.u.minCoeff() > 0.0 || f.u.maxCoeff() < 0.0;
    if (!f.converged || !one_sign || f.lambda > R_from + 1e-10 * std::abs(R_from)) return false;
    out = f;
    return true;
  };

  EigenResult best;
  best.residual = std::numeric_limits<double>::infinity();
  double R = rayleigh_quotient(K, u);
  int last_finish = -1000;
  for (int it = 0;; ++it) {
    const GridFunction r = residual_vector(K, u, R);
    const double res = r.norm();
    if (res < best.residual) best = {R, u, res, it, false};
    if (res < opts.grad_tol) {
      best.converged = true;
      break;
    }
    if (it >= opts.max_iter) {
      throw NotConverged("lambda1 did not reach grad_tol within max_iter", best);
    }
    if (res < 0.05 * std::abs(R) && it - last_finish >= 10) {
      last_finish = it;
      EigenResult fin;
      if (try_finish(u, R, fin)) {
        fin.iterations += it;
        best = fin;
        break;
      }
    }
    const GridFunction d = detail::preconditioned_direction(K, u, r);
    const double slope = p * r.dot(d);  // directional derivative of R (|u|_p = 1)
    double tau = opts.step0;
    GridFunction trial;
    double R_trial = R;
    bool accepted = false;
    for (int k = 0; k < 60; ++k, tau *= 0.5) {
      trial = normalize(K, u + tau * d);
      R_trial = rayleigh_quotient(K, trial);
      if (R_trial <= R + opts.armijo_c * tau * slope + kRoundoff * std::abs(R)) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      EigenResult fin;
      if (try_finish(best.u, best.lambda, fin)) {
        fin.iterations += it;
        best = fin;
        break;
      }
      throw NotConverged("lambda1 line search stalled above grad_tol", best);
    }
    u = trial;
    R = R_trial;
  }

  if (best.u.sum() < 0.0) best.u = -best.u;
  return best;
}

EigenResult polish_critical_point(const KernelOperator& K, const GridFunction& u0,
                                  double target_residual, int max_iter) {
  check_size(K, u0);
  const Power pw(K.params().p);
  const double hN = K.cell_volume();
  const auto n = static_cast<Eigen::Index>(K.size());

  GridFunction u = normalize(K, u0);
  double lambda = rayleigh_quotient(K, u);
  double res = eigen_residual(K, u, lambda);
  EigenResult best{lambda, u, res, 0, res < target_residual};

  // For p < 2, J_p is not Lipschitz at 0 and nodes with nearly equal values make the
  // exact Jacobian useless; several regularizations are tried and the best step kept.
  std::vector<double> eps_scales{0.0};
  if (K.params().p < 2.0) eps_scales = {1e-9, 1e-7, 1e-5, 1e-3};

  for (int it = 1; it <= max_iter && !best.converged; ++it) {
    const GridFunction jpu = jp_vector(pw, u);
    Eigen::VectorXd F(n + 1);
    F.head(n) = residual_vector(K, u, lambda);
    F(n) = (lp_norm_pow(K, u) - 1.0) / K.params().p;
    const double umax = u.cwiseAbs().maxCoeff();

    GridFunction best_u = u;
    double best_lambda = lambda, best_res = res;
    for (double scale : eps_scales) {
      const double eps = scale * umax;
      Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n + 1, n + 1);
      J.topLeftCorner(n, n) = energy_hessian(K, u, eps);
      for (Eigen::Index i = 0; i < n; ++i) J(i, i) -= lambda * hN * pw.jp_prime(u(i), eps);
      J.block(0, n, n, 1) = -hN * jpu;
      J.block(n, 0, 1, n) = hN * jpu.transpose();
      const Eigen::VectorXd step = J.partialPivLu().solve(-F);
      if (!step.allFinite()) continue;
      for (double alpha = 1.0; alpha > 1e-4; alpha *= 0.5) {
        const GridFunction cand_raw = u + alpha * step.head(n);
        if (cand_raw.cwiseAbs().maxCoeff() == 0.0) continue;
        const GridFunction cand = normalize(K, cand_raw);
        const double lam = rayleigh_quotient(K, cand);
        const double r = eigen_residual(K, cand, lam);
        if (r < best_res) {
          best_u = cand;
          best_lambda = lam;
          best_res = r;
          break;
        }
      }
      if (best_res < 0.5 * res) break;
    }
    if (!(best_res < res)) break;
    u = best_u;
    lambda = best_lambda;
    res = best_res;
    best = {lambda, u, res, it, res < target_residual};
  }
  return best;
}

double loop_upper_bound(const KernelOperator& K, const GridFunction& u_trial, int grid) {
  check_size(K, u_trial);
  if (grid < 4) throw Error(ErrorCode::InvalidArgument, "loop grid needs at least 4 points");
  const GridFunction up = u_trial.cwiseMax(0.0);
  const GridFunction um = (-u_trial).cwiseMax(0.0);
  if (up.maxCoeff() == 0.0 || um.maxCoeff() == 0.0) {
    throw Error(ErrorCode::NoSignChange, "trial function must change sign");
  }
  std::vector<double> values(static_cast<std::size_t>(grid));
  parallel_for(values.size(), [&](std::size_t k) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / grid;
    values[k] = rayleigh_quotient(K, std::cos(theta) * up - std::sin(theta) * um);
  });
  return *std::max_element(values.begin(), values.end());
}

GridFunction gamma_curve(const KernelOperator& K, const GridFunction& u, double t) {
  check_size(K, u);
  if (!(t >= 0.0 && t <= 0.5)) throw Error(ErrorCode::InvalidArgument, "t must lie in [0, 1/2]");
  const GridFunction up = u.cwiseMax(0.0);
  const GridFunction um = (-u).cwiseMax(0.0);
  if (up.maxCoeff() == 0.0 || um.maxCoeff() == 0.0) {
    throw Error(ErrorCode::NoSignChange, "u must change sign");
  }
  const double c = t == 0.5 ? 0.0 : std::cos(std::numbers::pi * t);
  return normalize(K, up - c * um);
}

double descent_condition_lhs(const KernelOperator& K, const GridFunction& u) {
  check_size(K, u);
  const Power pw(K.params().p);
  const GridFunction up = u.cwiseMax(0.0);
  const GridFunction um = (-u).cwiseMax(0.0);
  const double mass_plus = lp_norm_pow(K, up);
  const double mass_minus = lp_norm_pow(K, um);
  if (mass_plus == 0.0 || mass_minus == 0.0) {
    throw Error(ErrorCode::NoSignChange, "descent condition needs both u+ and u- nonzero");
  }
  const auto& W = K.pair_weights();
  const std::size_t n = K.size();

  std::vector<double> iu(n), iv(n);
  parallel_for(n, [&](std::size_t xs) {
    const auto x = static_cast<Eigen::Index>(xs);
    double su = 0.0, sv = 0.0;
    for (Eigen::Index y = 0; y < x; ++y) {
      const double j = W(y, x) * pw.jp(u(x) - u(y));
      su += j * (up(x) - up(y));
      sv += j * (um(x) - um(y));
    }
    const double je = K.ext_weight(xs) * pw.jp(u(x));
    iu[xs] = 2.0 * su + 2.0 * je * up(x);
    iv[xs] = 2.0 * sv + 2.0 * je * um(x);
  });
  return mass_minus * tree_sum(iu) + mass_plus * tree_sum(iv);
}

std::vector<double> matrix_oracle_p2(const KernelOperator& K) {
  if (K.params().p != 2.0) throw Error(ErrorCode::WrongExponent, "matrix oracle requires p = 2");
  const Eigen::MatrixXd A = linear_operator_matrix(K) / K.cell_volume();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

NodalSets nodal_domains(const GridFunction& u, const LatticeDomain& dom) {
  if (static_cast<std::size_t>(u.size()) != dom.size()) {
    throw Error(ErrorCode::DimensionMismatch, "grid function size differs from the domain");
  }
  NodalSets sets;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (u(i) > 0.0) sets.positive.push_back(static_cast<std::size_t>(i));
    if (u(i) < 0.0) sets.negative.push_back(static_cast<std::size_t>(i));
  }
  return sets;
}

NodalReport nodal_lemma_check(const KernelOperator& K, const EigenResult& result,
                              const SolverOptions& opts) {
  const NodalSets sets = nodal_domains(result.u, K.domain());
  if (sets.positive.empty() || sets.negative.empty()) {
    throw Error(ErrorCode::NoSignChange, "eigenfunction does not change sign");
  }
  auto first_on = [&](const std::vector<std::size_t>& which) {
    const LatticeDomain sub = K.domain().subset(which);
    const KernelOperator Ks = assemble_kernel_with_radius(sub, K.params(), K.trunc_radius());
    return solve_lambda1(Ks, opts).lambda;
  };
  NodalReport rep;
  rep.lambda = result.lambda;
  rep.lambda1_plus = first_on(sets.positive);
  rep.lambda1_minus = first_on(sets.negative);
  rep.margin = result.lambda - std::max(rep.lambda1_plus, rep.lambda1_minus);
  rep.holds = rep.margin >= opts.grad_tol;
  return rep;
}

}  // namespace fracp
