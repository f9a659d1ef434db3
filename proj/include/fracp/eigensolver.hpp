#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fracp/energy.hpp"
#include "fracp/error.hpp"

namespace fracp {

struct SolverOptions {
  int max_iter = 500;
  /// Stationarity threshold on the eigen residual (Euclidean norm).
  double grad_tol = 1e-9;
  double step0 = 1.0;
  double armijo_c = 1e-4;
  /// Odd, at least 9.
  int path_nodes = 33;
  int path_iters = 400;
  std::uint64_t seed = 1;
};

void validate(const SolverOptions& opts);

struct EigenResult {
  double lambda = 0.0;
  GridFunction u;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Raised when an iteration exhausts its budget; carries the best iterate seen.
class NotConverged : public Error {
 public:
  NotConverged(const std::string& what, EigenResult best)
      : Error(ErrorCode::NotConverged, what), best_(std::move(best)) {}

  const EigenResult& best() const { return best_; }

 private:
  EigenResult best_;
};

/// Ordered L^p-normalized grid functions on the sphere; endpoints u1 and -u1.
struct SpherePath {
  std::vector<GridFunction> nodes;
};

/// Euclidean norm of grad Phi(u) / p - lambda h^N J_p(u); zero exactly at discrete
/// critical points of the Rayleigh quotient on the L^p sphere with value lambda.
double eigen_residual(const KernelOperator& K, const GridFunction& u, double lambda);

/// First eigenpair by preconditioned projected descent on the L^p sphere with Armijo
/// backtracking on the Rayleigh quotient. Starts from the normalized positive
/// constant unless an initial function is given. The returned u is positive.
EigenResult solve_lambda1(const KernelOperator& K, const SolverOptions& opts = {},
                          const std::optional<GridFunction>& initial = std::nullopt);

/// Newton iteration on the discrete eigen equation with the L^p constraint; converges
/// to the critical point nearest to u0 regardless of its Morse index.
EigenResult polish_critical_point(const KernelOperator& K, const GridFunction& u0,
                                  double target_residual, int max_iter = 60);

/// Sign-changing function used to route the initial mountain-pass path.
GridFunction sign_changing_seed(const KernelOperator& K, const GridFunction& u1);

struct MountainPass {
  SpherePath path;
  std::vector<double> energies;
  std::size_t pass_node = 0;
  double path_max = 0.0;
  int iterations = 0;
};

/// Relaxes a path from u1 to -u1 toward a minimal-maximum path (string method with
/// equal-arc reparametrization in L^p distance).
MountainPass relax_mountain_pass(const KernelOperator& K, const GridFunction& u1,
                                 const SolverOptions& opts = {});

/// Second eigenpair as the mountain-pass level between u1 and -u1, with the pass node
/// polished to a critical point.
EigenResult solve_lambda2_path(const KernelOperator& K, const GridFunction& u1,
                               const SolverOptions& opts = {});

/// Max of the Rayleigh quotient over the odd loop (w1 u+ - w2 u-)/norm, w on a
/// uniform grid of the unit circle.
double loop_upper_bound(const KernelOperator& K, const GridFunction& u_trial, int grid);

/// Normalized (u+ - cos(pi t) u-), t in [0, 1/2].
GridFunction gamma_curve(const KernelOperator& K, const GridFunction& u, double t);

/// Left side of the sufficient condition for gamma_curve to be energy non-increasing:
/// |u-|^p <J_p(U-V), U> + |u+|^p <J_p(U-V), V>, with U, V the difference fields of u+, u-.
/// Odd in u and zero at eigenfunctions.
double descent_condition_lhs(const KernelOperator& K, const GridFunction& u);

/// All eigenvalues of the p = 2 operator matrix scaled by 1/h^N, ascending.
std::vector<double> matrix_oracle_p2(const KernelOperator& K);

struct NodalSets {
  std::vector<std::size_t> positive;
  std::vector<std::size_t> negative;
};

NodalSets nodal_domains(const GridFunction& u, const LatticeDomain& dom);

struct NodalReport {
  double lambda = 0.0;
  double lambda1_plus = 0.0;
  double lambda1_minus = 0.0;
  double margin = 0.0;
  bool holds = false;
};

/// Solves the first eigenvalue on each nodal set (the rest of the domain becomes
/// exterior) and compares against result.lambda.
NodalReport nodal_lemma_check(const KernelOperator& K, const EigenResult& result,
                              const SolverOptions& opts = {});

}  // namespace fracp
