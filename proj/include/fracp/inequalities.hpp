#pragma once

#include <optional>
#include <vector>

#include "fracp/eigensolver.hpp"

namespace fracp {

struct FaberKrahnReport {
  double lambda1 = 0.0;
  double lambda1_ball = 0.0;
  double measure = 0.0;
  double ball_measure = 0.0;
  /// (|B|/|Omega|)^{sp/N} lambda1(B): the first eigenvalue of a ball of measure |Omega|.
  double ball_bound = 0.0;
  /// lambda1 / ball_bound - 1.
  double margin = 0.0;
  bool holds = false;
};

/// Compares lambda1(dom) with the ball of the same measure, solved at the same h.
FaberKrahnReport faber_krahn_check(const LatticeDomain& dom, const Params& params,
                                   const SolverOptions& opts = {},
                                   double trunc_factor = kDefaultTruncFactor,
                                   double tol_fk = 0.02);

struct HKSReport {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda1_ball = 0.0;
  double ball_measure = 0.0;
  /// (2|B|/|Omega|)^{sp/N} lambda1(B), B a ball of measure |Omega|/2.
  double scaled_bound = 0.0;
  double margin = 0.0;
  bool strict = false;
  bool holds_with_slack = false;
};

HKSReport hks_check(const LatticeDomain& dom, const Params& params, const SolverOptions& opts = {},
                    double trunc_factor = kDefaultTruncFactor, double slack = 0.02);

struct SweepRow {
  double distance = 0.0;
  double lambda2_union = 0.0;
  double lambda1_ball = 0.0;
  double scaled_bound = 0.0;
  double gap = 0.0;
};

/// Two radius-R balls at center distance d for each d, against lambda1(B_R). All solves
/// share the truncation radius of the widest union.
std::vector<SweepRow> hks_sweep(double radius, const std::vector<double>& distances,
                                const Params& params, double h, const SolverOptions& opts = {},
                                double trunc_factor = kDefaultTruncFactor);

/// sum over ordered pairs x != y of the domain of h^{2N} |u(x)-u(y)|^p / |x-y|^{N+sp}.
double localized_seminorm(const LatticeDomain& dom, const GridFunction& u, const Params& params);

struct PoincareReport {
  double zero_measure = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  /// Support-radius form; present when an inner radius was given.
  std::optional<double> lhs_inner;
  std::optional<bool> holds_inner;
};

/// dom is a lattice ball of radius R. With inner_radius, u is taken as supported in
/// the concentric ball of that radius and the support-radius form is evaluated too.
PoincareReport poincare_localized_check(const LatticeDomain& dom, const GridFunction& u,
                                        double radius, const Params& params,
                                        std::optional<double> inner_radius = std::nullopt);

struct SobolevReport {
  /// |u|_{L^{p*}}^p
  double lhs = 0.0;
  double seminorm = 0.0;
  /// seminorm + R^{-sp} int |u|^p
  double full_norm = 0.0;
  /// lhs / seminorm and lhs / full_norm; +inf when the denominator vanishes but lhs does not.
  double ratio_seminorm = 0.0;
  double ratio_full = 0.0;
};

/// dom is a lattice ball of radius R centered at `center`; u must vanish outside B_r.
SobolevReport sobolev_localized_check(const LatticeDomain& dom, const GridFunction& u,
                                      const Point& center, double r, double R,
                                      const Params& params);

struct LinfReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double c_tilde = 0.0;
  bool holds = false;
};

/// max|u| against [C lambda]^{N/(sp^2)} |u|_p with C = T_upper (p*/p)^{((N-sp)/s)((p-1)/p)}.
LinfReport linf_bound_check(const KernelOperator& K, const EigenResult& result, double T_upper);

}  // namespace fracp
