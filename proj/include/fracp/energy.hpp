#pragma once

#include <Eigen/Dense>

#include "fracp/domain.hpp"
#include "fracp/params.hpp"

namespace fracp {

/// Values on the interior nodes of a fixed domain; zero outside it.
using GridFunction = Eigen::VectorXd;

inline constexpr double kDefaultTruncFactor = 4.0;

/// |t|^p and J_p(t) = |t|^{p-2} t with exact fast paths for common exponents.
class Power {
 public:
  explicit Power(double p);

  double p() const { return p_; }
  double abs_pow(double t) const;
  /// J_p(t); J_p(0) = 0 for every p > 1.
  double jp(double t) const;
  /// (p - 1) (t^2 + eps^2)^{(p-2)/2}, the derivative of J_p regularized at the origin.
  double jp_prime(double t, double eps) const;

 private:
  enum class Kind { Two, Three, OneHalf, General };
  double p_;
  Kind kind_;
};

/// Discrete Gagliardo kernel on a lattice domain with exterior Dirichlet correction.
///
/// pair_weight(x, y) = h^{2N} |x - y|^{-N-sp} for interior x != y. The exterior weight
/// of a node x is h^N times the exterior integral of the kernel: the lattice sum over
/// exterior nodes within the truncation radius R_t plus the analytic remainder
/// N w_N / (s p R_t^{sp}).
class KernelOperator {
 public:
  KernelOperator(LatticeDomain domain, Params params, double trunc_radius);

  const LatticeDomain& domain() const { return domain_; }
  const Params& params() const { return params_; }
  double trunc_radius() const { return trunc_radius_; }
  std::size_t size() const { return domain_.size(); }
  double cell_volume() const { return domain_.cell_volume(); }

  const Eigen::MatrixXd& pair_weights() const { return pair_; }
  const Eigen::VectorXd& ext_weights() const { return ext_; }
  double pair_weight(std::size_t x, std::size_t y) const { return pair_(x, y); }
  double ext_weight(std::size_t x) const { return ext_(x); }

 private:
  LatticeDomain domain_;
  Params params_;
  double trunc_radius_;
  Eigen::MatrixXd pair_;
  Eigen::VectorXd ext_;
};

/// N w_N / (s p R^{sp}) = integral of |y|^{-N-sp} over |y| > R.
double analytic_tail(const Params& params, double radius);

/// R_t = trunc_factor * 2 * bounding_radius, rounded up to a half-odd multiple of h.
double truncation_radius(const LatticeDomain& dom, double trunc_factor);

KernelOperator assemble_kernel(const LatticeDomain& dom, const Params& params,
                               double trunc_factor = kDefaultTruncFactor);

/// Assembly with an explicit truncation radius; used for sub-domains so that they
/// share the parent's exterior quadrature.
KernelOperator assemble_kernel_with_radius(const LatticeDomain& dom, const Params& params,
                                           double trunc_radius);

struct EnergyBreakdown {
  double interior = 0.0;
  double exterior = 0.0;
  double total = 0.0;
};

EnergyBreakdown gagliardo_energy(const KernelOperator& K, const GridFunction& u);

/// Exact gradient of gagliardo_energy(K, u).total.
GridFunction energy_gradient(const KernelOperator& K, const GridFunction& u);

/// Jacobian of energy_gradient / p, with |t|^{p-2} regularized by eps where p < 2.
Eigen::MatrixXd energy_hessian(const KernelOperator& K, const GridFunction& u, double eps = 0.0);

/// Symmetric matrix A with u^T A u = energy for p = 2 (any p: same weights).
Eigen::MatrixXd linear_operator_matrix(const KernelOperator& K);

double lp_norm(const GridFunction& u, double p, double h, int dim);
double lp_norm(const KernelOperator& K, const GridFunction& u);
/// h^N sum |u|^p.
double lp_norm_pow(const KernelOperator& K, const GridFunction& u);

GridFunction normalize(const GridFunction& u, double p, double h, int dim);
GridFunction normalize(const KernelOperator& K, const GridFunction& u);

double rayleigh_quotient(const KernelOperator& K, const GridFunction& u);

/// Nonlocal tail of u about x0 at radius R over the interior nodes outside B_R(x0).
double tail(const GridFunction& u, const Point& x0, double radius, const KernelOperator& K);

/// sigma_t = ((1-t) u^p + t v^p)^{1/p}, componentwise, for positive u, v.
GridFunction hidden_convexity_curve(const GridFunction& u, const GridFunction& v, double t,
                                    double p);

/// (1-t) Phi(u) + t Phi(v) - Phi(sigma_t).
double hidden_convexity_gap(const KernelOperator& K, const GridFunction& u,
                            const GridFunction& v, double t);

}  // namespace fracp
