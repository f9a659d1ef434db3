#include "fracp/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "fracp/error.hpp"
#include "fracp/parallel.hpp"

namespace fracp {

namespace {

constexpr std::size_t kRowChunk = 32;

std::size_t chunk_count(std::size_t n) { return (n + kRowChunk - 1) / kRowChunk; }

void check_size(const KernelOperator& K, const GridFunction& u) {
  if (static_cast<std::size_t>(u.size()) != K.size()) {
    std::ostringstream os;
    os << "grid function has " << u.size() << " values, domain has " << K.size() << " nodes";
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
}

// Membership test over the index bounding box of a domain.
class NodeMask {
 public:
  explicit NodeMask(const LatticeDomain& dom) : dim_(dom.dim()) {
    lo_ = dom.index(0);
    hi_ = dom.index(0);
    for (const auto& k : dom.nodes()) {
      for (int d = 0; d < dim_; ++d) {
        lo_[d] = std::min(lo_[d], k[d]);
        hi_[d] = std::max(hi_[d], k[d]);
      }
    }
    nx_ = hi_[0] - lo_[0] + 1;
    ny_ = dim_ == 2 ? hi_[1] - lo_[1] + 1 : 1;
    mask_.assign(static_cast<std::size_t>(nx_ * ny_), false);
    for (const auto& k : dom.nodes()) mask_[offset(k)] = true;
  }

  bool contains(const LatticeIndex& k) const {
    for (int d = 0; d < dim_; ++d) {
      if (k[d] < lo_[d] || k[d] > hi_[d]) return false;
    }
    return mask_[offset(k)];
  }

 private:
  std::size_t offset(const LatticeIndex& k) const {
    const long j = dim_ == 2 ? k[1] - lo_[1] : 0;
    return static_cast<std::size_t>((k[0] - lo_[0]) * ny_ + j);
  }

  int dim_;
  LatticeIndex lo_{0, 0};
  LatticeIndex hi_{0, 0};
  long nx_ = 0;
  long ny_ = 0;
  std::vector<bool> mask_;
};

struct Offset {
  LatticeIndex k;
  double weight;
};

// Lattice offsets 0 < |k| h <= radius with kernel weights, smallest weights first.
std::vector<Offset> kernel_offsets(int dim, double h, double radius, double exponent) {
  const long kmax = static_cast<long>(std::floor(radius / h)) + 1;
  std::vector<std::pair<double, LatticeIndex>> pts;
  for (long i = -kmax; i <= kmax; ++i) {
    const long jlim = dim == 2 ? kmax : 0;
    for (long j = -jlim; j <= jlim; ++j) {
      if (i == 0 && j == 0) continue;
      const double r = h * std::sqrt(static_cast<double>(i * i + j * j));
      if (r <= radius) pts.push_back({r, {i, j}});
    }
  }
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return a.first > b.first || (a.first == b.first && a.second < b.second);
  });
  std::vector<Offset> out;
  out.reserve(pts.size());
  for (const auto& [r, k] : pts) out.push_back({k, std::pow(r, -exponent)});
  return out;
}

}  // namespace

Power::Power(double p) : p_(p) {
  if (p == 2.0) {
    kind_ = Kind::Two;
  } else if (p == 3.0) {
    kind_ = Kind::Three;
  } else if (p == 1.5) {
    kind_ = Kind::OneHalf;
  } else {
    kind_ = Kind::General;
  }
}

double Power::abs_pow(double t) const {
  const double a = std::abs(t);
  switch (kind_) {
    case Kind::Two: return a * a;
    case Kind::Three: return a * a * a;
    case Kind::OneHalf: return a * std::sqrt(a);
    case Kind::General: return std::pow(a, p_);
  }
  return std::pow(a, p_);
}

double Power::jp(double t) const {
  if (t == 0.0) return 0.0;
  switch (kind_) {
    case Kind::Two: return t;
    case Kind::Three: return std::abs(t) * t;
    case Kind::OneHalf: return std::copysign(std::sqrt(std::abs(t)), t);
    case Kind::General: return std::copysign(std::pow(std::abs(t), p_ - 1.0), t);
  }
  return 0.0;
}

double Power::jp_prime(double t, double eps) const {
  if (kind_ == Kind::Two) return 1.0;
  if (kind_ == Kind::Three) return 2.0 * std::sqrt(t * t + eps * eps);
  const double base = t * t + eps * eps;
  if (base == 0.0) {
    return p_ > 2.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return (p_ - 1.0) * std::pow(base, 0.5 * (p_ - 2.0));
}

double analytic_tail(const Params& params, double radius) {
  return params.dim * unit_ball_measure(params.dim) / (params.sp() * std::pow(radius, params.sp()));
}

double truncation_radius(const LatticeDomain& dom, double trunc_factor) {
  const double h = dom.spacing();
  const double raw = trunc_factor * 2.0 * dom.bounding_radius();
  const double k = std::max(1.0, std::ceil(raw / h - 0.5));
  return (k + 0.5) * h;
}

KernelOperator::KernelOperator(LatticeDomain domain, Params params, double trunc_radius)
    : domain_(std::move(domain)), params_(params), trunc_radius_(trunc_radius) {
  validate(params_);
  if (params_.dim != domain_.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "domain dimension differs from params.dim");
  }
  const std::size_t n = domain_.size();
  const int dim = domain_.dim();
  const double h = domain_.spacing();
  const double vol = domain_.cell_volume();
  const double q = params_.kernel_exponent();

  pair_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  double max_dist = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    const Point px = domain_.coordinate(x);
    for (std::size_t y = x + 1; y < n; ++y) {
      const double r = distance(px, domain_.coordinate(y), dim);
      max_dist = std::max(max_dist, r);
      const double w = vol * vol * std::pow(r, -q);
      pair_(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) = w;
      pair_(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x)) = w;
    }
  }

  // Every point of the cell union must lie inside B(x, R_t) for each node x.
  const double needed = max_dist + 0.5 * h * std::sqrt(static_cast<double>(dim));
  if (!(trunc_radius_ >= needed)) {
    std::ostringstream os;
    os << "truncation radius " << trunc_radius_ << " < " << needed
       << " required to contain the domain";
    throw Error(ErrorCode::TruncationTooSmall, os.str());
  }

  const NodeMask mask(domain_);
  const std::vector<Offset> offsets = kernel_offsets(dim, h, trunc_radius_, q);
  const double far = analytic_tail(params_, trunc_radius_);
  ext_.resize(static_cast<Eigen::Index>(n));
  parallel_for(n, [&](std::size_t x) {
    const LatticeIndex kx = domain_.index(x);
    double sum = 0.0;
    for (const auto& off : offsets) {
      const LatticeIndex ky{kx[0] + off.k[0], kx[1] + off.k[1]};
      if (!mask.contains(ky)) sum += off.weight;
    }
    ext_(static_cast<Eigen::Index>(x)) = vol * (vol * sum + far);
  });
}

KernelOperator assemble_kernel_with_radius(const LatticeDomain& dom, const Params& params,
                                           double trunc_radius) {
  return KernelOperator(dom, params, trunc_radius);
}

KernelOperator assemble_kernel(const LatticeDomain& dom, const Params& params,
                               double trunc_factor) {
  if (!(trunc_factor > 0.0) || !std::isfinite(trunc_factor)) {
    throw Error(ErrorCode::TruncationTooSmall, "trunc_factor must be positive");
  }
  return KernelOperator(dom, params, truncation_radius(dom, trunc_factor));
}

EnergyBreakdown gagliardo_energy(const KernelOperator& K, const GridFunction& u) {
  check_size(K, u);
  const Power pw(K.params().p);
  const auto& W = K.pair_weights();
  const auto& ext = K.ext_weights();
  const std::size_t n = K.size();
  const std::size_t chunks = chunk_count(n);
  std::vector<double> inner(chunks, 0.0);
  std::vector<double> outer(chunks, 0.0);
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t end = std::min(n, (c + 1) * kRowChunk);
    double si = 0.0;
    double se = 0.0;
    for (std::size_t x = c * kRowChunk; x < end; ++x) {
      const auto xi = static_cast<Eigen::Index>(x);
      const double ux = u(xi);
      double row = 0.0;
      for (Eigen::Index y = xi + 1; y < static_cast<Eigen::Index>(n); ++y) {
        row += W(y, xi) * pw.abs_pow(ux - u(y));
      }
      si += row;
      se += ext(xi) * pw.abs_pow(ux);
    }
    inner[c] = si;
    outer[c] = se;
  });
  EnergyBreakdown e;
  e.interior = 2.0 * tree_sum(inner);
  e.exterior = 2.0 * tree_sum(outer);
  e.total = e.interior + e.exterior;
  return e;
}

GridFunction energy_gradient(const KernelOperator& K, const GridFunction& u) {
  check_size(K, u);
  const Power pw(K.params().p);
  const double p = K.params().p;
  const auto& W = K.pair_weights();
  const auto& ext = K.ext_weights();
  const auto n = static_cast<Eigen::Index>(K.size());
  GridFunction g(n);
  parallel_for(
      static_cast<std::size_t>(n),
      [&](std::size_t xs) {
        const auto x = static_cast<Eigen::Index>(xs);
        const double ux = u(x);
        double acc = 0.0;
        for (Eigen::Index y = 0; y < n; ++y) {
          if (y != x) acc += W(y, x) * pw.jp(ux - u(y));
        }
        g(x) = 2.0 * p * (acc + ext(x) * pw.jp(ux));
      },
      256);
  return g;
}

Eigen::MatrixXd energy_hessian(const KernelOperator& K, const GridFunction& u, double eps) {
  check_size(K, u);
  const Power pw(K.params().p);
  const auto& W = K.pair_weights();
  const auto& ext = K.ext_weights();
  const auto n = static_cast<Eigen::Index>(K.size());
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index x = 0; x < n; ++x) {
    double diag = 2.0 * ext(x) * pw.jp_prime(u(x), eps);
    for (Eigen::Index y = 0; y < n; ++y) {
      if (y == x) continue;
      const double w = 2.0 * W(y, x) * pw.jp_prime(u(x) - u(y), eps);
      H(x, y) = -w;
      diag += w;
    }
    H(x, x) = diag;
  }
  return H;
}

Eigen::MatrixXd linear_operator_matrix(const KernelOperator& K) {
  const auto n = static_cast<Eigen::Index>(K.size());
  Eigen::MatrixXd A = -2.0 * K.pair_weights();
  for (Eigen::Index x = 0; x < n; ++x) {
    A(x, x) = 2.0 * (K.pair_weights().col(x).sum() + K.ext_weight(static_cast<std::size_t>(x)));
  }
  return A;
}

double lp_norm(const GridFunction& u, double p, double h, int dim) {
  const Power pw(p);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) sum += pw.abs_pow(u(i));
  return std::pow(std::pow(h, dim) * sum, 1.0 / p);
}

double lp_norm(const KernelOperator& K, const GridFunction& u) {
  check_size(K, u);
  return lp_norm(u, K.params().p, K.domain().spacing(), K.domain().dim());
}

double lp_norm_pow(const KernelOperator& K, const GridFunction& u) {
  check_size(K, u);
  const Power pw(K.params().p);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) sum += pw.abs_pow(u(i));
  return K.cell_volume() * sum;
}

GridFunction normalize(const GridFunction& u, double p, double h, int dim) {
  const double norm = lp_norm(u, p, h, dim);
  if (!(norm > 0.0)) throw Error(ErrorCode::ZeroFunction, "cannot normalize the zero function");
  return u / norm;
}

GridFunction normalize(const KernelOperator& K, const GridFunction& u) {
  check_size(K, u);
  return normalize(u, K.params().p, K.domain().spacing(), K.domain().dim());
}

double rayleigh_quotient(const KernelOperator& K, const GridFunction& u) {
  const double mass = lp_norm_pow(K, u);
  if (!(mass > 0.0)) {
    throw Error(ErrorCode::ZeroFunction, "Rayleigh quotient of the zero function");
  }
  return gagliardo_energy(K, u).total / mass;
}

double tail(const GridFunction& u, const Point& x0, double radius, const KernelOperator& K) {
  check_size(K, u);
  if (!(radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "tail radius must be positive");
  const Params& prm = K.params();
  const LatticeDomain& dom = K.domain();
  const double q = prm.kernel_exponent();
  double sum = 0.0;
  for (std::size_t i = 0; i < dom.size(); ++i) {
    const double r = distance(dom.coordinate(i), x0, dom.dim());
    if (r > radius) {
      sum += std::pow(std::abs(u(static_cast<Eigen::Index>(i))), prm.p - 1.0) * std::pow(r, -q);
    }
  }
  if (sum == 0.0) return 0.0;
  return std::pow(std::pow(radius, prm.sp()) * dom.cell_volume() * sum, 1.0 / (prm.p - 1.0));
}

GridFunction hidden_convexity_curve(const GridFunction& u, const GridFunction& v, double t,
                                    double p) {
  if (u.size() != v.size()) throw Error(ErrorCode::InvalidArgument, "size mismatch");
  if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorCode::InvalidArgument, "t must lie in [0,1]");
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (!(u(i) > 0.0) || !(v(i) > 0.0)) {
      throw Error(ErrorCode::NotPositive, "hidden convexity needs strictly positive functions");
    }
  }
  if (t == 0.0) return u;
  if (t == 1.0) return v;
  GridFunction sigma(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    sigma(i) = std::pow((1.0 - t) * std::pow(u(i), p) + t * std::pow(v(i), p), 1.0 / p);
  }
  return sigma;
}

double hidden_convexity_gap(const KernelOperator& K, const GridFunction& u,
                            const GridFunction& v, double t) {
  check_size(K, u);
  check_size(K, v);
  const GridFunction sigma = hidden_convexity_curve(u, v, t, K.params().p);
  if (t == 0.0) return 0.0;
  const double phi_u = gagliardo_energy(K, u).total;
  const double phi_v = gagliardo_energy(K, v).total;
  return (1.0 - t) * phi_u + t * phi_v - gagliardo_energy(K, sigma).total;
}

}  // namespace fracp
