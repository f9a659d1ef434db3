#pragma once

#include <random>

#include "fracp/energy.hpp"

namespace fracp::testing {

inline ShapeSpec intervals(std::initializer_list<Interval> parts) {
  ShapeSpec spec;
  for (const auto& iv : parts) spec.primitives.push_back(iv);
  return spec;
}

inline KernelOperator kernel(const ShapeSpec& spec, double h, Params params,
                             double trunc_factor = kDefaultTruncFactor) {
  return assemble_kernel(build_lattice(spec, h, params), params, trunc_factor);
}

inline GridFunction random_function(std::size_t n, std::mt19937_64& rng, double lo = -1.0,
                                    double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  GridFunction u(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = dist(rng);
  return u;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace fracp::testing
