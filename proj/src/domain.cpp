#include "fracp/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <sstream>

#include "fracp/error.hpp"

namespace fracp {

namespace {

bool strictly_inside(const Primitive& prim, const Point& x, int dim) {
  return std::visit(
      [&](const auto& g) -> bool {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, Interval>) {
          return g.lo < x[0] && x[0] < g.hi;
        } else if constexpr (std::is_same_v<T, Ball>) {
          double r2 = 0.0;
          for (int d = 0; d < dim; ++d) r2 += (x[d] - g.center[d]) * (x[d] - g.center[d]);
          return r2 < g.radius * g.radius;
        } else {
          for (int d = 0; d < dim; ++d) {
            if (!(g.lo[d] < x[d] && x[d] < g.hi[d])) return false;
          }
          return true;
        }
      },
      prim);
}

// Axis-aligned bounding box of a primitive, after checking its dimension and measure.
std::pair<Point, Point> bounds(const Primitive& prim, int dim) {
  auto mismatch = [&](const char* what, std::size_t got) {
    std::ostringstream os;
    os << what << " has dimension " << got << " but params.dim = " << dim;
    throw Error(ErrorCode::DimensionMismatch, os.str());
  };
  auto degenerate = [](const char* what) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " has non-positive measure");
  };
  Point lo{0.0, 0.0};
  Point hi{0.0, 0.0};
  std::visit(
      [&](const auto& g) {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, Interval>) {
          if (dim != 1) mismatch("interval", 1);
          if (!(g.hi > g.lo)) degenerate("interval");
          lo[0] = g.lo;
          hi[0] = g.hi;
        } else if constexpr (std::is_same_v<T, Ball>) {
          if (static_cast<int>(g.center.size()) != dim) mismatch("ball", g.center.size());
          if (!(g.radius > 0.0)) degenerate("ball");
          for (int d = 0; d < dim; ++d) {
            lo[d] = g.center[d] - g.radius;
            hi[d] = g.center[d] + g.radius;
          }
        } else {
          if (static_cast<int>(g.lo.size()) != dim || static_cast<int>(g.hi.size()) != dim) {
            mismatch("box", g.lo.size());
          }
          for (int d = 0; d < dim; ++d) {
            if (!(g.hi[d] > g.lo[d])) degenerate("box");
            lo[d] = g.lo[d];
            hi[d] = g.hi[d];
          }
        }
      },
      prim);
  for (int d = 0; d < dim; ++d) {
    if (!std::isfinite(lo[d]) || !std::isfinite(hi[d])) {
      throw Error(ErrorCode::InvalidArgument, "primitive is unbounded");
    }
  }
  return {lo, hi};
}

}  // namespace

double distance(const Point& a, const Point& b, int dim) {
  double r2 = 0.0;
  for (int d = 0; d < dim; ++d) r2 += (a[d] - b[d]) * (a[d] - b[d]);
  return std::sqrt(r2);
}

LatticeDomain::LatticeDomain(int dim, double h, std::vector<LatticeIndex> nodes, Point origin)
    : dim_(dim), h_(h), origin_(origin), nodes_(std::move(nodes)) {
  if (dim_ != 1 && dim_ != 2) {
    throw Error(ErrorCode::InvalidParams, "dim must be 1 or 2");
  }
  if (!(h_ > 0.0) || !std::isfinite(h_)) {
    throw Error(ErrorCode::InvalidArgument, "lattice spacing h must be positive");
  }
  if (nodes_.empty()) {
    throw Error(ErrorCode::EmptyDomain, "no lattice point inside the domain");
  }
  if (dim_ == 1) {
    for (auto& k : nodes_) k[1] = 0;
  }
  std::sort(nodes_.begin(), nodes_.end());
  if (std::adjacent_find(nodes_.begin(), nodes_.end()) != nodes_.end()) {
    throw Error(ErrorCode::InvalidArgument, "duplicate lattice node");
  }

  for (const auto& k : nodes_) {
    const Point x = coordinate_of(k);
    for (int d = 0; d < dim_; ++d) centroid_[d] += x[d];
  }
  for (int d = 0; d < dim_; ++d) centroid_[d] /= static_cast<double>(nodes_.size());
  for (const auto& k : nodes_) {
    bounding_radius_ = std::max(bounding_radius_, distance(coordinate_of(k), centroid_, dim_));
  }
  label_components();
}

Point LatticeDomain::coordinate_of(const LatticeIndex& k) const {
  Point x{0.0, 0.0};
  for (int d = 0; d < dim_; ++d) {
    x[d] = origin_[d] + (static_cast<double>(k[d]) + 0.5) * h_;
  }
  return x;
}

double LatticeDomain::cell_volume() const { return std::pow(h_, dim_); }

void LatticeDomain::label_components() {
  // nodes_ is sorted, so lookups by binary search suffice.
  auto find = [&](const LatticeIndex& k) -> long {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), k);
    if (it == nodes_.end() || *it != k) return -1;
    return static_cast<long>(it - nodes_.begin());
  };
  component_.assign(nodes_.size(), -1);
  components_ = 0;
  std::queue<std::size_t> frontier;
  for (std::size_t seed = 0; seed < nodes_.size(); ++seed) {
    if (component_[seed] >= 0) continue;
    component_[seed] = components_;
    frontier.push(seed);
    while (!frontier.empty()) {
      const std::size_t i = frontier.front();
      frontier.pop();
      for (int d = 0; d < dim_; ++d) {
        for (long step : {-1L, 1L}) {
          LatticeIndex k = nodes_[i];
          k[d] += step;
          const long j = find(k);
          if (j >= 0 && component_[j] < 0) {
            component_[j] = components_;
            frontier.push(static_cast<std::size_t>(j));
          }
        }
      }
    }
    ++components_;
  }
}

LatticeDomain LatticeDomain::subset(std::span<const std::size_t> which) const {
  std::vector<LatticeIndex> sub;
  sub.reserve(which.size());
  for (std::size_t i : which) {
    if (i >= nodes_.size()) throw Error(ErrorCode::InvalidArgument, "subset index out of range");
    sub.push_back(nodes_[i]);
  }
  return LatticeDomain(dim_, h_, std::move(sub), origin_);
}

LatticeDomain build_lattice(const ShapeSpec& spec, double h, const Params& params) {
  validate(params);
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw Error(ErrorCode::InvalidArgument, "lattice spacing h must be positive");
  }
  if (spec.primitives.empty()) {
    throw Error(ErrorCode::InvalidArgument, "shape spec has no primitives");
  }
  const int dim = params.dim;
  std::map<LatticeIndex, bool> inside;
  for (const auto& prim : spec.primitives) {
    const auto [lo, hi] = bounds(prim, dim);
    std::array<long, 2> kmin{0, 0};
    std::array<long, 2> kmax{0, 0};
    for (int d = 0; d < dim; ++d) {
      kmin[d] = static_cast<long>(std::floor(lo[d] / h - 0.5)) - 1;
      kmax[d] = static_cast<long>(std::ceil(hi[d] / h - 0.5)) + 1;
    }
    for (long i = kmin[0]; i <= kmax[0]; ++i) {
      for (long j = kmin[1]; j <= kmax[1]; ++j) {
        const LatticeIndex k{i, j};
        Point x{0.0, 0.0};
        for (int d = 0; d < dim; ++d) x[d] = (static_cast<double>(k[d]) + 0.5) * h;
        if (strictly_inside(prim, x, dim)) inside[k] = true;
      }
    }
  }
  std::vector<LatticeIndex> nodes;
  nodes.reserve(inside.size());
  for (const auto& [k, flag] : inside) nodes.push_back(k);
  if (nodes.empty()) {
    throw Error(ErrorCode::EmptyDomain, "no lattice cell center falls inside the shape");
  }
  return LatticeDomain(dim, h, std::move(nodes));
}

double measure(const LatticeDomain& dom) { return dom.measure(); }

int connected_components(const LatticeDomain& dom) { return dom.component_count(); }

}  // namespace fracp
