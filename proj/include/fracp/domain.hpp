#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "fracp/params.hpp"

namespace fracp {

using Point = std::array<double, 2>;
using LatticeIndex = std::array<long, 2>;

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

struct Ball {
  std::vector<double> center;
  double radius = 1.0;
};

struct Box {
  std::vector<double> lo;
  std::vector<double> hi;
};

using Primitive = std::variant<Interval, Ball, Box>;

/// Constructive description of a bounded open set as a finite union of primitives.
struct ShapeSpec {
  std::vector<Primitive> primitives;
};

/// Lattice approximation of a bounded open set. Node k of the lattice sits at the
/// cell center origin + (k + 1/2) h; a node belongs to the domain iff that point
/// lies strictly inside the continuum set.
class LatticeDomain {
 public:
  /// Builds a domain from an explicit set of lattice indices (duplicates are rejected).
  LatticeDomain(int dim, double h, std::vector<LatticeIndex> nodes, Point origin = {0.0, 0.0});

  int dim() const { return dim_; }
  double spacing() const { return h_; }
  const Point& origin() const { return origin_; }
  std::size_t size() const { return nodes_.size(); }

  std::span<const LatticeIndex> nodes() const { return nodes_; }
  const LatticeIndex& index(std::size_t i) const { return nodes_[i]; }
  Point coordinate(std::size_t i) const { return coordinate_of(nodes_[i]); }
  Point coordinate_of(const LatticeIndex& k) const;

  /// Cell volume h^N.
  double cell_volume() const;
  /// h^N times the node count.
  double measure() const { return cell_volume() * static_cast<double>(size()); }

  std::span<const int> component_ids() const { return component_; }
  int component_count() const { return components_; }

  /// Mean of the node coordinates.
  const Point& centroid() const { return centroid_; }
  /// Radius of the ball about the centroid that contains every node.
  double bounding_radius() const { return bounding_radius_; }

  /// Sub-domain made of the listed node positions (indices into this domain).
  LatticeDomain subset(std::span<const std::size_t> which) const;

 private:
  void label_components();

  int dim_;
  double h_;
  Point origin_;
  std::vector<LatticeIndex> nodes_;
  std::vector<int> component_;
  int components_ = 0;
  Point centroid_{0.0, 0.0};
  double bounding_radius_ = 0.0;
};

LatticeDomain build_lattice(const ShapeSpec& spec, double h, const Params& params);

double measure(const LatticeDomain& dom);
int connected_components(const LatticeDomain& dom);

/// Euclidean distance between two points of R^dim.
double distance(const Point& a, const Point& b, int dim);

}  // namespace fracp
