#pragma once

#include <array>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace fraclift {

// Coordinates are stored in a fixed three-slot array; only the first
// `dim` entries are meaningful.
using Point = std::array<double, 3>;

struct Interval {
  double a = 0.0;
  double b = 1.0;
};

// Union of the open middle thirds removed from [0,1] through stage `depth`.
// An empty depth stands for the limiting Cantor complement; it is resolved
// to a finite depth whenever a resolution is known.
struct CantorComplement {
  std::optional<int> depth;
};

struct Disk {
  std::array<double, 2> center{0.0, 0.0};
  double r = 1.0;
};

struct Box {
  std::array<double, 2> lo{0.0, 0.0};
  std::array<double, 2> hi{1.0, 1.0};
};

struct Annulus {
  std::array<double, 2> center{0.0, 0.0};
  double r_in = 0.5;
  double r_out = 1.0;
};

using Primitive = std::variant<Interval, CantorComplement, Disk, Box, Annulus>;

struct BoundingBox {
  Point lo{};
  Point hi{};
  double diameter(int dim) const;
};

// Finite point sample of E = boundary of U.
struct PointSet {
  int dim = 1;
  std::vector<Point> points;
  double spacing = 0.0;
};

// A bounded open set U in R^1 or R^2 described as a union of primitives.
// Immutable once constructed.
class RegionSpec {
public:
  RegionSpec(int dim, std::vector<Primitive> primitives);

  int dim() const { return dim_; }
  const std::vector<Primitive>& primitives() const { return primitives_; }

  BoundingBox bounding_box() const;

  // Membership in the open set U. Throws ValidationError on a size mismatch.
  bool contains(std::span<const double> x) const;
  bool contains(const Point& p) const { return contains_unchecked(p.data()); }
  bool contains_unchecked(const double* x) const;

  // The closed set the lift is taken over. For ordinary primitives this is
  // the closure of U. A Cantor complement is lifted over all of [0,1], the
  // closure of the limiting Cantor complement, so that finite-depth pieces
  // of the Cantor set stay attached to the lifted boundary.
  bool support_contains(const double* x) const;

  // Exact count of the connected components of U (1D regions only).
  int exact_component_count() const;

  // Open intervals making up U (1D only), merged and sorted. Unbounded
  // Cantor depth is resolved against `resolution`.
  std::vector<Interval> intervals(double resolution = 0.0) const;

private:
  int dim_;
  std::vector<Primitive> primitives_;
};

// The depth-`depth` Cantor complement as a region. Throws for depth < 1.
RegionSpec cantor_complement(int depth);

// Smallest depth whose removed intervals are shorter than `spacing`.
int cantor_depth_for(double spacing);

// A spacing-net of E. Exact endpoints for 1D primitives; samples that fall
// inside U (covered by another primitive) are dropped.
PointSet boundary_samples(const RegionSpec& region, double spacing);

} // namespace fraclift
