#pragma once

#include "fraclift/distfield.hpp"
#include "fraclift/mesh.hpp"
#include "fraclift/region.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

namespace fraclift {

// Symmetric t axis: nodes t_k = -t_max + k * spacing(), k = 0..resolution.
struct TAxis {
  double t_max = 1.0;
  int resolution = 2;

  double spacing() const { return 2.0 * t_max / resolution; }
  int nodes() const { return resolution + 1; }
  double t(int k) const { return -t_max + spacing() * k; }
};

// Occupancy of the lifted open set on the (n+1)-dimensional lattice.
// Lattice dims are {nx, nt, 1} for n = 1 and {nx, ny, nt} for n = 2; the
// t index is always the last used axis.
struct LiftedIndicator {
  Grid base;
  TAxis t_axis;
  std::array<int, 3> dims{1, 1, 1};
  std::vector<char> occupancy;

  std::size_t index(std::size_t base_node, int k) const {
    return base_node + base.size() * static_cast<std::size_t>(k);
  }
  bool occupied(std::size_t base_node, int k) const { return occupancy[index(base_node, k)] != 0; }
  std::size_t occupied_count() const;
  // Volume element of one lattice node: h^n * t spacing.
  double cell_volume() const;
};

struct LiftOptions {
  int t_resolution = 64;
  // Defaults to the largest height over the lifted base nodes.
  std::optional<double> t_max;
  // Restrict the base set to these nodes (one entry per base node). Used to
  // lift a single component V instead of all of U.
  const std::vector<char>* base_mask = nullptr;
};

// (x, t) is occupied iff x is in U (or in the base mask) and |t| < height(x).
// `height` is d_E or its regularization. Throws if t_max < max height on U.
LiftedIndicator lift_open_set(const RegionSpec& region, const ScalarField& height,
                              const LiftOptions& options = {});

// t resolution giving t spacing no coarser than the base spacing and an
// even cell count (so t = 0 is a lattice row).
int matching_t_resolution(const ScalarField& height, const RegionSpec& region);

// The graph of +height and -height over the lifted base cells. Base cells
// are kept when a corner lies in U or all corners lie in the region's
// support. Top and bottom sheets share their vertices along the rim of the
// kept cells; for n = 1 they are also shared wherever height <= h/2.
// Throws NumericalError when no cell is kept.
BoundaryMesh extract_lifted_boundary(const ScalarField& height, const RegionSpec& region);

// Base coordinates of mesh vertices with |t| <= h/2 (deduplicated).
PointSet slice_t_zero(const BoundaryMesh& mesh);

// Fraction of lattice nodes with a face neighbour of different occupancy
// (nodes outside the lattice count as unoccupied).
double empty_interior_check(const LiftedIndicator& indicator);

// Symmetric Hausdorff distance between two point sets of the same dimension.
double hausdorff_distance(const PointSet& a, const PointSet& b);

} // namespace fraclift
