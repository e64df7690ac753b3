#pragma once

#include "fraclift/region.hpp"

#include <array>
#include <cstddef>
#include <vector>

namespace fraclift {

// Polyline (base_dim = 1, vertices in (x, t)) or triangle mesh
// (base_dim = 2, vertices in (x, y, t)). Cells hold vertex indices; only
// the first `cell_arity()` entries of each cell are used.
struct BoundaryMesh {
  int base_dim = 1;
  double h = 0.0;
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> cells;
  std::vector<int> component_id;

  int ambient_dim() const { return base_dim + 1; }
  int cell_arity() const { return base_dim + 1; }
  bool empty() const { return cells.empty(); }

  // Total length (polyline) or area (triangles).
  double measure() const;
};

double cell_measure(const BoundaryMesh& mesh, std::size_t cell);

// Unit sphere triangulated by repeated 4:1 subdivision of an icosahedron
// (20 * 4^levels triangles, outward orientation). Stored with base_dim 2
// so that it can stand in for a lifted boundary.
BoundaryMesh make_icosphere(int levels, double radius = 1.0);

} // namespace fraclift
