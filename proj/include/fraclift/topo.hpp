#pragma once

#include "fraclift/distfield.hpp"
#include "fraclift/lift.hpp"
#include "fraclift/mesh.hpp"

#include <array>
#include <span>
#include <vector>

namespace fraclift {

// Dense boolean lattice with up to three axes (unused axes have extent 1).
// Linear index is x + dims[0] * (y + dims[1] * z).
struct BoolLattice {
  std::array<int, 3> dims{1, 1, 1};
  std::vector<char> data;

  static BoolLattice from_grid(const Grid& grid, std::vector<char> mask);
  static BoolLattice from_indicator(const LiftedIndicator& indicator);
};

struct LabelField {
  std::array<int, 3> dims{1, 1, 1};
  std::vector<int> labels; // 0 = unoccupied, otherwise 1..component_count
  int component_count = 0;
};

// Face-adjacency components. Labels are assigned in increasing order of the
// smallest linear index in each component.
LabelField label_components(const BoolLattice& lattice);

// images[v - 1] lists the lifted labels met by the lift of base component v.
struct ComponentMap {
  std::vector<std::vector<int>> images;
  int lifted_count = 0;
};

// Maps each component V of U to the lifted components its lift meets and
// checks that the map is a bijection. Throws TopologyError naming the
// offending labels otherwise.
ComponentMap lifted_component_bijection(const LabelField& labels_base,
                                        const LabelField& labels_lifted,
                                        const LiftedIndicator& indicator);

// Components of the vertex-cell graph; fills mesh.component_id.
int mesh_component_count(BoundaryMesh& mesh);

struct DimensionFit {
  std::vector<double> scales; // strictly decreasing
  std::vector<long> counts;
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0; // RMS deviation of log counts from the fit
};

// Box counting with boxes anchored at the target's lower bounding corner.
DimensionFit box_counting_dimension(const PointSet& target, std::span<const double> scales);
// Mesh cells are sampled at spacing <= smallest scale / 4 before counting.
DimensionFit box_counting_dimension(const BoundaryMesh& target, std::span<const double> scales);

// V - E + F for a watertight triangle mesh, V - E for a closed polyline.
// Throws TopologyError listing offending edges/vertices otherwise.
int euler_characteristic(const BoundaryMesh& mesh);

} // namespace fraclift
