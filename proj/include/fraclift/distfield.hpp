#pragma once

#include "fraclift/region.hpp"

#include <array>
#include <cstddef>
#include <vector>

namespace fraclift {

// Uniform node lattice in R^1 or R^2 with isotropic spacing h.
// Node (i, j) sits at origin + h * (i, j); linear index is i + nodes[0] * j.
struct Grid {
  int dim = 1;
  std::array<double, 2> origin{0.0, 0.0};
  std::array<int, 2> nodes{2, 1};
  double h = 1.0;

  // Lattice covering the region's bounding box inflated on every side by
  // padding_factor bounding-box diameters. `resolution` is the number of
  // cells along the longest padded axis.
  static Grid covering(const RegionSpec& region, int resolution, double padding_factor = 1.0);

  std::size_t size() const {
    return static_cast<std::size_t>(nodes[0]) * static_cast<std::size_t>(nodes[1]);
  }
  std::size_t index(int i, int j = 0) const {
    return static_cast<std::size_t>(i) + static_cast<std::size_t>(nodes[0]) * static_cast<std::size_t>(j);
  }
  std::array<int, 2> node_of(std::size_t idx) const {
    return {static_cast<int>(idx % static_cast<std::size_t>(nodes[0])),
            static_cast<int>(idx / static_cast<std::size_t>(nodes[0]))};
  }
  Point coord(std::size_t idx) const {
    const auto ij = node_of(idx);
    return {origin[0] + h * ij[0], dim == 2 ? origin[1] + h * ij[1] : 0.0, 0.0};
  }
};

// One non-negative value per grid node (a length).
struct ScalarField {
  Grid grid;
  std::vector<double> values;

  double at(int i, int j = 0) const { return values[grid.index(i, j)]; }
  double max_value() const;
};

// Nodes of the grid lying in U.
std::vector<char> rasterize(const Grid& grid, const RegionSpec& region);

// Exact squared Euclidean distance transform of a binary seed mask
// (lower envelope of parabolas, one pass per axis), returned in units of
// squared node steps. Non-seed nodes with no seed anywhere get +inf.
std::vector<double> squared_distance_steps(const Grid& grid, const std::vector<char>& seeds);

// d_E at every node: E is sampled at spacing h/2, each sample is snapped to
// its nearest node and the exact distance to those nodes is returned.
// Throws NumericalError if the sample set is empty.
ScalarField distance_transform(const Grid& grid, const RegionSpec& region);

// Largest |value difference| / h over axis-adjacent node pairs.
double lipschitz_constant(const ScalarField& field);

// Max deviation between the field and brute-force dist(x, R^n \ U) and
// dist(x, R^n \ V) at `sample_count` nodes x of U (V = x's component).
// Both complements are sampled by the grid nodes outside U (resp. V) plus
// points of E, which keeps gaps narrower than h in the complement.
// Sample choice is deterministic. Throws if U has no grid nodes.
double complement_distance_identity(const ScalarField& field, const RegionSpec& region,
                                    std::size_t sample_count);

// rho(x) = mean of the field over nodes within epsilon * d(x) of x.
// Requires 0 < epsilon < 1/2.
ScalarField regularized_distance(const ScalarField& field, double epsilon);

} // namespace fraclift
