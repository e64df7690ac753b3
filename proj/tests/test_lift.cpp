#include "doctest.h"

#include "fraclift/distfield.hpp"
#include "fraclift/error.hpp"
#include "fraclift/lift.hpp"
#include "fraclift/topo.hpp"

#include <cmath>
#include <numbers>

using namespace fraclift;

namespace {

LiftedIndicator lift_with(const RegionSpec& u, const ScalarField& d, int t_res, double t_max) {
  LiftOptions opts;
  opts.t_resolution = t_res;
  opts.t_max = t_max;
  return lift_open_set(u, d, opts);
}

bool has_vertex(const BoundaryMesh& m, double x, double t, double tol) {
  for (const auto& v : m.vertices)
    if (std::abs(v[0] - x) <= tol && std::abs(v[1] - t) <= tol)
      return true;
  return false;
}

} // namespace

TEST_SUITE("lift") {
  TEST_CASE("diamond occupancy and area") {
    const RegionSpec u(1, {Interval{-1.0, 1.0}});
    const Grid g = Grid::covering(u, 240);
    const auto d = distance_transform(g, u);
    const auto ind = lift_with(u, d, 80, 1.0);
    CHECK(ind.occupied(120, 60)); // (x, t) = (0, 0.5)
    CHECK_FALSE(ind.occupied(120, 80));
    const double area = static_cast<double>(ind.occupied_count()) * ind.cell_volume();
    CHECK(std::abs(area - 2.0) <= 4.0 * g.h);
    CHECK_THROWS_AS(lift_with(u, d, 80, 0.5), ValidationError);
    LiftOptions bad;
    bad.t_resolution = 1;
    CHECK_THROWS_AS(lift_open_set(u, d, bad), ValidationError);
  }

  TEST_CASE("occupancy is even in t") {
    const RegionSpec u(2, {Disk{{0, 0}, 1.0}, Box{{0.5, -0.2}, {1.6, 0.3}}});
    const Grid g = Grid::covering(u, 48);
    const auto d = distance_transform(g, u);
    const auto ind = lift_open_set(u, d, {20, std::nullopt, nullptr});
    const int nt = ind.t_axis.nodes();
    for (std::size_t b = 0; b < g.size(); ++b)
      for (int k = 0; k < nt; ++k)
        REQUIRE(ind.occupied(b, k) == ind.occupied(b, nt - 1 - k));
  }

  TEST_CASE("shrinking U never adds occupied nodes") {
    const RegionSpec big(2, {Disk{{-0.6, 0}, 0.5}, Disk{{0.6, 0}, 0.5}});
    const RegionSpec small(2, {Disk{{-0.6, 0}, 0.5}});
    const Grid g = Grid::covering(big, 64);
    const auto a = lift_with(big, distance_transform(g, big), 16, 0.6);
    const auto b = lift_with(small, distance_transform(g, small), 16, 0.6);
    for (std::size_t i = 0; i < a.occupancy.size(); ++i)
      if (b.occupancy[i])
        REQUIRE(a.occupancy[i]);
  }

  TEST_CASE("union of component lifts equals the lift of U") {
    const RegionSpec u = cantor_complement(3);
    const Grid g = Grid::covering(u, 4 * 81);
    const auto d = distance_transform(g, u);
    const int t_res = matching_t_resolution(d, u);
    const auto full = lift_with(u, d, t_res, d.max_value());
    const auto labels = label_components(BoolLattice::from_grid(g, rasterize(g, u)));
    std::vector<char> joined(full.occupancy.size(), 0);
    for (int c = 1; c <= labels.component_count; ++c) {
      std::vector<char> mask(g.size(), 0);
      for (std::size_t i = 0; i < g.size(); ++i)
        mask[i] = labels.labels[i] == c;
      LiftOptions opts{t_res, d.max_value(), &mask};
      const auto part = lift_open_set(u, d, opts);
      for (std::size_t i = 0; i < joined.size(); ++i)
        joined[i] = static_cast<char>(joined[i] | part.occupancy[i]);
    }
    CHECK(joined == full.occupancy);
  }

  TEST_CASE("disk lift volume") {
    const RegionSpec u(2, {Disk{{0, 0}, 1.0}});
    const Grid g = Grid::covering(u, 128);
    const auto d = distance_transform(g, u);
    const auto ind = lift_open_set(u, d, {matching_t_resolution(d, u), std::nullopt, nullptr});
    // Midpoint rule for the integral of 2(1 - r) over the unit disk.
    double oracle = 0.0;
    const int nr = 2000;
    for (int i = 0; i < nr; ++i) {
      const double r = (i + 0.5) / nr;
      oracle += 2.0 * (1.0 - r) * 2.0 * std::numbers::pi * r / nr;
    }
    const double volume = static_cast<double>(ind.occupied_count()) * ind.cell_volume();
    CHECK(volume == doctest::Approx(oracle).epsilon(0.05));
  }

  TEST_CASE("rhombus polyline") {
    const RegionSpec u(1, {Interval{0.0, 1.0}});
    const Grid g = Grid::covering(u, 300); // h = 0.01
    auto mesh = extract_lifted_boundary(distance_transform(g, u), u);
    CHECK(mesh.base_dim == 1);
    CHECK(has_vertex(mesh, 0.0, 0.0, 1e-9));
    CHECK(has_vertex(mesh, 0.5, 0.5, 1e-9));
    CHECK(has_vertex(mesh, 1.0, 0.0, 1e-9));
    CHECK(has_vertex(mesh, 0.5, -0.5, 1e-9));
    CHECK(mesh.measure() == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-9));
    CHECK(euler_characteristic(mesh) == 0);
    CHECK(mesh_component_count(mesh) == 1);
    const auto zero = slice_t_zero(mesh);
    REQUIRE(zero.points.size() == 2);
    CHECK(zero.points[0][0] == doctest::Approx(0.0));
    CHECK(zero.points[1][0] == doctest::Approx(1.0));
  }

  TEST_CASE("cantor depth 2 slice holds the eight endpoints") {
    const RegionSpec u = cantor_complement(2);
    const Grid g = Grid::covering(u, 4 * 27);
    const auto mesh = extract_lifted_boundary(distance_transform(g, u), u);
    const auto zero = slice_t_zero(mesh);
    const auto e = boundary_samples(u, g.h);
    CHECK(e.points.size() == 8);
    CHECK(hausdorff_distance(zero, e) <= g.h);
  }

  TEST_CASE("disk boundary: area, vertex bounds and slice") {
    const RegionSpec u(2, {Disk{{0, 0}, 1.0}});
    const Grid g = Grid::covering(u, 128);
    const auto mesh = extract_lifted_boundary(distance_transform(g, u), u);
    CHECK(mesh.measure() == doctest::Approx(2.0 * std::numbers::pi * std::sqrt(2.0)).epsilon(0.05));
    for (const auto& v : mesh.vertices) {
      const double r = std::hypot(v[0], v[1]);
      CHECK(r <= 1.0 + g.h);
      CHECK(std::abs(v[2]) - std::max(0.0, 1.0 - r) <= g.h);
    }
    const auto zero = slice_t_zero(mesh);
    for (const auto& p : zero.points)
      CHECK(std::abs(std::hypot(p[0], p[1]) - 1.0) <= g.h);
    CHECK(hausdorff_distance(zero, boundary_samples(u, g.h / 4.0)) <= g.h);
  }

  TEST_CASE("empty interior fraction") {
    const RegionSpec u(1, {Interval{-1.0, 1.0}});
    std::vector<double> frac;
    for (int res : {64, 128}) {
      const Grid g = Grid::covering(u, res);
      const auto d = distance_transform(g, u);
      frac.push_back(empty_interior_check(lift_open_set(u, d, {matching_t_resolution(d, u), std::nullopt, nullptr})));
    }
    CHECK(frac[0] > 0.0);
    CHECK(frac[1] / frac[0] == doctest::Approx(0.5).epsilon(0.3));

    LiftedIndicator full;
    full.dims = {4, 5, 6};
    full.occupancy.assign(120, 1);
    // Only the outer shell touches the (unoccupied) outside.
    CHECK(empty_interior_check(full) == doctest::Approx((120.0 - 2 * 3 * 4) / 120.0));
  }

  TEST_CASE("lift rejects mismatched inputs") {
    const RegionSpec one(1, {Interval{0.0, 1.0}});
    const RegionSpec two(2, {Disk{{0, 0}, 1.0}});
    const auto d2 = distance_transform(Grid::covering(two, 16), two);
    CHECK_THROWS_AS(lift_open_set(one, d2), ValidationError);
    CHECK_THROWS_AS(extract_lifted_boundary(d2, one), ValidationError);
  }

  TEST_CASE("regularized rhombus stays a single closed loop") {
    const RegionSpec u(1, {Interval{1.0 / 3.0, 2.0 / 3.0}});
    const Grid g = Grid::covering(u, 512);
    auto mesh = extract_lifted_boundary(regularized_distance(distance_transform(g, u), 0.2), u);
    CHECK(euler_characteristic(mesh) == 0);
    CHECK(mesh_component_count(mesh) == 1);
  }
}
