// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include "fraclift/distfield.hpp"
#include "fraclift/lift.hpp"
#include "fraclift/mesh.hpp"
#include "fraclift/ops.hpp"
#include "fraclift/scene.hpp"
#include "fraclift/topo.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>

using namespace fraclift;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

struct Named {
  std::string label;
  RegionSpec region;
};

// Cantor grids with h = 3^-k / 4 so every gap endpoint is a node.
int cantor_resolution(int depth) { return 4 * static_cast<int>(std::lround(std::pow(3.0, depth + 1))); }

std::vector<Named> catalog() {
  std::vector<Named> out;
  out.push_back({"interval", RegionSpec(1, {Interval{0.0, 1.0}})});
  out.push_back({"two intervals", RegionSpec(1, {Interval{0.0, 1.0}, Interval{2.0, 3.0}})});
  for (int k = 1; k <= 7; ++k)
    out.push_back({"cantor " + std::to_string(k), cantor_complement(k)});
  out.push_back({"disk", RegionSpec(2, {Disk{{0.0, 0.0}, 1.0}})});
  out.push_back({"annulus", RegionSpec(2, {Annulus{{0.0, 0.0}, 0.5, 1.0}})});
  out.push_back({"two disks", RegionSpec(2, {Disk{{-1.5, 0.0}, 1.0}, Disk{{1.5, 0.0}, 1.0}})});
  return out;
}

int resolution_for(const Named& n) {
  if (n.label.rfind("cantor", 0) == 0)
    return cantor_resolution(std::stoi(n.label.substr(7)));
  return 256;
}

double spectral_norm(const Eigen::MatrixXcd& m) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

Outcome lipschitz() {
  double worst = 0.0;
  std::string where;
  for (const auto& n : catalog()) {
    const Grid g = Grid::covering(n.region, resolution_for(n));
    const double l = lipschitz_constant(distance_transform(g, n.region));
    if (l > worst) {
      worst = l;
      where = n.label;
    }
  }
  return {worst <= 1.0 + 1e-9, fmt("max Lipschitz constant %.12f", worst) + " (" + where + ")"};
}

Outcome distance_identities() {
  double worst = 0.0;
  for (const auto& n : catalog()) {
    const Grid g = Grid::covering(n.region, 256);
    const auto d = distance_transform(g, n.region);
    worst = std::max(worst, complement_distance_identity(d, n.region, 200) / g.h);
  }
  return {worst <= 2.0, fmt("max deviation %.4f h", worst)};
}

Outcome bijection() {
  std::string detail;
  bool ok = true;
  for (int k = 1; k <= 5; ++k) {
    const auto region = cantor_complement(k);
    const Grid g = Grid::covering(region, cantor_resolution(k));
    const auto d = distance_transform(g, region);
    LiftOptions opts;
    opts.t_resolution = matching_t_resolution(d, region);
    const auto ind = lift_open_set(region, d, opts);
    const auto base = label_components(BoolLattice::from_grid(g, rasterize(g, region)));
    const auto lifted = label_components(BoolLattice::from_indicator(ind));
    const int expected = (1 << k) - 1;
    bool verified = true;
    try {
      lifted_component_bijection(base, lifted, ind);
    } catch (const TopologyError&) {
      verified = false;
    }
    ok = ok && verified && base.component_count == expected && lifted.component_count == expected;
    detail += "k=" + std::to_string(k) + ":" + std::to_string(base.component_count) + "/" +
              std::to_string(lifted.component_count) + (verified ? " " : "(no bijection) ");
  }
  return {ok, detail};
}

Outcome cantor_connectivity() {
  std::string detail;
  bool ok = true;
  for (int k = 1; k <= 7; ++k) {
    const auto region = cantor_complement(k);
    const Grid g = Grid::covering(region, cantor_resolution(k));
    auto mesh = extract_lifted_boundary(distance_transform(g, region), region);
    const int c = mesh_component_count(mesh);
    ok = ok && c == 1;
    detail += std::to_string(c);
  }
  const RegionSpec two(1, {Interval{0.0, 1.0}, Interval{2.0, 3.0}});
  const Grid g = Grid::covering(two, 256);
  auto mesh = extract_lifted_boundary(distance_transform(g, two), two);
  const int control = mesh_component_count(mesh);
  ok = ok && control == 2;
  return {ok, "cantor k=1..7 components " + detail + ", two-interval control " + std::to_string(control)};
}

Outcome slice() {
  double worst = 0.0;
  std::string where;
  for (const auto& n : catalog()) {
    const Grid g = Grid::covering(n.region, 256);
    const auto mesh = extract_lifted_boundary(distance_transform(g, n.region), n.region);
    const double hd = hausdorff_distance(slice_t_zero(mesh), boundary_samples(n.region, g.h / 4.0)) / g.h;
    if (hd >= worst) {
      worst = hd;
      where = n.label;
    }
  }
  return {worst <= 1.0, fmt("max Hausdorff %.4f h", worst) + " (" + where + ")"};
}

// E is fitted over the Cantor scaling range 3^-1..3^-7. The depth-7 lifted
// boundary is a finite polyline, so its slope is read below the smallest gap
// (3^-7..3^-9) on a grid with h = 3^-9.
Outcome dimension_shift() {
  const int depth = 7;
  const auto region = cantor_complement(depth);
  std::vector<double> e_scales, lifted_scales;
  for (int j = 1; j <= depth; ++j)
    e_scales.push_back(std::pow(3.0, -j));
  for (int j = depth; j <= depth + 2; ++j)
    lifted_scales.push_back(std::pow(3.0, -j));
  const double oracle = std::log(2.0) / std::log(3.0);
  const auto e_fit = box_counting_dimension(boundary_samples(region, std::pow(3.0, -depth)), e_scales);
  const Grid g = Grid::covering(region, static_cast<int>(std::lround(std::pow(3.0, depth + 3))));
  const auto mesh = extract_lifted_boundary(distance_transform(g, region), region);
  const auto lifted_fit = box_counting_dimension(mesh, lifted_scales);
  const bool ok = std::abs(e_fit.slope - oracle) <= 0.03 && std::abs(lifted_fit.slope - 1.0) <= 0.05;
  return {ok, fmt("E slope %.4f (oracle %.4f), lifted slope %.4f", e_fit.slope, oracle, lifted_fit.slope)};
}

Outcome doubling() {
  const RegionSpec disk(2, {Disk{{0.0, 0.0}, 1.0}});
  const RegionSpec annulus(2, {Annulus{{0.0, 0.0}, 0.5, 1.0}});
  std::string detail;
  bool ok = true;
  for (int res : {64, 128}) {
    for (const auto* r : {&disk, &annulus}) {
      int chi = -99;
      try {
        const Grid g = Grid::covering(*r, res);
        chi = euler_characteristic(extract_lifted_boundary(distance_transform(g, *r), *r));
      } catch (const TopologyError&) {
      }
      const int expected = r == &disk ? 2 : 0;
      ok = ok && chi == expected;
      detail += (r == &disk ? "disk@" : "annulus@") + std::to_string(res) + " chi=" + std::to_string(chi) + " ";
    }
  }
  return {ok, detail};
}

Outcome comparability() {
  double worst = 0.0;
  for (const auto& n : catalog()) {
    if (n.label == "cantor 6" || n.label == "cantor 7")
      continue;
    const Grid g = Grid::covering(n.region, resolution_for(n));
    const auto d = distance_transform(g, n.region);
    for (double eps : {0.1, 0.2}) {
      const auto rho = regularized_distance(d, eps);
      for (std::size_t i = 0; i < d.values.size(); ++i) {
        const double lo = (1.0 - eps) * d.values[i], hi = (1.0 + eps) * d.values[i];
        const double excess = std::max(lo - rho.values[i], rho.values[i] - hi);
        worst = std::max(worst, excess);
      }
    }
  }
  return {worst <= 1e-12, fmt("max violation %.3g", worst)};
}

// Discrete Fourier projection onto modes 0..N/2 at the circle nodes.
Eigen::MatrixXcd fourier_projection(const CurveSampling& c) {
  const auto n = static_cast<Eigen::Index>(c.size());
  Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double dtheta = std::arg(c.points[static_cast<std::size_t>(i)]) -
                            std::arg(c.points[static_cast<std::size_t>(j)]);
      Complex s = 0.0;
      for (Eigen::Index m = 0; m <= n / 2; ++m)
        s += std::polar(1.0, static_cast<double>(m) * dtheta);
      f(i, j) = s / static_cast<double>(n);
    }
  return f;
}

Outcome hardy() {
  const auto circle = sample_circle({0.0, 0.0}, 1.0, 256);
  const auto p = cauchy_projection_curve(circle);
  const double defect = idempotence_defect(p);
  const double agreement = spectral_norm(p - fourier_projection(circle));
  std::vector<double> sphere;
  for (int level = 1; level <= 3; ++level)
    sphere.push_back(
        idempotence_defect(hardy_projection_surface(SurfaceSampling::from_mesh(make_icosphere(level)))));
  bool ok = defect <= 1e-6 && agreement <= 1e-6;
  for (std::size_t i = 1; i < sphere.size(); ++i)
    ok = ok && sphere[i] <= 0.6 * sphere[i - 1];
  return {ok, fmt("circle defect %.2e, Fourier gap %.2e, ", defect, agreement) +
                  fmt("sphere defects %.4f / %.4f / %.4f", sphere[0], sphere[1], sphere[2])};
}

Outcome toeplitz() {
  bool ok = true;
  std::string detail;
  const auto circle = sample_circle({0.0, 0.0}, 1.0, 128);
  for (int k = -2; k <= 2; ++k) {
    const auto op = toeplitz_curve(circle, SymbolSpec::winding(k));
    const auto rep = fredholm_index(op.T, op.P);
    ok = ok && rep.index == -k && rep.gap_ratio >= kRequiredGap;
    detail += "z^" + std::to_string(k) + "->" + std::to_string(rep.index) + fmt("(gap %.1e) ", rep.gap_ratio);
  }
  const RegionSpec rhombus(1, {Interval{1.0 / 3.0, 2.0 / 3.0}});
  const Grid g = Grid::covering(rhombus, 512);
  auto mesh = extract_lifted_boundary(regularized_distance(distance_transform(g, rhombus), 0.2), rhombus);
  const auto curve = sample_closed_curve(mesh, 128, 0);
  const auto op = toeplitz_curve(curve, SymbolSpec::winding(2));
  const auto rep = fredholm_index(op.T, op.P, kLiftedIndexTol);
  ok = ok && rep.index == -2 && rep.gap_ratio >= kRequiredGap;
  detail += "rhombus winding 2->" + std::to_string(rep.index) + fmt(" (gap %.1e)", rep.gap_ratio);
  return {ok, detail};
}

Outcome reproduction() {
  const auto surface = SurfaceSampling::from_mesh(make_icosphere(4));
  const std::vector<Quaternion> ones(surface.size(), Quaternion{1.0, 0.0, 0.0, 0.0});
  const auto inside = cauchy_integral_surface(surface, ones, {0.0, 0.0, 0.0});
  const auto outside = cauchy_integral_surface(surface, ones, {10.0, 0.0, 0.0});
  const double err = (inside - Quaternion{1.0, 0.0, 0.0, 0.0}).norm();
  const bool ok = err <= 0.02 && outside.norm() <= 1e-2;
  return {ok, std::to_string(surface.size()) + " triangles, " +
                  fmt("interior error %.2e, exterior norm %.2e", err, outside.norm())};
}

Outcome empty_interior() {
  bool ok = true;
  std::string detail;
  const std::vector<Named> scenes = {{"rhombus", RegionSpec(1, {Interval{0.0, 1.0}})},
                                     {"disk", RegionSpec(2, {Disk{{0.0, 0.0}, 1.0}})}};
  for (const auto& n : scenes) {
    std::vector<double> frac;
    for (int res : {32, 64, 128}) {
      const Grid g = Grid::covering(n.region, res);
      const auto d = distance_transform(g, n.region);
      LiftOptions opts;
      opts.t_resolution = matching_t_resolution(d, n.region);
      frac.push_back(empty_interior_check(lift_open_set(n.region, d, opts)));
    }
    for (std::size_t i = 1; i < frac.size(); ++i) {
      const double r = frac[i] / frac[i - 1];
      ok = ok && r >= 0.35 && r <= 0.65;
      detail += n.label + fmt(" ratio %.3f ", r);
    }
  }
  return {ok, detail};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
  const auto doc = nlohmann::json::parse(R"({
    "region": {"dimension": 1, "primitives": [{"type": "cantor_complement", "depth": 3}]},
    "grid": {"resolution": 324},
    "lift": {"regularize_epsilon": null},
    "analyses": [{"type": "components"}, {"type": "dimension", "scales": [0.333333333333, 0.111111111111, 0.037037037037]},
                 {"type": "euler"}],
    "output": {"formats": ["obj", "csv"]}
  })");
  const auto scene = parse_scene(doc);
  const auto root = std::filesystem::temp_directory_path() / "fraclift_acceptance";
  std::filesystem::remove_all(root);
  run_scene(scene, root / "a");
  run_scene(scene, root / "b");
  bool ok = true;
  for (const char* name : {"report.json", "manifest.json"})
    ok = ok && slurp(root / "a" / name) == slurp(root / "b" / name) && !slurp(root / "a" / name).empty();
  std::filesystem::remove_all(root);
  return {ok, ok ? "report.json and manifest.json byte-identical" : "outputs differ"};
}

} // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 lipschitz bound", lipschitz},
      {"2 distance identities", distance_identities},
      {"3 component bijection", bijection},
      {"4 cantor connectivity", cantor_connectivity},
      {"5 t=0 slice", slice},
      {"6 dimension shift", dimension_shift},
      {"7 doubling topology", doubling},
      {"8 regularization comparability", comparability},
      {"9 hardy projection", hardy},
      {"10 toeplitz index", toeplitz},
      {"11 quaternionic reproduction", reproduction},
      {"12 empty interior", empty_interior},
      {"13 determinism", determinism},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome out;
    try {
      out = check();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    failures += out.pass ? 0 : 1;
    std::printf("%s [%s] %s\n", out.pass ? "PASS" : "FAIL", name.c_str(), out.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
