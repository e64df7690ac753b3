#include "doctest.h"

#include "fraclift/distfield.hpp"
#include "fraclift/error.hpp"
#include "fraclift/lift.hpp"
#include "fraclift/ops.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace fraclift;

namespace {

constexpr double kPi = std::numbers::pi;

Quaternion random_quaternion(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  return {u(rng), u(rng), u(rng), u(rng)};
}

double qdist(const Quaternion& a, const Quaternion& b) { return (a - b).norm(); }

Eigen::VectorXcd sampled(const CurveSampling& c, auto f) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(c.size()));
  for (std::size_t j = 0; j < c.size(); ++j)
    v(static_cast<Eigen::Index>(j)) = f(c.points[j]);
  return v;
}

double max_abs(const Eigen::VectorXcd& v) { return v.cwiseAbs().maxCoeff(); }

} // namespace

TEST_SUITE("ops") {
  TEST_CASE("quaternion algebra") {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 200; ++i) {
      const auto a = random_quaternion(rng), b = random_quaternion(rng), c = random_quaternion(rng);
      CHECK(qdist((a * b) * c, a * (b * c)) <= 1e-12);
      CHECK((a * b).norm() == doctest::Approx(a.norm() * b.norm()).epsilon(1e-12));
      CHECK(qdist((a * b).conj(), b.conj() * a.conj()) <= 1e-12);
    }
    const Quaternion i{0, 1, 0, 0}, j{0, 0, 1, 0}, k{0, 0, 0, 1};
    CHECK(i * j == k);
    CHECK(j * i == Quaternion{0, 0, 0, -1});
    CHECK(i * i == Quaternion{-1, 0, 0, 0});
  }

  TEST_CASE("circle sampling") {
    const auto c = sample_circle({0.0, 0.0}, 1.0, 4);
    REQUIRE(c.size() == 4);
    CHECK(std::abs(c.points[1] - Complex{0.0, 1.0}) <= 1e-15);
    CHECK(std::abs(c.points[2] - Complex{-1.0, 0.0}) <= 1e-15);
    for (double w : c.weights)
      CHECK(w == doctest::Approx(kPi / 2.0));
    CHECK(c.length() == doctest::Approx(2.0 * kPi));
    CHECK(c.signed_area() > 0.0);
    CHECK(c.reversed().signed_area() < 0.0);
    CHECK_THROWS_AS(sample_circle({0, 0}, 1.0, 2), ValidationError);
    CHECK_THROWS_AS(sample_circle({0, 0}, 0.0, 8), ValidationError);
  }

  TEST_CASE("projection reproduces constants and is idempotent on the circle") {
    const auto c = sample_circle({0.3, -0.2}, 1.5, 64);
    const auto p = cauchy_projection_curve(c);
    const Eigen::VectorXcd one = Eigen::VectorXcd::Ones(64);
    CHECK(max_abs(p * one - one) <= 1e-10);
    CHECK(idempotence_defect(p) <= 1e-8);
  }

  TEST_CASE("interior and exterior boundary values") {
    const auto c = sample_circle({0.0, 0.0}, 1.0, 256);
    const auto p = cauchy_projection_curve(c);
    // Holomorphic inside: reproduced.
    const auto inner = sampled(c, [](Complex z) { return 1.0 / (z - Complex{2.0, 0.5}); });
    CHECK(max_abs(p * inner - inner) <= 1e-4);
    // Holomorphic outside and vanishing at infinity: annihilated.
    const auto outer = sampled(c, [](Complex z) { return 1.0 / (z - Complex{0.3, 0.1}); });
    CHECK(max_abs(p * outer) <= 1e-4);
  }

  TEST_CASE("Toeplitz operators with z and 1/z act as shifts") {
    const int n = 64;
    const auto c = sample_circle({0.0, 0.0}, 1.0, n);
    const auto up = toeplitz_curve(c, SymbolSpec::winding(1));
    const auto down = toeplitz_curve(c, SymbolSpec::winding(-1));
    for (int k = 0; k < 6; ++k) {
      const auto zk = sampled(c, [k](Complex z) { return std::pow(z, k); });
      const auto next = sampled(c, [k](Complex z) { return std::pow(z, k + 1); });
      CHECK(max_abs(up.T * zk - next) <= 1e-6);
      if (k == 0) {
        CHECK(max_abs(down.T * zk) <= 1e-6);
      } else {
        const auto prev = sampled(c, [k](Complex z) { return std::pow(z, k - 1); });
        CHECK(max_abs(down.T * zk - prev) <= 1e-6);
      }
    }
    CHECK(up.min_symbol_modulus == doctest::Approx(1.0));
  }

  TEST_CASE("circle index equals minus the winding number") {
    const auto c = sample_circle({0.0, 0.0}, 1.0, 64);
    for (int k = -3; k <= 3; ++k) {
      const auto op = toeplitz_curve(c, SymbolSpec::winding(k));
      const auto r = fredholm_index(op.T, op.P);
      CHECK(r.index == -k);
      CHECK(r.reliable);
      CHECK(r.counted == std::abs(k));
    }
  }

  TEST_CASE("index ignores symbol scaling") {
    const auto c = sample_circle({0.0, 0.0}, 1.0, 64);
    const auto base = SymbolSpec::winding(2).evaluate(c);
    for (double s : {0.25, 1.0, 7.0}) {
      std::vector<Complex> v;
      for (auto a : base)
        v.push_back(s * a);
      const auto op = toeplitz_curve(c, SymbolSpec::explicit_values(v));
      CHECK(fredholm_index(op.T, op.P).index == -2);
    }
    CHECK_THROWS_AS(toeplitz_curve(c, SymbolSpec::explicit_values({1.0, 2.0})), ValidationError);
    CHECK_THROWS_AS(toeplitz_curve(c, SymbolSpec::explicit_values(std::vector<Complex>(64, 0.0))),
                    ValidationError);
    const auto op = toeplitz_curve(c, SymbolSpec::winding(1));
    CHECK_THROWS_AS(fredholm_index(op.T, op.P, 0.0), ValidationError);
    CHECK_THROWS_AS(fredholm_index(op.T, op.P.topLeftCorner(10, 10)), ValidationError);
  }

  TEST_CASE("reversing orientation negates the singular operator") {
    const int n = 48;
    const auto c = sample_circle({0.1, 0.0}, 1.0, n);
    const auto s = cauchy_singular_curve(c);
    const auto r = cauchy_singular_curve(c.reversed());
    double worst = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        worst = std::max(worst, std::abs(r(a, b) + s((n - a) % n, (n - b) % n)));
    CHECK(worst <= 1e-10);
  }

  TEST_CASE("rhombus loop from the lifted boundary") {
    const RegionSpec u(1, {Interval{0.0, 1.0}});
    const auto mesh = extract_lifted_boundary(distance_transform(Grid::covering(u, 300), u), u);
    const auto loop = sample_closed_curve(mesh, 64);
    CHECK(loop.size() == 64);
    CHECK(loop.length() == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-6));
    CHECK(std::abs(loop.signed_area()) == doctest::Approx(0.5).epsilon(0.01));
    CHECK_THROWS_AS(sample_closed_curve(mesh, 8), ValidationError);

    const auto reg = extract_lifted_boundary(regularized_distance(distance_transform(Grid::covering(u, 300), u), 0.2), u);
    const auto rl = sample_closed_curve(reg, 64);
    // The regularized height lies between 0.8 d and 1.2 d.
    CHECK(std::abs(rl.signed_area()) >= 0.8 * 0.5 - 0.02);
    CHECK(std::abs(rl.signed_area()) <= 1.2 * 0.5 + 0.02);
  }

  TEST_CASE("cauchy kernel values") {
    const auto k = cauchy_kernel({1.0, 0.0, 0.0});
    CHECK(k.w == 0.0);
    CHECK(k.x == doctest::Approx(-1.0 / (4.0 * kPi)));
    const auto k2 = cauchy_kernel({0.0, 2.0, 0.0});
    CHECK(k2.y == doctest::Approx(-1.0 / (16.0 * kPi)));
  }

  TEST_CASE("surface integral of a constant density") {
    std::vector<double> err;
    for (int level = 1; level <= 3; ++level) {
      const auto s = SurfaceSampling::from_mesh(make_icosphere(level));
      const std::vector<Quaternion> one(s.size(), Quaternion{1.0, 0, 0, 0});
      const auto in = cauchy_integral_surface(s, one, {0.1, -0.2, 0.05});
      const auto out = cauchy_integral_surface(s, one, {3.0, 0.5, 0.0});
      err.push_back(qdist(in, Quaternion{1.0, 0, 0, 0}));
      CHECK(out.norm() <= 0.05);
    }
    CHECK(err[0] < 0.1);
    CHECK(err[1] < err[0]);
    CHECK(err[2] < err[1]);

    const auto s = SurfaceSampling::from_mesh(make_icosphere(2));
    const std::vector<Quaternion> zero(s.size());
    CHECK(cauchy_integral_surface(s, zero, {0, 0, 0}).norm() == 0.0);
    const std::vector<Quaternion> one(s.size(), Quaternion{1.0, 0, 0, 0});
    CHECK_THROWS_AS(cauchy_integral_surface(s, one, {0.0, 0.0, 1.001}), ValidationError);
    const std::vector<Quaternion> short_density(3);
    CHECK_THROWS_AS(cauchy_integral_surface(s, short_density, {0, 0, 0}), ValidationError);
  }

  TEST_CASE("surface projection fixes constants") {
    const auto s = SurfaceSampling::from_mesh(make_icosphere(2));
    CHECK(s.total_area() == doctest::Approx(4.0 * kPi).epsilon(0.03));
    const auto p = hardy_projection_surface(s);
    const std::vector<Quaternion> one(s.size(), Quaternion{1.0, 0, 0, 0});
    const auto pone = p.apply(one);
    for (const auto& q : pone)
      CHECK(qdist(q, Quaternion{1.0, 0, 0, 0}) <= 1e-12);
    CHECK_THROWS_AS(SurfaceSampling::from_mesh(BoundaryMesh{}), ValidationError);
  }

  TEST_CASE("surface projection reproduces a monogenic field") {
    // conj(x - y) / |x - y|^3 with y outside the sphere is monogenic inside.
    const Point pole{2.5, 0.4, -0.3};
    std::vector<double> err;
    for (int level = 1; level <= 3; ++level) {
      const auto s = SurfaceSampling::from_mesh(make_icosphere(level));
      std::vector<Quaternion> f;
      for (const auto& c : s.centroids)
        f.push_back(cauchy_kernel({pole[0] - c[0], pole[1] - c[1], pole[2] - c[2]}));
      const auto pf = hardy_projection_surface(s).apply(f);
      double worst = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < f.size(); ++i) {
        worst = std::max(worst, qdist(pf[i], f[i]));
        scale = std::max(scale, f[i].norm());
      }
      err.push_back(worst / scale);
    }
    CHECK(err[1] < err[0]);
    CHECK(err[2] < err[1]);
    CHECK(err[2] < 0.1);
  }
}
