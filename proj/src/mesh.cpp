#include "fraclift/mesh.hpp"

#include "fraclift/error.hpp"

#include <cmath>
#include <map>
#include <utility>

namespace fraclift {

namespace {

Point sub(const Point& a, const Point& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

Point cross(const Point& a, const Point& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double norm(const Point& a) { return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]); }

Point normalized(Point a, double radius) {
  const double n = norm(a);
  return {radius * a[0] / n, radius * a[1] / n, radius * a[2] / n};
}

} // namespace

double cell_measure(const BoundaryMesh& mesh, std::size_t cell) {
  const auto& c = mesh.cells[cell];
  const Point& a = mesh.vertices[static_cast<std::size_t>(c[0])];
  const Point& b = mesh.vertices[static_cast<std::size_t>(c[1])];
  if (mesh.base_dim == 1)
    return norm(sub(b, a));
  const Point& d = mesh.vertices[static_cast<std::size_t>(c[2])];
  return 0.5 * norm(cross(sub(b, a), sub(d, a)));
}

double BoundaryMesh::measure() const {
  double total = 0.0;
  for (std::size_t i = 0; i < cells.size(); ++i)
    total += cell_measure(*this, i);
  return total;
}

BoundaryMesh make_icosphere(int levels, double radius) {
  if (levels < 0 || levels > 7)
    throw ValidationError("icosphere levels must be in [0, 7]");
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  BoundaryMesh mesh;
  mesh.base_dim = 2;
  mesh.vertices = {{-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
                   {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
                   {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
  for (auto& v : mesh.vertices)
    v = normalized(v, radius);
  mesh.cells = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

  for (int level = 0; level < levels; ++level) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end())
        return it->second;
      const Point& pa = mesh.vertices[static_cast<std::size_t>(a)];
      const Point& pb = mesh.vertices[static_cast<std::size_t>(b)];
      mesh.vertices.push_back(
          normalized({pa[0] + pb[0], pa[1] + pb[1], pa[2] + pb[2]}, radius));
      const int id = static_cast<int>(mesh.vertices.size()) - 1;
      midpoint.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(mesh.cells.size() * 4);
    for (const auto& c : mesh.cells) {
      const int ab = mid(c[0], c[1]);
      const int bc = mid(c[1], c[2]);
      const int ca = mid(c[2], c[0]);
      next.push_back({c[0], ab, ca});
      next.push_back({c[1], bc, ab});
      next.push_back({c[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    mesh.cells = std::move(next);
  }
  mesh.component_id.assign(mesh.cells.size(), 0);
  // Local mesh size: mean edge length of the base triangle scaled down.
  mesh.h = radius * 1.05 / std::pow(2.0, levels);
  return mesh;
}

} // namespace fraclift
