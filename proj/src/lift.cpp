#include "fraclift/lift.hpp"

#include "fraclift/error.hpp"
#include "fraclift/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace fraclift {

std::size_t LiftedIndicator::occupied_count() const {
  return static_cast<std::size_t>(std::count(occupancy.begin(), occupancy.end(), 1));
}

double LiftedIndicator::cell_volume() const {
  return std::pow(base.h, base.dim) * t_axis.spacing();
}

namespace {

std::vector<char> base_set(const RegionSpec& region, const Grid& grid, const LiftOptions& options) {
  if (options.base_mask != nullptr) {
    if (options.base_mask->size() != grid.size())
      throw ValidationError("base mask size does not match the grid");
    return *options.base_mask;
  }
  return rasterize(grid, region);
}

} // namespace

LiftedIndicator lift_open_set(const RegionSpec& region, const ScalarField& height,
                              const LiftOptions& options) {
  const Grid& g = height.grid;
  if (g.dim != region.dim())
    throw ValidationError("height field and region dimensions differ");
  if (options.t_resolution < 2)
    throw ValidationError("t resolution must be >= 2");

  const auto base = base_set(region, g, options);
  double needed = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (base[i])
      needed = std::max(needed, height.values[i]);

  LiftedIndicator ind;
  ind.base = g;
  ind.t_axis.resolution = options.t_resolution;
  ind.t_axis.t_max = options.t_max.value_or(needed > 0.0 ? needed : g.h);
  if (ind.t_axis.t_max < needed)
    throw ValidationError("t range does not cover the maximum height over U");
  const int nt = ind.t_axis.nodes();
  ind.dims = g.dim == 1 ? std::array<int, 3>{g.nodes[0], nt, 1}
                        : std::array<int, 3>{g.nodes[0], g.nodes[1], nt};
  ind.occupancy.assign(g.size() * static_cast<std::size_t>(nt), 0);

  parallel_for(0, static_cast<std::size_t>(nt), [&](std::size_t k) {
    const double t = std::abs(ind.t_axis.t(static_cast<int>(k)));
    for (std::size_t b = 0; b < g.size(); ++b)
      if (base[b] && t < height.values[b])
        ind.occupancy[ind.index(b, static_cast<int>(k))] = 1;
  });
  return ind;
}

int matching_t_resolution(const ScalarField& height, const RegionSpec& region) {
  const auto inside = rasterize(height.grid, region);
  double top = 0.0;
  for (std::size_t i = 0; i < inside.size(); ++i)
    if (inside[i])
      top = std::max(top, height.values[i]);
  int res = static_cast<int>(std::ceil(2.0 * top / height.grid.h - 1e-9));
  res = std::max(res, 2);
  if (res % 2 != 0)
    ++res;
  return res;
}

namespace {

// Pulls t = 0 rim vertices (grid nodes just outside U) to within h/4 of
// their nearest boundary sample so the t = 0 slice tracks E.
void pull_rim_to_boundary(BoundaryMesh& mesh, const std::vector<int>& rim_vertices,
                          const RegionSpec& region) {
  const double h = mesh.h;
  const auto samples = boundary_samples(region, h / 2.0).points;
  if (samples.empty() || rim_vertices.empty())
    return;
  std::map<std::pair<long, long>, std::vector<std::size_t>> buckets;
  auto key = [h](const Point& p) {
    return std::pair<long, long>{std::lround(std::floor(p[0] / h)), std::lround(std::floor(p[1] / h))};
  };
  for (std::size_t s = 0; s < samples.size(); ++s)
    buckets[key(samples[s])].push_back(s);
  const long reach = static_cast<long>(buckets.size()) + 2;

  for (int v : rim_vertices) {
    Point& x = mesh.vertices[static_cast<std::size_t>(v)];
    const auto [cx, cy] = key(x);
    double best = std::numeric_limits<double>::infinity();
    const Point* nearest = nullptr;
    for (long r = 0; r <= reach; ++r) {
      for (long i = cx - r; i <= cx + r; ++i) {
        for (long j = cy - r; j <= cy + r; ++j) {
          if (std::max(std::abs(i - cx), std::abs(j - cy)) != r)
            continue;
          auto it = buckets.find({i, j});
          if (it == buckets.end())
            continue;
          for (auto s : it->second) {
            const double d = std::hypot(samples[s][0] - x[0], samples[s][1] - x[1]);
            if (d < best) {
              best = d;
              nearest = &samples[s];
            }
          }
        }
      }
      if (nearest != nullptr && best <= static_cast<double>(r) * h)
        break;
    }
    if (nearest == nullptr || best <= h / 4.0)
      continue;
    const double keep = (h / 4.0) / best;
    x[0] = (*nearest)[0] + keep * (x[0] - (*nearest)[0]);
    x[1] = (*nearest)[1] + keep * (x[1] - (*nearest)[1]);
  }
}

struct SheetBuilder {
  BoundaryMesh mesh;
  std::vector<int> top;
  std::vector<int> bottom;

  void add_vertex(std::size_t node, const Point& base_coord, int base_dim, double height,
                  bool merged) {
    Point up = base_coord;
    Point down = base_coord;
    up[static_cast<std::size_t>(base_dim)] = merged ? 0.0 : height;
    down[static_cast<std::size_t>(base_dim)] = merged ? 0.0 : -height;
    mesh.vertices.push_back(up);
    top[node] = static_cast<int>(mesh.vertices.size()) - 1;
    if (merged) {
      bottom[node] = top[node];
    } else {
      mesh.vertices.push_back(down);
      bottom[node] = static_cast<int>(mesh.vertices.size()) - 1;
    }
  }
};

BoundaryMesh extract_1d(const ScalarField& height, const RegionSpec& region) {
  const Grid& g = height.grid;
  const int nx = g.nodes[0];
  std::vector<char> in_u(g.size()), in_support(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Point p = g.coord(i);
    in_u[i] = region.contains_unchecked(p.data());
    in_support[i] = region.support_contains(p.data());
  }
  std::vector<char> seg(static_cast<std::size_t>(std::max(nx - 1, 0)), 0);
  for (int i = 0; i + 1 < nx; ++i) {
    const auto a = static_cast<std::size_t>(i);
    seg[a] = in_u[a] || in_u[a + 1] || (in_support[a] && in_support[a + 1]);
  }

  SheetBuilder b;
  b.mesh.base_dim = 1;
  b.mesh.h = g.h;
  b.top.assign(g.size(), -1);
  b.bottom.assign(g.size(), -1);
  std::vector<int> rim_vertices;
  for (int i = 0; i < nx; ++i) {
    const bool left = i > 0 && seg[static_cast<std::size_t>(i - 1)];
    const bool right = i + 1 < nx && seg[static_cast<std::size_t>(i)];
    if (!left && !right)
      continue;
    const auto node = static_cast<std::size_t>(i);
    const double hgt = height.values[node];
    const bool rim = left != right;
    // Nodes in U never merge, so a thin sheet near E stays a simple loop.
    b.add_vertex(node, g.coord(node), 1, hgt, rim || (!in_u[node] && hgt <= g.h / 2.0));
    if (rim)
      rim_vertices.push_back(b.top[node]);
  }
  for (int i = 0; i + 1 < nx; ++i) {
    if (!seg[static_cast<std::size_t>(i)])
      continue;
    const auto a = static_cast<std::size_t>(i);
    b.mesh.cells.push_back({b.top[a], b.top[a + 1], -1});
    if (b.bottom[a] != b.top[a] || b.bottom[a + 1] != b.top[a + 1])
      b.mesh.cells.push_back({b.bottom[a], b.bottom[a + 1], -1});
  }
  pull_rim_to_boundary(b.mesh, rim_vertices, region);
  return std::move(b.mesh);
}

BoundaryMesh extract_2d(const ScalarField& height, const RegionSpec& region) {
  const Grid& g = height.grid;
  const int nx = g.nodes[0];
  const int ny = g.nodes[1];
  std::vector<char> in_u(g.size()), in_support(g.size());
  parallel_for(0, g.size(), [&](std::size_t i) {
    const Point p = g.coord(i);
    in_u[i] = region.contains_unchecked(p.data());
    in_support[i] = region.support_contains(p.data());
  });

  const int cx = nx - 1;
  const int cy = ny - 1;
  auto cell_index = [&](int i, int j) {
    return static_cast<std::size_t>(i) + static_cast<std::size_t>(cx) * static_cast<std::size_t>(j);
  };
  std::vector<char> kept(static_cast<std::size_t>(std::max(cx, 0)) * static_cast<std::size_t>(std::max(cy, 0)), 0);
  for (int j = 0; j < cy; ++j) {
    for (int i = 0; i < cx; ++i) {
      const std::size_t c[4] = {g.index(i, j), g.index(i + 1, j), g.index(i + 1, j + 1),
                                g.index(i, j + 1)};
      bool any_u = false;
      bool all_support = true;
      for (auto n : c) {
        any_u = any_u || in_u[n];
        all_support = all_support && in_support[n];
      }
      kept[cell_index(i, j)] = any_u || all_support;
    }
  }
  auto cell_kept = [&](int i, int j) {
    return i >= 0 && j >= 0 && i < cx && j < cy && kept[cell_index(i, j)];
  };

  SheetBuilder b;
  b.mesh.base_dim = 2;
  b.mesh.h = g.h;
  b.top.assign(g.size(), -1);
  b.bottom.assign(g.size(), -1);
  std::vector<char> rim(g.size(), 0);
  std::vector<int> rim_vertices;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int count = cell_kept(i - 1, j - 1) + cell_kept(i, j - 1) + cell_kept(i - 1, j) +
                        cell_kept(i, j);
      if (count == 0)
        continue;
      const std::size_t node = g.index(i, j);
      rim[node] = count < 4;
      b.add_vertex(node, g.coord(node), 2, height.values[node], rim[node] != 0);
      if (rim[node])
        rim_vertices.push_back(b.top[node]);
    }
  }

  auto push_tri = [&](int a, int c, int d, bool upper) {
    if (upper)
      b.mesh.cells.push_back({a, c, d});
    else
      b.mesh.cells.push_back({a, d, c});
  };
  for (int j = 0; j < cy; ++j) {
    for (int i = 0; i < cx; ++i) {
      if (!kept[cell_index(i, j)])
        continue;
      // Corners counter-clockwise in the base plane.
      const std::size_t n[4] = {g.index(i, j), g.index(i + 1, j), g.index(i + 1, j + 1),
                                g.index(i, j + 1)};
      const bool ac_bad = rim[n[0]] && rim[n[2]];
      const bool bd_bad = rim[n[1]] && rim[n[3]];
      for (int sheet = 0; sheet < 2; ++sheet) {
        const auto& ids = sheet == 0 ? b.top : b.bottom;
        const bool upper = sheet == 0;
        const int v[4] = {ids[n[0]], ids[n[1]], ids[n[2]], ids[n[3]]};
        if (!ac_bad) {
          push_tri(v[0], v[1], v[2], upper);
          push_tri(v[0], v[2], v[3], upper);
        } else if (!bd_bad) {
          push_tri(v[0], v[1], v[3], upper);
          push_tri(v[1], v[2], v[3], upper);
        } else {
          // Every corner on the rim: split around an interior centre vertex.
          Point centre{0.0, 0.0, 0.0};
          double hgt = 0.0;
          for (auto node : n) {
            const Point p = g.coord(node);
            centre[0] += 0.25 * p[0];
            centre[1] += 0.25 * p[1];
            hgt += 0.25 * height.values[node];
          }
          centre[2] = upper ? hgt : -hgt;
          b.mesh.vertices.push_back(centre);
          const int m = static_cast<int>(b.mesh.vertices.size()) - 1;
          for (int e = 0; e < 4; ++e)
            push_tri(v[e], v[(e + 1) % 4], m, upper);
        }
      }
    }
  }
  pull_rim_to_boundary(b.mesh, rim_vertices, region);
  return std::move(b.mesh);
}

} // namespace

BoundaryMesh extract_lifted_boundary(const ScalarField& height, const RegionSpec& region) {
  if (height.grid.dim != region.dim())
    throw ValidationError("height field and region dimensions differ");
  BoundaryMesh mesh = region.dim() == 1 ? extract_1d(height, region) : extract_2d(height, region);
  if (mesh.cells.empty())
    throw NumericalError("lifted boundary is empty: region has no closure nodes");
  mesh.component_id.assign(mesh.cells.size(), 0);
  return mesh;
}

PointSet slice_t_zero(const BoundaryMesh& mesh) {
  PointSet out;
  out.dim = mesh.base_dim;
  out.spacing = mesh.h;
  const auto t_axis = static_cast<std::size_t>(mesh.base_dim);
  for (const auto& v : mesh.vertices) {
    if (std::abs(v[t_axis]) <= mesh.h / 2.0) {
      Point p = v;
      p[t_axis] = 0.0;
      out.points.push_back(p);
    }
  }
  std::sort(out.points.begin(), out.points.end());
  out.points.erase(std::unique(out.points.begin(), out.points.end()), out.points.end());
  return out;
}

double empty_interior_check(const LiftedIndicator& ind) {
  const auto& d = ind.dims;
  const std::size_t sx = 1;
  const std::size_t sy = static_cast<std::size_t>(d[0]);
  const std::size_t sz = sy * static_cast<std::size_t>(d[1]);
  std::size_t boundary = 0;
  for (int z = 0; z < d[2]; ++z) {
    for (int y = 0; y < d[1]; ++y) {
      for (int x = 0; x < d[0]; ++x) {
        const std::size_t idx = static_cast<std::size_t>(x) * sx + static_cast<std::size_t>(y) * sy +
                                static_cast<std::size_t>(z) * sz;
        const char here = ind.occupancy[idx];
        auto differs = [&](int nx, int ny, int nz, std::size_t nidx) {
          const bool outside = nx < 0 || ny < 0 || nz < 0 || nx >= d[0] || ny >= d[1] || nz >= d[2];
          const char there = outside ? 0 : ind.occupancy[nidx];
          return there != here;
        };
        bool edge = differs(x - 1, y, z, idx - sx) || differs(x + 1, y, z, idx + sx);
        if (d[1] > 1)
          edge = edge || differs(x, y - 1, z, idx - sy) || differs(x, y + 1, z, idx + sy);
        if (d[2] > 1)
          edge = edge || differs(x, y, z - 1, idx - sz) || differs(x, y, z + 1, idx + sz);
        boundary += edge ? 1 : 0;
      }
    }
  }
  return static_cast<double>(boundary) / static_cast<double>(ind.occupancy.size());
}

double hausdorff_distance(const PointSet& a, const PointSet& b) {
  if (a.points.empty() || b.points.empty())
    return std::numeric_limits<double>::infinity();
  auto one_sided = [](const PointSet& from, const PointSet& to) {
    std::vector<double> best(from.points.size());
    parallel_for(0, from.points.size(), [&](std::size_t i) {
      double m = std::numeric_limits<double>::infinity();
      for (const auto& q : to.points) {
        const auto& p = from.points[i];
        m = std::min(m, std::hypot(p[0] - q[0], p[1] - q[1], p[2] - q[2]));
      }
      best[i] = m;
    });
    return *std::max_element(best.begin(), best.end());
  };
  return std::max(one_sided(a, b), one_sided(b, a));
}

} // namespace fraclift
