#include "fraclift/topo.hpp"

#include "fraclift/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

namespace fraclift {

namespace {

class DisjointSet {
public:
  explicit DisjointSet(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // The smaller root survives, so roots are the minimum index of each set.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b)
      return;
    if (b < a)
      std::swap(a, b);
    parent_[b] = a;
  }

private:
  std::vector<std::size_t> parent_;
};

DimensionFit fit_counts(std::vector<double> scales, std::vector<long> counts) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (counts[i] > 0) {
      x.push_back(std::log(1.0 / scales[i]));
      y.push_back(std::log(static_cast<double>(counts[i])));
    }
  }
  if (x.size() < 2)
    throw ValidationError("box counting needs at least 2 usable scales");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  DimensionFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  fit.scales = std::move(scales);
  fit.counts = std::move(counts);
  return fit;
}

std::vector<double> checked_scales(std::span<const double> scales) {
  std::vector<double> s(scales.begin(), scales.end());
  for (double v : s)
    if (!(v > 0.0) || !std::isfinite(v))
      throw ValidationError("box sizes must be positive and finite");
  std::sort(s.begin(), s.end(), std::greater<>());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  if (s.size() < 2)
    throw ValidationError("box counting needs at least 2 distinct scales");
  return s;
}

long count_boxes(const std::vector<Point>& pts, int dim, const Point& origin, double size) {
  std::vector<std::array<long, 3>> keys;
  keys.reserve(pts.size());
  for (const auto& p : pts) {
    std::array<long, 3> key{0, 0, 0};
    for (int k = 0; k < dim; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      // Points on a box face go to the upper box.
      key[kk] = static_cast<long>(std::floor((p[kk] - origin[kk]) / size + 1e-9));
    }
    keys.push_back(key);
  }
  std::sort(keys.begin(), keys.end());
  return static_cast<long>(std::unique(keys.begin(), keys.end()) - keys.begin());
}

DimensionFit count_points(const std::vector<Point>& pts, int dim, std::span<const double> scales) {
  if (pts.empty())
    throw ValidationError("box counting target is empty");
  auto s = checked_scales(scales);
  Point origin = pts.front();
  for (const auto& p : pts)
    for (int k = 0; k < dim; ++k)
      origin[static_cast<std::size_t>(k)] = std::min(origin[static_cast<std::size_t>(k)], p[static_cast<std::size_t>(k)]);
  std::vector<long> counts;
  for (double size : s)
    counts.push_back(count_boxes(pts, dim, origin, size));
  return fit_counts(std::move(s), std::move(counts));
}

std::string edge_list(const std::vector<std::pair<int, int>>& edges) {
  std::ostringstream os;
  std::size_t shown = 0;
  for (const auto& e : edges) {
    if (shown++ == 8) {
      os << " ...";
      break;
    }
    os << " (" << e.first << "," << e.second << ")";
  }
  return os.str();
}

} // namespace

BoolLattice BoolLattice::from_grid(const Grid& grid, std::vector<char> mask) {
  BoolLattice l;
  l.dims = {grid.nodes[0], grid.nodes[1], 1};
  l.data = std::move(mask);
  return l;
}

BoolLattice BoolLattice::from_indicator(const LiftedIndicator& indicator) {
  return {indicator.dims, indicator.occupancy};
}

LabelField label_components(const BoolLattice& lattice) {
  const auto& d = lattice.dims;
  const std::size_t sy = static_cast<std::size_t>(d[0]);
  const std::size_t sz = sy * static_cast<std::size_t>(d[1]);
  const std::size_t total = sz * static_cast<std::size_t>(d[2]);
  if (lattice.data.size() != total)
    throw ValidationError("lattice data size does not match its dimensions");

  DisjointSet sets(total);
  for (int z = 0; z < d[2]; ++z) {
    for (int y = 0; y < d[1]; ++y) {
      for (int x = 0; x < d[0]; ++x) {
        const std::size_t i = static_cast<std::size_t>(x) + sy * static_cast<std::size_t>(y) +
                              sz * static_cast<std::size_t>(z);
        if (!lattice.data[i])
          continue;
        if (x > 0 && lattice.data[i - 1])
          sets.unite(i, i - 1);
        if (y > 0 && lattice.data[i - sy])
          sets.unite(i, i - sy);
        if (z > 0 && lattice.data[i - sz])
          sets.unite(i, i - sz);
      }
    }
  }

  LabelField out;
  out.dims = d;
  out.labels.assign(total, 0);
  std::vector<int> root_label(total, 0);
  for (std::size_t i = 0; i < total; ++i) {
    if (!lattice.data[i])
      continue;
    const std::size_t r = sets.find(i);
    if (root_label[r] == 0)
      root_label[r] = ++out.component_count;
    out.labels[i] = root_label[r];
  }
  return out;
}

ComponentMap lifted_component_bijection(const LabelField& labels_base,
                                        const LabelField& labels_lifted,
                                        const LiftedIndicator& indicator) {
  const std::size_t nbase = indicator.base.size();
  if (labels_base.labels.size() != nbase ||
      labels_lifted.labels.size() != indicator.occupancy.size())
    throw ValidationError("label fields do not match the lifted lattice");

  std::vector<std::set<int>> images(static_cast<std::size_t>(labels_base.component_count));
  std::vector<std::set<int>> preimages(static_cast<std::size_t>(labels_lifted.component_count));
  const int nt = indicator.t_axis.nodes();
  for (std::size_t b = 0; b < nbase; ++b) {
    const int u = labels_base.labels[b];
    for (int k = 0; k < nt; ++k) {
      const int l = labels_lifted.labels[indicator.index(b, k)];
      if (l == 0)
        continue;
      // Lifted nodes over base nodes outside U would mean the lift leaked.
      if (u == 0)
        throw TopologyError("lifted component " + std::to_string(l) +
                            " has nodes over the complement of U");
      images[static_cast<std::size_t>(u - 1)].insert(l);
      preimages[static_cast<std::size_t>(l - 1)].insert(u);
    }
  }

  std::ostringstream bad;
  for (std::size_t v = 0; v < images.size(); ++v) {
    if (images[v].size() != 1) {
      bad << " base " << v + 1 << " -> {";
      for (int l : images[v])
        bad << ' ' << l;
      bad << " }";
    }
  }
  for (std::size_t l = 0; l < preimages.size(); ++l) {
    if (preimages[l].size() != 1) {
      bad << " lifted " << l + 1 << " <- {";
      for (int u : preimages[l])
        bad << ' ' << u;
      bad << " }";
    }
  }
  if (!bad.str().empty())
    throw TopologyError("component map is not a bijection:" + bad.str());

  ComponentMap map;
  map.lifted_count = labels_lifted.component_count;
  for (const auto& s : images)
    map.images.emplace_back(s.begin(), s.end());
  return map;
}

int mesh_component_count(BoundaryMesh& mesh) {
  const int arity = mesh.cell_arity();
  DisjointSet sets(mesh.vertices.size());
  for (const auto& c : mesh.cells)
    for (int k = 1; k < arity; ++k)
      sets.unite(static_cast<std::size_t>(c[0]), static_cast<std::size_t>(c[static_cast<std::size_t>(k)]));

  std::map<std::size_t, int> root_id;
  mesh.component_id.assign(mesh.cells.size(), 0);
  for (std::size_t i = 0; i < mesh.cells.size(); ++i) {
    const std::size_t r = sets.find(static_cast<std::size_t>(mesh.cells[i][0]));
    auto [it, inserted] = root_id.emplace(r, static_cast<int>(root_id.size()));
    mesh.component_id[i] = it->second;
  }
  return static_cast<int>(root_id.size());
}

DimensionFit box_counting_dimension(const PointSet& target, std::span<const double> scales) {
  return count_points(target.points, target.dim, scales);
}

DimensionFit box_counting_dimension(const BoundaryMesh& target, std::span<const double> scales) {
  if (target.empty())
    throw ValidationError("box counting target mesh is empty");
  const auto s = checked_scales(scales);
  const double step = s.back() / 4.0;
  std::vector<Point> pts;
  auto lerp = [](const Point& a, const Point& b, double w) {
    return Point{a[0] + w * (b[0] - a[0]), a[1] + w * (b[1] - a[1]), a[2] + w * (b[2] - a[2])};
  };
  for (const auto& c : target.cells) {
    const Point& a = target.vertices[static_cast<std::size_t>(c[0])];
    const Point& b = target.vertices[static_cast<std::size_t>(c[1])];
    if (target.base_dim == 1) {
      const double len = std::hypot(b[0] - a[0], b[1] - a[1], b[2] - a[2]);
      const int m = std::max(1, static_cast<int>(std::ceil(len / step)));
      for (int i = 0; i <= m; ++i)
        pts.push_back(lerp(a, b, static_cast<double>(i) / m));
    } else {
      const Point& d = target.vertices[static_cast<std::size_t>(c[2])];
      const double len = std::max({std::hypot(b[0] - a[0], b[1] - a[1], b[2] - a[2]),
                                   std::hypot(d[0] - a[0], d[1] - a[1], d[2] - a[2]),
                                   std::hypot(d[0] - b[0], d[1] - b[1], d[2] - b[2])});
      const int m = std::max(1, static_cast<int>(std::ceil(len / step)));
      for (int i = 0; i <= m; ++i) {
        for (int j = 0; i + j <= m; ++j) {
          const double u = static_cast<double>(i) / m;
          const double v = static_cast<double>(j) / m;
          pts.push_back({a[0] + u * (b[0] - a[0]) + v * (d[0] - a[0]),
                         a[1] + u * (b[1] - a[1]) + v * (d[1] - a[1]),
                         a[2] + u * (b[2] - a[2]) + v * (d[2] - a[2])});
        }
      }
    }
  }
  return count_points(pts, target.ambient_dim(), s);
}

int euler_characteristic(const BoundaryMesh& mesh) {
  if (mesh.empty())
    throw ValidationError("euler characteristic of an empty mesh");
  std::set<int> used;
  for (const auto& c : mesh.cells)
    for (int k = 0; k < mesh.cell_arity(); ++k)
      used.insert(c[static_cast<std::size_t>(k)]);
  const long v = static_cast<long>(used.size());

  if (mesh.base_dim == 1) {
    std::map<int, int> degree;
    for (const auto& c : mesh.cells) {
      ++degree[c[0]];
      ++degree[c[1]];
    }
    std::vector<std::pair<int, int>> bad;
    for (const auto& [vertex, deg] : degree)
      if (deg != 2)
        bad.emplace_back(vertex, deg);
    if (!bad.empty())
      throw TopologyError("polyline is not closed; (vertex,degree):" + edge_list(bad));
    return static_cast<int>(v - static_cast<long>(mesh.cells.size()));
  }

  std::map<std::pair<int, int>, int> edges;
  for (const auto& c : mesh.cells)
    for (int k = 0; k < 3; ++k)
      ++edges[std::minmax(c[static_cast<std::size_t>(k)], c[static_cast<std::size_t>((k + 1) % 3)])];
  std::vector<std::pair<int, int>> bad;
  for (const auto& [e, count] : edges)
    if (count != 2)
      bad.push_back(e);
  if (!bad.empty())
    throw TopologyError("mesh is not watertight; " + std::to_string(bad.size()) +
                        " edges not shared by exactly 2 triangles:" + edge_list(bad));
  return static_cast<int>(v - static_cast<long>(edges.size()) + static_cast<long>(mesh.cells.size()));
}

} // namespace fraclift
