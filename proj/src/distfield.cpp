#include "fraclift/distfield.hpp"

#include "fraclift/error.hpp"
#include "fraclift/parallel.hpp"
#include "fraclift/topo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace fraclift {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// One-dimensional squared distance transform of a sampled function f
// (entries may be +inf). Lower envelope of the parabolas rooted at the
// finite samples; values stay exact integers when f holds integers.
void envelope_1d(const double* f, std::size_t stride, int n, double* out,
                 std::vector<int>& v, std::vector<double>& z) {
  v.assign(static_cast<std::size_t>(n), 0);
  z.assign(static_cast<std::size_t>(n) + 1, 0.0);
  int k = -1;
  for (int q = 0; q < n; ++q) {
    const double fq = f[static_cast<std::size_t>(q) * stride];
    if (!std::isfinite(fq))
      continue;
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -kInf;
      z[1] = kInf;
      continue;
    }
    const double qq = static_cast<double>(q);
    double s = 0.0;
    for (;;) {
      const double p = static_cast<double>(v[static_cast<std::size_t>(k)]);
      const double fp = f[static_cast<std::size_t>(v[static_cast<std::size_t>(k)]) * stride];
      s = ((fq + qq * qq) - (fp + p * p)) / (2.0 * qq - 2.0 * p);
      if (s <= z[static_cast<std::size_t>(k)] && k > 0)
        --k;
      else
        break;
    }
    ++k;
    v[static_cast<std::size_t>(k)] = q;
    z[static_cast<std::size_t>(k)] = s;
    z[static_cast<std::size_t>(k) + 1] = kInf;
  }
  if (k < 0) {
    for (int q = 0; q < n; ++q)
      out[static_cast<std::size_t>(q) * stride] = kInf;
    return;
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[static_cast<std::size_t>(j) + 1] < static_cast<double>(q))
      ++j;
    const int site = v[static_cast<std::size_t>(j)];
    const double d = static_cast<double>(q - site);
    out[static_cast<std::size_t>(q) * stride] = d * d + f[static_cast<std::size_t>(site) * stride];
  }
}

} // namespace

Grid Grid::covering(const RegionSpec& region, int resolution, double padding_factor) {
  if (resolution < 2)
    throw ValidationError("grid resolution must be >= 2");
  if (!(padding_factor >= 0.0))
    throw ValidationError("grid padding factor must be non-negative");
  const auto box = region.bounding_box();
  const double pad = padding_factor * box.diameter(region.dim());
  Grid g;
  g.dim = region.dim();
  double longest = 0.0;
  std::array<double, 2> extent{0.0, 0.0};
  for (int k = 0; k < g.dim; ++k) {
    g.origin[static_cast<std::size_t>(k)] = box.lo[static_cast<std::size_t>(k)] - pad;
    extent[static_cast<std::size_t>(k)] =
        box.hi[static_cast<std::size_t>(k)] - box.lo[static_cast<std::size_t>(k)] + 2.0 * pad;
    longest = std::max(longest, extent[static_cast<std::size_t>(k)]);
  }
  g.h = longest / resolution;
  g.nodes = {1, 1};
  for (int k = 0; k < g.dim; ++k)
    g.nodes[static_cast<std::size_t>(k)] =
        static_cast<int>(std::ceil(extent[static_cast<std::size_t>(k)] / g.h - 1e-9)) + 1;
  return g;
}

double ScalarField::max_value() const {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

std::vector<char> rasterize(const Grid& grid, const RegionSpec& region) {
  if (grid.dim != region.dim())
    throw ValidationError("grid and region dimensions differ");
  std::vector<char> mask(grid.size(), 0);
  parallel_for(0, grid.size(), [&](std::size_t idx) {
    const Point p = grid.coord(idx);
    mask[idx] = region.contains_unchecked(p.data()) ? 1 : 0;
  });
  return mask;
}

std::vector<double> squared_distance_steps(const Grid& grid, const std::vector<char>& seeds) {
  const int nx = grid.nodes[0];
  const int ny = grid.nodes[1];
  std::vector<double> f(grid.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    f[i] = seeds[i] ? 0.0 : kInf;

  std::vector<double> rows(grid.size());
  parallel_for(0, static_cast<std::size_t>(ny), [&](std::size_t j) {
    std::vector<int> v;
    std::vector<double> z;
    const std::size_t base = j * static_cast<std::size_t>(nx);
    envelope_1d(f.data() + base, 1, nx, rows.data() + base, v, z);
  });
  if (grid.dim == 1)
    return rows;

  std::vector<double> out(grid.size());
  parallel_for(0, static_cast<std::size_t>(nx), [&](std::size_t i) {
    std::vector<int> v;
    std::vector<double> z;
    envelope_1d(rows.data() + i, static_cast<std::size_t>(nx), ny, out.data() + i, v, z);
  });
  return out;
}

ScalarField distance_transform(const Grid& grid, const RegionSpec& region) {
  if (grid.dim != region.dim())
    throw ValidationError("grid and region dimensions differ");
  const PointSet samples = boundary_samples(region, grid.h / 2.0);
  if (samples.points.empty())
    throw NumericalError("boundary sample set is empty (degenerate region)");

  std::vector<char> seeds(grid.size(), 0);
  for (const auto& p : samples.points) {
    std::array<int, 2> ij{0, 0};
    for (int k = 0; k < grid.dim; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      const long r = std::lround((p[kk] - grid.origin[kk]) / grid.h);
      ij[kk] = static_cast<int>(std::clamp<long>(r, 0, grid.nodes[kk] - 1));
    }
    seeds[grid.index(ij[0], ij[1])] = 1;
  }

  const auto sq = squared_distance_steps(grid, seeds);
  ScalarField field{grid, std::vector<double>(grid.size())};
  for (std::size_t i = 0; i < sq.size(); ++i)
    field.values[i] = grid.h * std::sqrt(sq[i]);
  return field;
}

double lipschitz_constant(const ScalarField& field) {
  const Grid& g = field.grid;
  double worst = 0.0;
  for (int j = 0; j < g.nodes[1]; ++j) {
    for (int i = 0; i < g.nodes[0]; ++i) {
      const double v = field.at(i, j);
      if (i + 1 < g.nodes[0])
        worst = std::max(worst, std::abs(field.at(i + 1, j) - v));
      if (j + 1 < g.nodes[1])
        worst = std::max(worst, std::abs(field.at(i, j + 1) - v));
    }
  }
  return worst / g.h;
}

double complement_distance_identity(const ScalarField& field, const RegionSpec& region,
                                    std::size_t sample_count) {
  const Grid& g = field.grid;
  const auto inside = rasterize(g, region);
  std::vector<std::size_t> interior;
  for (std::size_t i = 0; i < inside.size(); ++i)
    if (inside[i])
      interior.push_back(i);
  if (interior.empty())
    throw ValidationError("region has no interior grid nodes");

  const auto labels = label_components(BoolLattice::from_grid(g, inside));
  const PointSet e = boundary_samples(region, g.h / 2.0);

  std::vector<std::size_t> picks;
  if (sample_count >= interior.size()) {
    picks = interior;
  } else {
    std::mt19937_64 rng(0x5eed1f7ULL);
    std::sample(interior.begin(), interior.end(), std::back_inserter(picks), sample_count, rng);
  }

  std::vector<double> deviation(picks.size(), 0.0);
  parallel_for(0, picks.size(), [&](std::size_t s) {
    const std::size_t x = picks[s];
    const Point px = g.coord(x);
    const int own = labels.labels[x];
    double to_complement = kInf;
    double to_component_complement = kInf;
    for (const auto& q : e.points) {
      const double d = std::hypot(px[0] - q[0], px[1] - q[1]);
      to_complement = std::min(to_complement, d);
      to_component_complement = std::min(to_component_complement, d);
    }
    for (std::size_t y = 0; y < g.size(); ++y) {
      if (labels.labels[y] == own)
        continue;
      const Point py = g.coord(y);
      const double d = std::hypot(px[0] - py[0], px[1] - py[1]);
      to_component_complement = std::min(to_component_complement, d);
      if (!inside[y])
        to_complement = std::min(to_complement, d);
    }
    deviation[s] = std::max(std::abs(to_complement - field.values[x]),
                            std::abs(to_component_complement - field.values[x]));
  });
  return *std::max_element(deviation.begin(), deviation.end());
}

ScalarField regularized_distance(const ScalarField& field, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5))
    throw ValidationError("regularization epsilon must lie in (0, 1/2)");
  const Grid& g = field.grid;
  ScalarField out{g, std::vector<double>(g.size(), 0.0)};
  parallel_for(0, g.size(), [&](std::size_t idx) {
    const double d = field.values[idx];
    if (d <= 0.0)
      return;
    const double r = epsilon * d / g.h;
    const int reach = static_cast<int>(std::floor(r + 1e-12));
    const auto ij = g.node_of(idx);
    const int jreach = g.dim == 2 ? reach : 0;
    double sum = 0.0;
    long count = 0;
    for (int dj = -jreach; dj <= jreach; ++dj) {
      const int j = ij[1] + dj;
      if (j < 0 || j >= g.nodes[1])
        continue;
      for (int di = -reach; di <= reach; ++di) {
        const int i = ij[0] + di;
        if (i < 0 || i >= g.nodes[0])
          continue;
        if (static_cast<double>(di * di + dj * dj) > r * r + 1e-9)
          continue;
        sum += field.at(i, j);
        ++count;
      }
    }
    out.values[idx] = sum / static_cast<double>(count);
  });
  return out;
}

} // namespace fraclift
