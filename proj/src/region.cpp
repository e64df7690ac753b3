#include "fraclift/region.hpp"

#include "fraclift/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace fraclift {

namespace {

constexpr int kMaxCantorDepth = 36;

template <class... Ts> struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

int primitive_dim(const Primitive& p) {
  return std::visit(overloaded{[](const Interval&) { return 1; },
                               [](const CantorComplement&) { return 1; },
                               [](const Disk&) { return 2; },
                               [](const Box&) { return 2; },
                               [](const Annulus&) { return 2; }},
                    p);
}

void validate(const Primitive& p) {
  std::visit(overloaded{
                 [](const Interval& i) {
                   if (!(i.a < i.b) || !std::isfinite(i.a) || !std::isfinite(i.b))
                     throw ValidationError("interval requires finite a < b");
                 },
                 [](const CantorComplement& c) {
                   if (c.depth && (*c.depth < 1 || *c.depth > kMaxCantorDepth))
                     throw ValidationError("cantor_complement depth must be in [1, " +
                                           std::to_string(kMaxCantorDepth) + "]");
                 },
                 [](const Disk& d) {
                   if (!(d.r > 0.0) || !std::isfinite(d.r))
                     throw ValidationError("disk radius must be positive");
                 },
                 [](const Box& b) {
                   if (!(b.lo[0] < b.hi[0]) || !(b.lo[1] < b.hi[1]))
                     throw ValidationError("box requires lo < hi on both axes");
                 },
                 [](const Annulus& a) {
                   if (!(a.r_in > 0.0) || !(a.r_in < a.r_out))
                     throw ValidationError("annulus requires 0 < r_in < r_out");
                 }},
             p);
}

bool in_cantor_gap(double x, int depth) {
  if (!(x > 0.0 && x < 1.0))
    return false;
  double lo = 0.0;
  double hi = 1.0;
  for (int level = 0; level < depth; ++level) {
    const double third = (hi - lo) / 3.0;
    const double a = lo + third;
    const double b = hi - third;
    if (x > a && x < b)
      return true;
    if (x <= a)
      hi = a;
    else
      lo = b;
  }
  return false;
}

void cantor_gaps(double lo, double hi, int depth, std::vector<Interval>& out) {
  if (depth == 0)
    return;
  const double third = (hi - lo) / 3.0;
  const double a = lo + third;
  const double b = hi - third;
  cantor_gaps(lo, a, depth - 1, out);
  out.push_back({a, b});
  cantor_gaps(b, hi, depth - 1, out);
}

int resolved_depth(const CantorComplement& c, double resolution) {
  if (c.depth)
    return *c.depth;
  return resolution > 0.0 ? cantor_depth_for(resolution) : kMaxCantorDepth;
}

double sq(double v) { return v * v; }

void sample_circle(std::array<double, 2> c, double r, double spacing,
                   std::vector<Point>& out) {
  const double circumference = 2.0 * std::numbers::pi * r;
  auto n = static_cast<std::size_t>(std::ceil(circumference / spacing));
  n = std::max<std::size_t>(n, 8);
  for (std::size_t k = 0; k < n; ++k) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    out.push_back({c[0] + r * std::cos(theta), c[1] + r * std::sin(theta), 0.0});
  }
}

void sample_segment(Point a, Point b, double spacing, std::vector<Point>& out) {
  const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
  const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(len / spacing)));
  for (std::size_t k = 0; k < n; ++k) {
    const double s = static_cast<double>(k) / static_cast<double>(n);
    out.push_back({a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1]), 0.0});
  }
}

} // namespace

double BoundingBox::diameter(int dim) const {
  double s = 0.0;
  for (int k = 0; k < dim; ++k)
    s += sq(hi[k] - lo[k]);
  return std::sqrt(s);
}

RegionSpec::RegionSpec(int dim, std::vector<Primitive> primitives)
    : dim_(dim), primitives_(std::move(primitives)) {
  if (dim_ != 1 && dim_ != 2)
    throw ValidationError("region dimension must be 1 or 2");
  if (primitives_.empty())
    throw ValidationError("region needs at least one primitive");
  for (const auto& p : primitives_) {
    if (primitive_dim(p) != dim_)
      throw ValidationError("primitive dimension does not match region dimension " +
                            std::to_string(dim_));
    validate(p);
  }
}

BoundingBox RegionSpec::bounding_box() const {
  BoundingBox box;
  box.lo.fill(0.0);
  box.hi.fill(0.0);
  bool first = true;
  auto grow = [&](Point lo, Point hi) {
    for (int k = 0; k < dim_; ++k) {
      box.lo[k] = first ? lo[k] : std::min(box.lo[k], lo[k]);
      box.hi[k] = first ? hi[k] : std::max(box.hi[k], hi[k]);
    }
    first = false;
  };
  for (const auto& p : primitives_) {
    std::visit(overloaded{
                   [&](const Interval& i) { grow({i.a, 0, 0}, {i.b, 0, 0}); },
                   [&](const CantorComplement&) { grow({0, 0, 0}, {1, 0, 0}); },
                   [&](const Disk& d) {
                     grow({d.center[0] - d.r, d.center[1] - d.r, 0},
                          {d.center[0] + d.r, d.center[1] + d.r, 0});
                   },
                   [&](const Box& b) { grow({b.lo[0], b.lo[1], 0}, {b.hi[0], b.hi[1], 0}); },
                   [&](const Annulus& a) {
                     grow({a.center[0] - a.r_out, a.center[1] - a.r_out, 0},
                          {a.center[0] + a.r_out, a.center[1] + a.r_out, 0});
                   }},
               p);
  }
  return box;
}

bool RegionSpec::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_)
    throw ValidationError("point has dimension " + std::to_string(x.size()) +
                          ", region has dimension " + std::to_string(dim_));
  return contains_unchecked(x.data());
}

bool RegionSpec::contains_unchecked(const double* x) const {
  for (const auto& p : primitives_) {
    const bool inside = std::visit(
        overloaded{[&](const Interval& i) { return x[0] > i.a && x[0] < i.b; },
                   [&](const CantorComplement& c) {
                     return in_cantor_gap(x[0], c.depth.value_or(kMaxCantorDepth));
                   },
                   [&](const Disk& d) {
                     return sq(x[0] - d.center[0]) + sq(x[1] - d.center[1]) < sq(d.r);
                   },
                   [&](const Box& b) {
                     return x[0] > b.lo[0] && x[0] < b.hi[0] && x[1] > b.lo[1] && x[1] < b.hi[1];
                   },
                   [&](const Annulus& a) {
                     const double r2 = sq(x[0] - a.center[0]) + sq(x[1] - a.center[1]);
                     return r2 > sq(a.r_in) && r2 < sq(a.r_out);
                   }},
        p);
    if (inside)
      return true;
  }
  return false;
}

bool RegionSpec::support_contains(const double* x) const {
  for (const auto& p : primitives_) {
    const bool inside = std::visit(
        overloaded{[&](const Interval& i) { return x[0] >= i.a && x[0] <= i.b; },
                   [&](const CantorComplement&) { return x[0] >= 0.0 && x[0] <= 1.0; },
                   [&](const Disk& d) {
                     return sq(x[0] - d.center[0]) + sq(x[1] - d.center[1]) <= sq(d.r);
                   },
                   [&](const Box& b) {
                     return x[0] >= b.lo[0] && x[0] <= b.hi[0] && x[1] >= b.lo[1] &&
                            x[1] <= b.hi[1];
                   },
                   [&](const Annulus& a) {
                     const double r2 = sq(x[0] - a.center[0]) + sq(x[1] - a.center[1]);
                     return r2 >= sq(a.r_in) && r2 <= sq(a.r_out);
                   }},
        p);
    if (inside)
      return true;
  }
  return false;
}

std::vector<Interval> RegionSpec::intervals(double resolution) const {
  if (dim_ != 1)
    throw ValidationError("intervals() is only defined for 1D regions");
  std::vector<Interval> raw;
  for (const auto& p : primitives_) {
    if (const auto* i = std::get_if<Interval>(&p))
      raw.push_back(*i);
    else if (const auto* c = std::get_if<CantorComplement>(&p)) {
      if (!c->depth && !(resolution > 0.0))
        throw ValidationError("unbounded Cantor depth needs a resolution");
      cantor_gaps(0.0, 1.0, resolved_depth(*c, resolution), raw);
    }
  }
  std::sort(raw.begin(), raw.end(),
            [](const Interval& l, const Interval& r) { return l.a < r.a; });
  // Open intervals merge only when they overlap; (0,1) and (1,2) stay apart.
  std::vector<Interval> merged;
  for (const auto& i : raw) {
    if (!merged.empty() && i.a < merged.back().b)
      merged.back().b = std::max(merged.back().b, i.b);
    else
      merged.push_back(i);
  }
  return merged;
}

int RegionSpec::exact_component_count() const {
  return static_cast<int>(intervals().size());
}

RegionSpec cantor_complement(int depth) {
  if (depth < 1)
    throw ValidationError("cantor_complement depth must be >= 1");
  return RegionSpec(1, {CantorComplement{depth}});
}

int cantor_depth_for(double spacing) {
  if (!(spacing > 0.0))
    throw ValidationError("spacing must be positive");
  int k = 1;
  double len = 1.0 / 3.0;
  while (len >= spacing && k < kMaxCantorDepth) {
    len /= 3.0;
    ++k;
  }
  return k;
}

PointSet boundary_samples(const RegionSpec& region, double spacing) {
  if (!(spacing > 0.0))
    throw ValidationError("boundary_samples spacing must be positive");
  PointSet out;
  out.dim = region.dim();
  out.spacing = spacing;
  // A sample lies on its own primitive's boundary; it leaves E only when
  // another primitive covers it. Testing the own primitive would drop
  // samples that rounding puts a hair inside.
  std::vector<RegionSpec> singles;
  for (const auto& p : region.primitives())
    singles.emplace_back(region.dim(), std::vector<Primitive>{p});
  for (std::size_t k = 0; k < region.primitives().size(); ++k) {
    std::vector<Point> raw;
    const auto& p = region.primitives()[k];
    std::visit(overloaded{
                   [&](const Interval& i) {
                     raw.push_back({i.a, 0, 0});
                     raw.push_back({i.b, 0, 0});
                   },
                   [&](const CantorComplement& c) {
                     std::vector<Interval> gaps;
                     cantor_gaps(0.0, 1.0, resolved_depth(c, spacing), gaps);
                     raw.push_back({0.0, 0, 0});
                     for (const auto& g : gaps) {
                       raw.push_back({g.a, 0, 0});
                       raw.push_back({g.b, 0, 0});
                     }
                     raw.push_back({1.0, 0, 0});
                   },
                   [&](const Disk& d) { sample_circle(d.center, d.r, spacing, raw); },
                   [&](const Box& b) {
                     const Point c00{b.lo[0], b.lo[1], 0}, c10{b.hi[0], b.lo[1], 0};
                     const Point c11{b.hi[0], b.hi[1], 0}, c01{b.lo[0], b.hi[1], 0};
                     sample_segment(c00, c10, spacing, raw);
                     sample_segment(c10, c11, spacing, raw);
                     sample_segment(c11, c01, spacing, raw);
                     sample_segment(c01, c00, spacing, raw);
                   },
                   [&](const Annulus& a) {
                     sample_circle(a.center, a.r_in, spacing, raw);
                     sample_circle(a.center, a.r_out, spacing, raw);
                   }},
               p);
    for (const auto& q : raw) {
      bool covered = false;
      for (std::size_t o = 0; o < singles.size() && !covered; ++o)
        covered = o != k && singles[o].contains(q);
      if (!covered)
        out.points.push_back(q);
    }
  }
  if (region.dim() == 1) {
    std::sort(out.points.begin(), out.points.end());
    out.points.erase(std::unique(out.points.begin(), out.points.end()), out.points.end());
  }
  return out;
}

} // namespace fraclift
