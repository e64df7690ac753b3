#include "fraclift/ops.hpp"

#include "fraclift/error.hpp"
#include "fraclift/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <random>

namespace fraclift {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

double cross2(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

bool segments_cross(Complex a, Complex b, Complex c, Complex d) {
  const double d1 = cross2(b - a, c - a);
  const double d2 = cross2(b - a, d - a);
  const double d3 = cross2(d - c, a - c);
  const double d4 = cross2(d - c, b - c);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

// Spectral differentiation in the curve parameter theta = 2 pi j / N. For
// even N the Nyquist mode is differentiated as exp(+i N theta / 2) when
// orientation > 0 and as exp(-i N theta / 2) otherwise, so it belongs to
// the same side as the other non-negative modes.
Eigen::MatrixXcd spectral_derivative(int n, double orientation) {
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(n, n);
  const double h = 2.0 * kPi / n;
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i)
        continue;
      const int k = i - j;
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      const double v = n % 2 == 0 ? 0.5 * sign / std::tan(k * h / 2.0)
                                  : 0.5 * sign / std::sin(k * h / 2.0);
      d(i, j) = v;
      diag -= v;
    }
    d(i, i) = diag;
  }
  if (n % 2 == 0) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        d(i, j) += orientation * 0.5 * kI * (((i - j) % 2 == 0) ? 1.0 : -1.0);
  }
  return d;
}

// Fraction of the discrete Fourier energy of f carried by |frequency| <= N/4.
double low_frequency_fraction(const Eigen::VectorXcd& f) {
  const auto n = static_cast<int>(f.size());
  double low = 0.0;
  double total = 0.0;
  for (int m = 0; m < n; ++m) {
    Complex c{0.0, 0.0};
    for (int j = 0; j < n; ++j)
      c += f(j) * std::polar(1.0, -2.0 * kPi * m * j / n);
    const double e = std::norm(c);
    const int signed_m = m <= n / 2 ? m : m - n;
    total += e;
    if (std::abs(signed_m) <= n / 4)
      low += e;
  }
  return total > 0.0 ? low / total : 0.0;
}

Point sub(const Point& a, const Point& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

double norm3(const Point& a) { return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]); }

} // namespace

double CurveSampling::length() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }

double CurveSampling::signed_area() const {
  double a = 0.0;
  for (std::size_t j = 0; j < points.size(); ++j)
    a += cross2(points[j], points[(j + 1) % points.size()]);
  return 0.5 * a;
}

Complex CurveSampling::centroid() const {
  Complex c{0.0, 0.0};
  for (std::size_t j = 0; j < points.size(); ++j)
    c += weights[j] * points[j];
  return c / length();
}

CurveSampling CurveSampling::reversed() const {
  CurveSampling r;
  const std::size_t n = points.size();
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = (n - j) % n;
    r.points.push_back(points[src]);
    r.weights.push_back(weights[src]);
    r.tangents.push_back(-tangents[src]);
  }
  return r;
}

CurveSampling sample_circle(Complex center, double radius, int n) {
  if (n < 3)
    throw ValidationError("circle sampling needs at least 3 points");
  if (!(radius > 0.0))
    throw ValidationError("circle radius must be positive");
  CurveSampling c;
  for (int j = 0; j < n; ++j) {
    const Complex u = std::polar(1.0, 2.0 * kPi * j / n);
    c.points.push_back(center + radius * u);
    c.weights.push_back(2.0 * kPi * radius / n);
    c.tangents.push_back(kI * u);
  }
  return c;
}

CurveSampling sample_closed_curve(const BoundaryMesh& mesh, int n, int component) {
  if (mesh.base_dim != 1)
    throw ValidationError("closed-curve sampling needs a polyline mesh");
  if (n < 16)
    throw ValidationError("closed-curve sampling needs N >= 16");

  std::map<int, std::vector<int>> adjacency;
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
    if (component >= 0 && mesh.component_id[c] != component)
      continue;
    adjacency[mesh.cells[c][0]].push_back(mesh.cells[c][1]);
    adjacency[mesh.cells[c][1]].push_back(mesh.cells[c][0]);
  }
  if (adjacency.empty())
    throw NumericalError("selected loop is empty");
  for (const auto& [v, nb] : adjacency)
    if (nb.size() != 2)
      throw NumericalError("loop is open or branched at vertex " + std::to_string(v));

  std::vector<Complex> loop;
  const int start = adjacency.begin()->first;
  int prev = -1;
  int cur = start;
  do {
    const Point& p = mesh.vertices[static_cast<std::size_t>(cur)];
    loop.emplace_back(p[0], p[1]);
    const auto& nb = adjacency[cur];
    const int next = nb[0] != prev ? nb[0] : nb[1];
    prev = cur;
    cur = next;
  } while (cur != start && loop.size() <= adjacency.size());
  if (loop.size() != adjacency.size())
    throw NumericalError("selection holds more than one loop");

  const std::size_t m = loop.size();
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 2; b < m; ++b) {
      if (a == 0 && b == m - 1)
        continue;
      if (segments_cross(loop[a], loop[(a + 1) % m], loop[b], loop[(b + 1) % m]))
        throw NumericalError("loop is self-intersecting");
    }

  double area = 0.0;
  for (std::size_t j = 0; j < m; ++j)
    area += cross2(loop[j], loop[(j + 1) % m]);
  if (area < 0.0)
    std::reverse(loop.begin(), loop.end());

  std::vector<double> cumulative(m + 1, 0.0);
  for (std::size_t j = 0; j < m; ++j)
    cumulative[j + 1] = cumulative[j] + std::abs(loop[(j + 1) % m] - loop[j]);
  const double total = cumulative[m];

  CurveSampling c;
  std::size_t seg = 0;
  for (int j = 0; j < n; ++j) {
    const double s = total * j / n;
    while (seg + 1 < m && cumulative[seg + 1] <= s)
      ++seg;
    const double len = cumulative[seg + 1] - cumulative[seg];
    const double w = len > 0.0 ? (s - cumulative[seg]) / len : 0.0;
    c.points.push_back(loop[seg] + w * (loop[(seg + 1) % m] - loop[seg]));
  }
  for (int j = 0; j < n; ++j) {
    const Complex d = c.points[static_cast<std::size_t>((j + 1) % n)] -
                      c.points[static_cast<std::size_t>((j + n - 1) % n)];
    c.tangents.push_back(d / std::abs(d));
    c.weights.push_back(total / n);
  }
  return c;
}

Eigen::MatrixXcd cauchy_singular_curve(const CurveSampling& curve) {
  const auto n = static_cast<int>(curve.size());
  if (n < 3)
    throw ValidationError("curve sampling too small");
  const double orientation = curve.signed_area() >= 0.0 ? 1.0 : -1.0;
  const double h = 2.0 * kPi / n;
  Eigen::MatrixXcd s(n, n);
  parallel_for(0, static_cast<std::size_t>(n), [&](std::size_t ui) {
    const int i = static_cast<int>(ui);
    Complex row{0.0, 0.0};
    for (int j = 0; j < n; ++j) {
      if (j == i)
        continue;
      const Complex dz = curve.points[static_cast<std::size_t>(j)] - curve.points[ui];
      if (dz == Complex{0.0, 0.0})
        throw ValidationError("duplicate curve points " + std::to_string(i) + " and " +
                              std::to_string(j));
      const Complex k = curve.tangents[static_cast<std::size_t>(j)] *
                        curve.weights[static_cast<std::size_t>(j)] / (kPi * kI * dz);
      s(i, j) = k;
      row += k;
    }
    s(i, i) = orientation - row;
  });
  s += (h / (kPi * kI)) * spectral_derivative(n, orientation);
  return s;
}

Eigen::MatrixXcd cauchy_projection_curve(const CurveSampling& curve) {
  const auto n = static_cast<Eigen::Index>(curve.size());
  return 0.5 * (Eigen::MatrixXcd::Identity(n, n) + cauchy_singular_curve(curve));
}

std::vector<Complex> SymbolSpec::evaluate(const CurveSampling& curve) const {
  if (winding_exponent) {
    const Complex c = curve.centroid();
    std::vector<Complex> out;
    out.reserve(curve.size());
    for (const auto& z : curve.points) {
      if (z == c)
        throw ValidationError("symbol centre lies on the curve");
      out.push_back(std::polar(1.0, *winding_exponent * std::arg(z - c)));
    }
    return out;
  }
  if (values.size() != curve.size())
    throw ValidationError("explicit symbol has " + std::to_string(values.size()) +
                          " values for " + std::to_string(curve.size()) + " curve points");
  return values;
}

ToeplitzOperator toeplitz_curve(const CurveSampling& curve, const SymbolSpec& symbol) {
  const auto a = symbol.evaluate(curve);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& v : a) {
    lo = std::min(lo, std::abs(v));
    hi = std::max(hi, std::abs(v));
  }
  if (!(lo > 1e-12 * hi) || !(hi > 0.0))
    throw ValidationError("symbol vanishes on the curve (min modulus " + std::to_string(lo) + ")");

  ToeplitzOperator op;
  op.P = cauchy_projection_curve(curve);
  const auto n = static_cast<Eigen::Index>(a.size());
  Eigen::VectorXcd diag(n);
  for (Eigen::Index j = 0; j < n; ++j)
    diag(j) = a[static_cast<std::size_t>(j)];
  op.T = op.P * diag.asDiagonal() * op.P;
  op.min_symbol_modulus = lo;
  return op;
}

IndexReport fredholm_index(const Eigen::MatrixXcd& T, const Eigen::MatrixXcd& P, double tol) {
  if (T.rows() != T.cols() || P.rows() != P.cols() || T.rows() != P.rows())
    throw ValidationError("T and P must be square matrices of equal size");
  if (!(tol > 0.0 && tol < 1.0))
    throw ValidationError("index tolerance must lie in (0, 1)");
  const auto rank = static_cast<Eigen::Index>(std::lround(P.trace().real()));
  if (rank <= 0 || rank > P.rows())
    throw NumericalError("projection has no usable range");

  Eigen::BDCSVD<Eigen::MatrixXcd> range_svd(P, Eigen::ComputeThinU);
  const Eigen::MatrixXcd q = range_svd.matrixU().leftCols(rank);
  const Eigen::MatrixXcd restricted = q.adjoint() * T * q;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(restricted, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd sigma = svd.singularValues(); // descending

  IndexReport report;
  for (Eigen::Index k = sigma.size() - 1; k >= 0; --k)
    report.singular_values.push_back(sigma(k));
  const double smax = sigma(0);
  const double cut = tol * smax;
  int counted = 0;
  for (Eigen::Index k = 0; k < sigma.size(); ++k)
    counted += sigma(k) < cut ? 1 : 0;
  report.counted = counted;

  const double floor_value = std::numeric_limits<double>::epsilon() * smax;
  if (counted == 0) {
    report.gap_ratio = sigma(sigma.size() - 1) / cut;
  } else if (counted == sigma.size()) {
    report.gap_ratio = 0.0;
  } else {
    const double largest_counted = sigma(sigma.size() - counted);
    const double smallest_kept = sigma(sigma.size() - counted - 1);
    report.gap_ratio = smallest_kept / std::max(largest_counted, floor_value);
  }
  report.reliable = report.gap_ratio >= kRequiredGap;

  int kernel = 0;
  int cokernel = 0;
  for (Eigen::Index k = sigma.size() - counted; k < sigma.size(); ++k) {
    const Eigen::VectorXcd right = q * svd.matrixV().col(k);
    const Eigen::VectorXcd left = q * svd.matrixU().col(k);
    kernel += low_frequency_fraction(right) > 0.5 ? 1 : 0;
    cokernel += low_frequency_fraction(left) > 0.5 ? 1 : 0;
  }
  report.index = kernel - cokernel;
  return report;
}

double idempotence_defect(const Eigen::MatrixXcd& P) {
  const Eigen::MatrixXcd defect = P * P - P;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(defect);
  return svd.singularValues()(0);
}

double SurfaceSampling::total_area() const { return std::accumulate(areas.begin(), areas.end(), 0.0); }

SurfaceSampling SurfaceSampling::from_mesh(const BoundaryMesh& mesh) {
  if (mesh.base_dim != 2 || mesh.empty())
    throw ValidationError("surface sampling needs a non-empty triangle mesh");
  SurfaceSampling s;
  double flux = 0.0;
  for (const auto& c : mesh.cells) {
    const Point& a = mesh.vertices[static_cast<std::size_t>(c[0])];
    const Point& b = mesh.vertices[static_cast<std::size_t>(c[1])];
    const Point& d = mesh.vertices[static_cast<std::size_t>(c[2])];
    const Point e1 = sub(b, a);
    const Point e2 = sub(d, a);
    const Point cr{e1[1] * e2[2] - e1[2] * e2[1], e1[2] * e2[0] - e1[0] * e2[2],
                   e1[0] * e2[1] - e1[1] * e2[0]};
    const double len = norm3(cr);
    const Point centroid{(a[0] + b[0] + d[0]) / 3.0, (a[1] + b[1] + d[1]) / 3.0,
                         (a[2] + b[2] + d[2]) / 3.0};
    const Point normal = len > 0.0 ? Point{cr[0] / len, cr[1] / len, cr[2] / len} : Point{0, 0, 0};
    s.centroids.push_back(centroid);
    s.normals.push_back(normal);
    s.areas.push_back(0.5 * len);
    s.mesh_size = std::max({s.mesh_size, norm3(e1), norm3(e2), norm3(sub(d, b))});
    flux += (centroid[0] * normal[0] + centroid[1] * normal[1] + centroid[2] * normal[2]) * 0.5 * len;
  }
  const double total = s.total_area();
  for (std::size_t j = 0; j < s.areas.size(); ++j)
    if (s.areas[j] < 1e-12 * total)
      throw ValidationError("degenerate triangle " + std::to_string(j));
  if (flux < 0.0)
    for (auto& n : s.normals)
      n = {-n[0], -n[1], -n[2]};
  return s;
}

Quaternion cauchy_kernel(const Point& v) {
  const double r = norm3(v);
  return Quaternion::pure(v).conj() * (1.0 / (4.0 * kPi * r * r * r));
}

Quaternion cauchy_integral_surface(const SurfaceSampling& surface,
                                   std::span<const Quaternion> density, const Point& x) {
  if (density.size() != surface.size())
    throw ValidationError("density size does not match the surface sampling");
  Quaternion sum;
  for (std::size_t j = 0; j < surface.size(); ++j) {
    const Point v = sub(surface.centroids[j], x);
    if (norm3(v) < surface.mesh_size)
      throw ValidationError("evaluation point lies within one mesh size of the surface");
    sum += cauchy_kernel(v) * Quaternion::pure(surface.normals[j]) * density[j] * surface.areas[j];
  }
  return sum;
}

std::vector<Quaternion> QuaternionMatrix::apply(std::span<const Quaternion> f) const {
  if (f.size() != side_)
    throw ValidationError("vector size does not match the matrix");
  std::vector<Quaternion> out(side_);
  parallel_for(0, side_, [&](std::size_t i) {
    Quaternion acc;
    const Quaternion* row = entries_.data() + i * side_;
    for (std::size_t j = 0; j < side_; ++j)
      acc += row[j] * f[j];
    out[i] = acc;
  });
  return out;
}

std::vector<Quaternion> QuaternionMatrix::apply_adjoint(std::span<const Quaternion> f) const {
  if (f.size() != side_)
    throw ValidationError("vector size does not match the matrix");
  std::vector<Quaternion> out(side_);
  parallel_for(0, side_, [&](std::size_t j) {
    Quaternion acc;
    for (std::size_t i = 0; i < side_; ++i)
      acc += entries_[i * side_ + j].conj() * f[i];
    out[j] = acc;
  });
  return out;
}

QuaternionMatrix hardy_projection_surface(const SurfaceSampling& surface) {
  const std::size_t n = surface.size();
  if (n == 0)
    throw ValidationError("empty surface sampling");
  const double total = surface.total_area();
  for (std::size_t j = 0; j < n; ++j)
    if (surface.areas[j] < 1e-12 * total)
      throw ValidationError("degenerate triangle " + std::to_string(j));

  QuaternionMatrix p(n);
  parallel_for(0, n, [&](std::size_t i) {
    Quaternion row;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i)
        continue;
      const Quaternion s = 2.0 * surface.areas[j] *
                           (cauchy_kernel(sub(surface.centroids[j], surface.centroids[i])) *
                            Quaternion::pure(surface.normals[j]));
      row += s;
      p(i, j) = 0.5 * s;
    }
    p(i, i) = 0.5 * (Quaternion{1.0, 0, 0, 0} + (Quaternion{1.0, 0, 0, 0} - row));
  });
  return p;
}

double idempotence_defect(const QuaternionMatrix& P, int iterations) {
  const std::size_t n = P.side();
  auto defect = [&](const std::vector<Quaternion>& f) {
    auto pf = P.apply(f);
    auto ppf = P.apply(pf);
    for (std::size_t i = 0; i < n; ++i)
      ppf[i] -= pf[i];
    return ppf;
  };
  auto defect_adjoint = [&](const std::vector<Quaternion>& f) {
    auto pf = P.apply_adjoint(f);
    auto ppf = P.apply_adjoint(pf);
    for (std::size_t i = 0; i < n; ++i)
      ppf[i] -= pf[i];
    return ppf;
  };
  auto vnorm = [](const std::vector<Quaternion>& f) {
    double s = 0.0;
    for (const auto& q : f)
      s += q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z;
    return std::sqrt(s);
  };

  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss;
  std::vector<Quaternion> v(n);
  for (auto& q : v)
    q = {gauss(rng), gauss(rng), gauss(rng), gauss(rng)};
  double estimate = 0.0;
  for (int it = 0; it < iterations; ++it) {
    const double nv = vnorm(v);
    if (nv == 0.0)
      return 0.0;
    for (auto& q : v)
      q *= 1.0 / nv;
    const auto bv = defect(v);
    const double next = vnorm(bv);
    v = defect_adjoint(bv);
    if (it > 10 && std::abs(next - estimate) <= 1e-9 * next) {
      estimate = next;
      break;
    }
    estimate = next;
  }
  return estimate;
}

} // namespace fraclift
