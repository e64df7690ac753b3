#pragma once

#include "fraclift/mesh.hpp"
#include "fraclift/quaternion.hpp"

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <span>
#include <vector>

namespace fraclift {

using Complex = std::complex<double>;

// Closed planar loop sampled at N points, counter-clockwise. Point j sits at
// curve parameter 2*pi*j/N; weights are the arclength carried by each point.
struct CurveSampling {
  std::vector<Complex> points;
  std::vector<double> weights;
  std::vector<Complex> tangents; // unit

  std::size_t size() const { return points.size(); }
  double length() const;
  double signed_area() const;
  Complex centroid() const;
  // Reverses the traversal (the orientation-flip of the loop).
  CurveSampling reversed() const;
};

CurveSampling sample_circle(Complex center, double radius, int n);

// Equi-arclength resampling of one closed loop of a polyline mesh
// (base_dim 1, vertices read as x + i t). `component` selects a cell
// component after mesh_component_count; -1 requires the mesh to be a
// single loop. Throws NumericalError for open, branched or
// self-intersecting loops.
CurveSampling sample_closed_curve(const BoundaryMesh& mesh, int n, int component = -1);

// Discrete singular Cauchy integral S. Off-diagonal entries are the
// Nystrom weights (1/(pi i)) t_j w_j / (z_j - z_i); the diagonal makes every
// row sum to one; a spectral tangential-derivative term restores the
// quadrature's missing local contribution.
Eigen::MatrixXcd cauchy_singular_curve(const CurveSampling& curve);

// P = (I + S) / 2, the discrete Hardy projection.
Eigen::MatrixXcd cauchy_projection_curve(const CurveSampling& curve);

// Symbol a(z) = ((z - c)/|z - c|)^k about the curve centroid, or explicit
// per-point values.
struct SymbolSpec {
  std::optional<int> winding_exponent;
  std::vector<Complex> values;

  static SymbolSpec winding(int k) { return {k, {}}; }
  static SymbolSpec explicit_values(std::vector<Complex> v) { return {std::nullopt, std::move(v)}; }

  std::vector<Complex> evaluate(const CurveSampling& curve) const;
};

struct ToeplitzOperator {
  Eigen::MatrixXcd T; // P M_a P
  Eigen::MatrixXcd P;
  double min_symbol_modulus = 0.0;
};

// Throws ValidationError when the symbol vanishes on the curve.
ToeplitzOperator toeplitz_curve(const CurveSampling& curve, const SymbolSpec& symbol);

struct IndexReport {
  int index = 0;
  int counted = 0;         // singular values below tol * sigma_max
  double gap_ratio = 0.0;  // smallest uncounted / largest counted
  bool reliable = false;   // gap_ratio >= kRequiredGap
  std::vector<double> singular_values; // of T restricted to range(P), ascending
};

inline constexpr double kDefaultIndexTol = 1e-8;
inline constexpr double kRequiredGap = 10.0;
// Lifted loops keep their corners where they meet t = 0, so the Nystrom
// projection is only accurate to a few percent there and near-null singular
// values sit well above round-off.
inline constexpr double kLiftedIndexTol = 0.05;

// Index of T on range(P). A square finite section always has matching
// kernel and cokernel sizes, so each near-null singular pair is attributed
// by where its vectors live: a well-resolved (low-frequency) right vector is
// a kernel element of T, a well-resolved left vector a cokernel element;
// vectors at the resolution limit are truncation artefacts.
IndexReport fredholm_index(const Eigen::MatrixXcd& T, const Eigen::MatrixXcd& P,
                           double tol = kDefaultIndexTol);

// Spectral norm of P^2 - P.
double idempotence_defect(const Eigen::MatrixXcd& P);

// Triangulated closed surface in R^3: centroids, outward unit normals, areas.
struct SurfaceSampling {
  std::vector<Point> centroids;
  std::vector<Point> normals;
  std::vector<double> areas;
  double mesh_size = 0.0;

  std::size_t size() const { return areas.size(); }
  double total_area() const;

  // Orientation is normalized so the flux of the position field is positive.
  static SurfaceSampling from_mesh(const BoundaryMesh& mesh);
};

// Cauchy kernel conj(v) / (4 pi |v|^3) for v embedded as a pure quaternion.
Quaternion cauchy_kernel(const Point& v);

// sum_j E(y_j - x) n_j f_j area_j (kernel * normal * density, in that order).
// Throws ValidationError when x is within one local mesh size of a sample.
Quaternion cauchy_integral_surface(const SurfaceSampling& surface,
                                   std::span<const Quaternion> density, const Point& x);

// Dense quaternion matrix acting on quaternion vectors by left
// multiplication: (A f)_i = sum_j A_ij f_j.
class QuaternionMatrix {
public:
  explicit QuaternionMatrix(std::size_t side = 0)
      : side_(side), entries_(side * side) {}

  std::size_t side() const { return side_; }
  Quaternion& operator()(std::size_t i, std::size_t j) { return entries_[i * side_ + j]; }
  const Quaternion& operator()(std::size_t i, std::size_t j) const { return entries_[i * side_ + j]; }

  std::vector<Quaternion> apply(std::span<const Quaternion> f) const;
  // Quaternionic conjugate transpose.
  std::vector<Quaternion> apply_adjoint(std::span<const Quaternion> f) const;

private:
  std::size_t side_;
  std::vector<Quaternion> entries_;
};

// Quaternionic Nystrom Hardy projection P = (I + S)/2 with
// S_ij = 2 E(y_j - y_i) n_j area_j off the diagonal and the diagonal fixed
// so every row of S sums to one.
QuaternionMatrix hardy_projection_surface(const SurfaceSampling& surface);

// Operator norm of P^2 - P by power iteration on its normal operator.
double idempotence_defect(const QuaternionMatrix& P, int iterations = 300);

} // namespace fraclift
