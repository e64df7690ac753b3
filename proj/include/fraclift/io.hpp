#pragma once

#include "fraclift/distfield.hpp"
#include "fraclift/lift.hpp"
#include "fraclift/mesh.hpp"
#include "fraclift/ops.hpp"
#include "fraclift/topo.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace fraclift::io {

enum class MeshFormat { obj, ply };

// Throws ValidationError for an empty mesh (no file is created) and
// std::runtime_error when the path cannot be written.
void export_mesh(const BoundaryMesh& mesh, MeshFormat format, const std::filesystem::path& path);

// Readers for the two mesh formats written above. The base dimension is
// inferred from the cell arity.
BoundaryMesh import_obj(const std::filesystem::path& path);
BoundaryMesh import_ply(const std::filesystem::path& path);

// Plain table written as CSV: header row, '.' decimals, 17 significant digits.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

Table field_table(const ScalarField& field);
Table fit_table(const DimensionFit& fit);
Table operator_table(const Eigen::MatrixXcd& op);
Table operator_table(const QuaternionMatrix& op);

void export_csv(const Table& table, const std::filesystem::path& path);

// Run-length-encoded occupancy. 16-byte header: magic "ULIFT1", three
// uint16 lattice extents, float32 base spacing h (all little-endian),
// followed by float64 t_max and uint32 run lengths alternating
// unoccupied/occupied, starting with unoccupied.
void export_occupancy(const LiftedIndicator& indicator, const std::filesystem::path& path);

struct OccupancyFile {
  std::array<int, 3> dims{1, 1, 1};
  float h = 0.0f;
  double t_max = 0.0;
  std::vector<char> occupancy;
};
OccupancyFile import_occupancy(const std::filesystem::path& path);

// Lower-case hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

} // namespace fraclift::io
