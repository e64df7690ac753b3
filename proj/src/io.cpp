#include "fraclift/io.hpp"

#include "fraclift/error.hpp"

#include <openssl/evp.h>

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

namespace fraclift::io {

static_assert(std::endian::native == std::endian::little,
              "binary writers assume a little-endian host");

namespace {

std::ofstream open_for_write(const std::filesystem::path& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
  if (!out)
    throw std::runtime_error("cannot write " + path.string());
  return out;
}

template <class T> void put(std::ostream& out, T value) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  out.write(bytes, sizeof(T));
}

template <class T> T get(std::istream& in) {
  char bytes[sizeof(T)];
  in.read(bytes, sizeof(T));
  if (!in)
    throw std::runtime_error("unexpected end of binary data");
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace

void export_mesh(const BoundaryMesh& mesh, MeshFormat format, const std::filesystem::path& path) {
  if (mesh.empty())
    throw ValidationError("refusing to export an empty mesh");
  if (format == MeshFormat::obj) {
    auto out = open_for_write(path, false);
    out << "# lifted boundary, base dimension " << mesh.base_dim << "\n";
    for (const auto& v : mesh.vertices)
      out << "v " << format_number(v[0]) << ' ' << format_number(v[1]) << ' '
          << format_number(v[2]) << '\n';
    const char* tag = mesh.base_dim == 1 ? "l" : "f";
    for (const auto& c : mesh.cells) {
      out << tag;
      for (int k = 0; k < mesh.cell_arity(); ++k)
        out << ' ' << c[static_cast<std::size_t>(k)] + 1;
      out << '\n';
    }
    if (!out)
      throw std::runtime_error("failed writing " + path.string());
    return;
  }

  auto out = open_for_write(path, true);
  out << "ply\nformat binary_little_endian 1.0\ncomment lifted boundary\n"
      << "element vertex " << mesh.vertices.size() << "\n"
      << "property double x\nproperty double y\nproperty double z\n";
  if (mesh.base_dim == 1)
    out << "element edge " << mesh.cells.size() << "\nproperty int vertex1\nproperty int vertex2\n";
  else
    out << "element face " << mesh.cells.size() << "\nproperty list uchar int vertex_indices\n";
  out << "end_header\n";
  for (const auto& v : mesh.vertices)
    for (int k = 0; k < 3; ++k)
      put<double>(out, v[static_cast<std::size_t>(k)]);
  for (const auto& c : mesh.cells) {
    if (mesh.base_dim == 2)
      put<std::uint8_t>(out, 3);
    for (int k = 0; k < mesh.cell_arity(); ++k)
      put<std::int32_t>(out, c[static_cast<std::size_t>(k)]);
  }
  if (!out)
    throw std::runtime_error("failed writing " + path.string());
}

BoundaryMesh import_obj(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot read " + path.string());
  BoundaryMesh mesh;
  mesh.base_dim = 1;
  bool saw_face = false;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "v") {
      Point p{0, 0, 0};
      ls >> p[0] >> p[1] >> p[2];
      mesh.vertices.push_back(p);
    } else if (tag == "l" || tag == "f") {
      std::array<int, 3> c{-1, -1, -1};
      const int arity = tag == "l" ? 2 : 3;
      for (int k = 0; k < arity; ++k) {
        ls >> c[static_cast<std::size_t>(k)];
        --c[static_cast<std::size_t>(k)];
      }
      saw_face = saw_face || tag == "f";
      mesh.cells.push_back(c);
    }
  }
  mesh.base_dim = saw_face ? 2 : 1;
  mesh.component_id.assign(mesh.cells.size(), 0);
  return mesh;
}

BoundaryMesh import_ply(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot read " + path.string());
  std::string line;
  std::size_t nv = 0, nc = 0;
  BoundaryMesh mesh;
  mesh.base_dim = 2;
  std::getline(in, line);
  if (line != "ply")
    throw std::runtime_error("not a PLY file: " + path.string());
  while (std::getline(in, line) && line != "end_header") {
    std::istringstream ls(line);
    std::string word, kind;
    ls >> word;
    if (word == "format") {
      ls >> kind;
      if (kind != "binary_little_endian")
        throw std::runtime_error("unsupported PLY format " + kind);
    } else if (word == "element") {
      std::size_t count = 0;
      ls >> kind >> count;
      if (kind == "vertex")
        nv = count;
      else if (kind == "edge") {
        nc = count;
        mesh.base_dim = 1;
      } else if (kind == "face")
        nc = count;
    }
  }
  for (std::size_t i = 0; i < nv; ++i) {
    Point p{};
    for (int k = 0; k < 3; ++k)
      p[static_cast<std::size_t>(k)] = get<double>(in);
    mesh.vertices.push_back(p);
  }
  for (std::size_t i = 0; i < nc; ++i) {
    std::array<int, 3> c{-1, -1, -1};
    int arity = 2;
    if (mesh.base_dim == 2) {
      arity = get<std::uint8_t>(in);
      if (arity != 3)
        throw std::runtime_error("only triangle faces are supported");
    }
    for (int k = 0; k < arity; ++k)
      c[static_cast<std::size_t>(k)] = get<std::int32_t>(in);
    mesh.cells.push_back(c);
  }
  mesh.component_id.assign(mesh.cells.size(), 0);
  return mesh;
}

Table field_table(const ScalarField& field) {
  Table t;
  t.columns = {"node", "x"};
  if (field.grid.dim == 2)
    t.columns.push_back("y");
  t.columns.push_back("value");
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    const Point p = field.grid.coord(i);
    std::vector<double> row{static_cast<double>(i), p[0]};
    if (field.grid.dim == 2)
      row.push_back(p[1]);
    row.push_back(field.values[i]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table fit_table(const DimensionFit& fit) {
  Table t;
  t.columns = {"scale", "count", "log_inv_scale", "log_count"};
  for (std::size_t i = 0; i < fit.scales.size(); ++i) {
    const double c = static_cast<double>(fit.counts[i]);
    t.rows.push_back({fit.scales[i], c, std::log(1.0 / fit.scales[i]), c > 0 ? std::log(c) : 0.0});
  }
  return t;
}

Table operator_table(const Eigen::MatrixXcd& op) {
  Table t;
  for (Eigen::Index j = 0; j < op.cols(); ++j) {
    t.columns.push_back("c" + std::to_string(j) + "_re");
    t.columns.push_back("c" + std::to_string(j) + "_im");
  }
  for (Eigen::Index i = 0; i < op.rows(); ++i) {
    std::vector<double> row;
    for (Eigen::Index j = 0; j < op.cols(); ++j) {
      row.push_back(op(i, j).real());
      row.push_back(op(i, j).imag());
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table operator_table(const QuaternionMatrix& op) {
  Table t;
  for (std::size_t j = 0; j < op.side(); ++j)
    for (const char* part : {"_w", "_x", "_y", "_z"})
      t.columns.push_back("c" + std::to_string(j) + part);
  for (std::size_t i = 0; i < op.side(); ++i) {
    std::vector<double> row;
    for (std::size_t j = 0; j < op.side(); ++j) {
      const auto& q = op(i, j);
      row.insert(row.end(), {q.w, q.x, q.y, q.z});
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

void export_csv(const Table& table, const std::filesystem::path& path) {
  if (table.rows.empty() || table.columns.empty())
    throw ValidationError("refusing to export an empty table");
  auto out = open_for_write(path, false);
  for (std::size_t c = 0; c < table.columns.size(); ++c)
    out << (c ? "," : "") << table.columns[c];
  out << "\r\n";
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size())
      throw ValidationError("table row width does not match its header");
    for (std::size_t c = 0; c < row.size(); ++c)
      out << (c ? "," : "") << format_number(row[c]);
    out << "\r\n";
  }
  if (!out)
    throw std::runtime_error("failed writing " + path.string());
}

void export_occupancy(const LiftedIndicator& indicator, const std::filesystem::path& path) {
  for (int d : indicator.dims)
    if (d <= 0 || d > 65535)
      throw ValidationError("lattice extent does not fit the occupancy header");
  auto out = open_for_write(path, true);
  out.write("ULIFT1", 6);
  for (int d : indicator.dims)
    put<std::uint16_t>(out, static_cast<std::uint16_t>(d));
  put<float>(out, static_cast<float>(indicator.base.h));
  put<double>(out, indicator.t_axis.t_max);

  char state = 0;
  std::uint32_t run = 0;
  for (char v : indicator.occupancy) {
    const char bit = v ? 1 : 0;
    if (bit != state) {
      put<std::uint32_t>(out, run);
      run = 0;
      state = bit;
    }
    ++run;
  }
  put<std::uint32_t>(out, run);
  if (!out)
    throw std::runtime_error("failed writing " + path.string());
}

OccupancyFile import_occupancy(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot read " + path.string());
  char magic[6];
  in.read(magic, 6);
  if (!in || std::memcmp(magic, "ULIFT1", 6) != 0)
    throw std::runtime_error("bad occupancy magic in " + path.string());
  OccupancyFile f;
  for (auto& d : f.dims)
    d = get<std::uint16_t>(in);
  f.h = get<float>(in);
  f.t_max = get<double>(in);
  const std::size_t total = static_cast<std::size_t>(f.dims[0]) * static_cast<std::size_t>(f.dims[1]) *
                            static_cast<std::size_t>(f.dims[2]);
  char state = 0;
  while (f.occupancy.size() < total) {
    const auto run = get<std::uint32_t>(in);
    f.occupancy.insert(f.occupancy.end(), run, state);
    state = static_cast<char>(1 - state);
  }
  if (f.occupancy.size() != total)
    throw std::runtime_error("occupancy runs overflow the lattice");
  return f;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot read " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 initialisation failed");
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    if (in.gcount() > 0)
      EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i)
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return hex.str();
}

} // namespace fraclift::io
