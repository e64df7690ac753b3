#include "fraclift/scene.hpp"

#include "fraclift/distfield.hpp"
#include "fraclift/io.hpp"
#include "fraclift/lift.hpp"
#include "fraclift/ops.hpp"
#include "fraclift/topo.hpp"

#include <algorithm>
#include <fstream>

namespace fraclift {

using nlohmann::json;

namespace {

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key))
    throw SceneError(path + "." + key, "missing required field");
  return obj.at(key);
}

double number(const json& v, const std::string& path) {
  if (!v.is_number())
    throw SceneError(path, "must be a number");
  return v.get<double>();
}

int integer(const json& v, const std::string& path) {
  if (!v.is_number_integer())
    throw SceneError(path, "must be an integer");
  return v.get<int>();
}

std::array<double, 2> pair(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2)
    throw SceneError(path, "must be an array of two numbers");
  return {number(v[0], path + "[0]"), number(v[1], path + "[1]")};
}

Primitive parse_primitive(const json& p, const std::string& path) {
  const std::string type = require(p, "type", path).is_string() ? p.at("type").get<std::string>() : "";
  Primitive prim;
  if (type == "interval") {
    prim = Interval{number(require(p, "a", path), path + ".a"), number(require(p, "b", path), path + ".b")};
  } else if (type == "cantor_complement") {
    CantorComplement c;
    const json& d = require(p, "depth", path);
    if (!(d.is_string() && d.get<std::string>() == "infinite")) {
      c.depth = integer(d, path + ".depth");
      if (*c.depth < 1)
        throw SceneError(path + ".depth", "must be >= 1 or \"infinite\"");
    }
    prim = c;
  } else if (type == "disk") {
    prim = Disk{pair(require(p, "center", path), path + ".center"),
                number(require(p, "r", path), path + ".r")};
  } else if (type == "box") {
    prim = Box{pair(require(p, "lo", path), path + ".lo"), pair(require(p, "hi", path), path + ".hi")};
  } else if (type == "annulus") {
    prim = Annulus{pair(require(p, "center", path), path + ".center"),
                   number(require(p, "r_in", path), path + ".r_in"),
                   number(require(p, "r_out", path), path + ".r_out")};
  } else {
    throw SceneError(path + ".type", "unknown primitive type '" + type + "'");
  }
  try {
    RegionSpec(std::holds_alternative<Interval>(prim) || std::holds_alternative<CantorComplement>(prim) ? 1 : 2,
               {prim});
  } catch (const ValidationError& e) {
    throw SceneError(path, e.what());
  }
  return prim;
}

json dimension_json(const DimensionFit& fit) {
  return {{"slope", fit.slope}, {"intercept", fit.intercept}, {"residual", fit.residual},
          {"scales", fit.scales}, {"counts", fit.counts}};
}

class ArtifactWriter {
public:
  explicit ArtifactWriter(std::filesystem::path dir) : dir_(std::move(dir)) {}
  ArtifactWriter(const ArtifactWriter&) = delete;
  ArtifactWriter& operator=(const ArtifactWriter&) = delete;
  ~ArtifactWriter() {
    if (!committed_)
      for (const auto& p : written_)
        std::filesystem::remove(p);
  }

  std::filesystem::path path(const std::string& name) {
    std::filesystem::create_directories(dir_);
    auto p = dir_ / name;
    written_.push_back(p);
    return p;
  }

  void write_json(const std::string& name, const json& doc) {
    std::ofstream out(path(name), std::ios::trunc);
    out << doc.dump(2) << '\n';
    if (!out)
      throw std::runtime_error("failed writing " + name);
  }

  const std::vector<std::filesystem::path>& written() const { return written_; }
  void commit() { committed_ = true; }

private:
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> written_;
  bool committed_ = false;
};

bool wants(const SceneConfig& s, const std::string& fmt) {
  return std::find(s.formats.begin(), s.formats.end(), fmt) != s.formats.end();
}

struct Pipeline {
  Grid grid;
  ScalarField distance;
  ScalarField height;
  LiftedIndicator indicator;
  BoundaryMesh mesh;
};

Pipeline build(const SceneConfig& scene) {
  Pipeline p;
  p.grid = Grid::covering(scene.region, scene.resolution, scene.padding_factor);
  p.distance = distance_transform(p.grid, scene.region);
  p.height = scene.regularize_epsilon ? regularized_distance(p.distance, *scene.regularize_epsilon)
                                      : p.distance;
  LiftOptions opts;
  opts.t_resolution = scene.t_resolution.value_or(matching_t_resolution(p.height, scene.region));
  p.indicator = lift_open_set(scene.region, p.height, opts);
  p.mesh = extract_lifted_boundary(p.height, scene.region);
  return p;
}

} // namespace

SceneConfig parse_scene(const json& doc) {
  if (!doc.is_object())
    throw SceneError("$", "scene must be a JSON object");
  SceneConfig s;

  const json& region = require(doc, "region", "$");
  const int dim = integer(require(region, "dimension", "region"), "region.dimension");
  if (dim != 1 && dim != 2)
    throw SceneError("region.dimension", "must be 1 or 2");
  const json& prims = require(region, "primitives", "region");
  if (!prims.is_array() || prims.empty())
    throw SceneError("region.primitives", "must be a non-empty array");
  std::vector<Primitive> list;
  for (std::size_t i = 0; i < prims.size(); ++i) {
    const std::string path = "region.primitives[" + std::to_string(i) + "]";
    list.push_back(parse_primitive(prims[i], path));
  }
  try {
    s.region = RegionSpec(dim, std::move(list));
  } catch (const ValidationError& e) {
    throw SceneError("region.primitives", e.what());
  }

  const json& grid = require(doc, "grid", "$");
  s.resolution = integer(require(grid, "resolution", "grid"), "grid.resolution");
  const int limit = dim == 1 ? kMaxResolution1d : kMaxResolution2d;
  if (s.resolution < 2 || s.resolution > limit)
    throw SceneError("grid.resolution", "must lie in [2, " + std::to_string(limit) + "]");
  if (grid.contains("padding_factor")) {
    s.padding_factor = number(grid.at("padding_factor"), "grid.padding_factor");
    if (s.padding_factor < 1.0)
      throw SceneError("grid.padding_factor", "must be >= 1 (one bounding-box diameter)");
  }

  if (doc.contains("lift")) {
    const json& lift = doc.at("lift");
    if (lift.contains("t_resolution") && !lift.at("t_resolution").is_null()) {
      s.t_resolution = integer(lift.at("t_resolution"), "lift.t_resolution");
      if (*s.t_resolution < 2)
        throw SceneError("lift.t_resolution", "must be >= 2");
    }
    if (lift.contains("regularize_epsilon") && !lift.at("regularize_epsilon").is_null()) {
      s.regularize_epsilon = number(lift.at("regularize_epsilon"), "lift.regularize_epsilon");
      if (!(*s.regularize_epsilon > 0.0 && *s.regularize_epsilon < 0.5))
        throw SceneError("lift.regularize_epsilon", "must lie in (0, 0.5)");
    }
  }

  if (doc.contains("analyses")) {
    const json& list_json = doc.at("analyses");
    if (!list_json.is_array())
      throw SceneError("analyses", "must be an array");
    for (std::size_t i = 0; i < list_json.size(); ++i) {
      const std::string path = "analyses[" + std::to_string(i) + "]";
      const json& a = list_json[i];
      const json& type = require(a, "type", path);
      const std::string kind = type.is_string() ? type.get<std::string>() : "";
      Analysis an;
      if (kind == "components") {
        an.kind = Analysis::Kind::components;
      } else if (kind == "dimension") {
        an.kind = Analysis::Kind::dimension;
        const json& sc = require(a, "scales", path);
        if (!sc.is_array() || sc.size() < 2)
          throw SceneError(path + ".scales", "needs at least 2 box sizes");
        for (std::size_t k = 0; k < sc.size(); ++k) {
          const double v = number(sc[k], path + ".scales[" + std::to_string(k) + "]");
          if (!(v > 0.0))
            throw SceneError(path + ".scales[" + std::to_string(k) + "]", "must be positive");
          an.scales.push_back(v);
        }
        if (a.contains("target")) {
          an.target = a.at("target").is_string() ? a.at("target").get<std::string>() : "";
          if (an.target != "boundary" && an.target != "lifted")
            throw SceneError(path + ".target", "must be \"boundary\" or \"lifted\"");
        }
      } else if (kind == "euler") {
        an.kind = Analysis::Kind::euler;
      } else if (kind == "operators") {
        an.kind = Analysis::Kind::operators;
        if (a.contains("symbol")) {
          const json& sym = a.at("symbol");
          an.winding = integer(require(sym, "winding", path + ".symbol"), path + ".symbol.winding");
        }
        if (a.contains("N")) {
          an.samples = integer(a.at("N"), path + ".N");
          if (an.samples < 16 || an.samples > kMaxCurveSamples)
            throw SceneError(path + ".N", "must lie in [16, " + std::to_string(kMaxCurveSamples) + "]");
        }
        if (a.contains("tol")) {
          an.index_tol = number(a.at("tol"), path + ".tol");
          if (!(an.index_tol > 0.0 && an.index_tol < 1.0))
            throw SceneError(path + ".tol", "must lie in (0, 1)");
        }
        if (a.contains("component"))
          an.component = integer(a.at("component"), path + ".component");
      } else {
        throw SceneError(path + ".type", "unknown analysis '" + kind + "'");
      }
      s.analyses.push_back(std::move(an));
    }
  }

  if (doc.contains("output")) {
    const json& out = doc.at("output");
    if (out.contains("directory")) {
      if (!out.at("directory").is_string())
        throw SceneError("output.directory", "must be a string");
      s.output_directory = out.at("directory").get<std::string>();
    }
    if (out.contains("formats")) {
      const json& f = out.at("formats");
      if (!f.is_array())
        throw SceneError("output.formats", "must be an array");
      for (std::size_t k = 0; k < f.size(); ++k) {
        const std::string path = "output.formats[" + std::to_string(k) + "]";
        if (!f[k].is_string())
          throw SceneError(path, "must be a string");
        const auto fmt = f[k].get<std::string>();
        if (fmt != "obj" && fmt != "ply" && fmt != "csv" && fmt != "occupancy")
          throw SceneError(path, "unknown format '" + fmt + "'");
        s.formats.push_back(fmt);
      }
    }
  }
  return s;
}

SceneConfig load_scene(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw SceneError("$", "cannot open scene file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SceneError("$", std::string("invalid JSON: ") + e.what());
  }
  return parse_scene(doc);
}

RunResult run_scene(const SceneConfig& scene, const std::filesystem::path& out_dir) {
  ArtifactWriter writer(out_dir);
  RunResult result;
  Pipeline p = build(scene);
  const Grid& g = p.grid;

  json report;
  report["version"] = kVersion;
  report["region"] = {{"dimension", scene.region.dim()},
                      {"primitives", scene.region.primitives().size()}};
  report["grid"] = {{"h", g.h}, {"nodes", {g.nodes[0], g.nodes[1]}}, {"origin", {g.origin[0], g.origin[1]}}};
  report["distance"] = {{"lipschitz_constant", lipschitz_constant(p.distance)},
                        {"max", p.distance.max_value()}};
  report["lift"] = {{"t_max", p.indicator.t_axis.t_max},
                    {"t_resolution", p.indicator.t_axis.resolution},
                    {"regularize_epsilon", scene.regularize_epsilon ? json(*scene.regularize_epsilon) : json(nullptr)},
                    {"occupied_nodes", p.indicator.occupied_count()},
                    {"volume", static_cast<double>(p.indicator.occupied_count()) * p.indicator.cell_volume()},
                    {"boundary_fraction", empty_interior_check(p.indicator)}};
  report["mesh"] = {{"vertices", p.mesh.vertices.size()}, {"cells", p.mesh.cells.size()},
                    {"measure", p.mesh.measure()}};

  json analyses = json::array();
  bool flagged = false;
  for (const auto& a : scene.analyses) {
    json entry;
    switch (a.kind) {
    case Analysis::Kind::components: {
      entry["type"] = "components";
      const auto base = label_components(BoolLattice::from_grid(g, rasterize(g, scene.region)));
      const auto lifted = label_components(BoolLattice::from_indicator(p.indicator));
      entry["base_components"] = base.component_count;
      entry["lifted_components"] = lifted.component_count;
      if (scene.region.dim() == 1)
        entry["exact_components"] = scene.region.exact_component_count();
      entry["mesh_components"] = mesh_component_count(p.mesh);
      try {
        const auto map = lifted_component_bijection(base, lifted, p.indicator);
        entry["bijection"] = true;
        json images = json::object();
        for (std::size_t v = 0; v < map.images.size(); ++v)
          images[std::to_string(v + 1)] = map.images[v];
        writer.write_json("components.json", {{"version", kVersion}, {"map", images}});
      } catch (const TopologyError& e) {
        entry["bijection"] = false;
        entry["error"] = e.what();
        flagged = true;
      }
      break;
    }
    case Analysis::Kind::dimension: {
      entry["type"] = "dimension";
      entry["target"] = a.target;
      DimensionFit fit;
      if (a.target == "lifted")
        fit = box_counting_dimension(p.mesh, a.scales);
      else
        fit = box_counting_dimension(boundary_samples(scene.region, g.h / 2.0), a.scales);
      entry["fit"] = dimension_json(fit);
      io::export_csv(io::fit_table(fit), writer.path("dimension_" + a.target + ".csv"));
      break;
    }
    case Analysis::Kind::euler: {
      entry["type"] = "euler";
      try {
        entry["chi"] = euler_characteristic(p.mesh);
      } catch (const TopologyError& e) {
        entry["chi"] = nullptr;
        entry["error"] = e.what();
        flagged = true;
      }
      break;
    }
    case Analysis::Kind::operators: {
      entry["type"] = "operators";
      if (scene.region.dim() == 1) {
        const int components = mesh_component_count(p.mesh);
        int comp = a.component.value_or(-1);
        if (comp >= components)
          throw SceneError("analyses.component", "mesh has only " + std::to_string(components) + " components");
        if (comp < 0 && components > 1)
          throw SceneError("analyses.component", "mesh has several loops; choose one");
        const auto curve = sample_closed_curve(p.mesh, a.samples, comp);
        const auto op = toeplitz_curve(curve, SymbolSpec::winding(a.winding));
        const auto idx = fredholm_index(op.T, op.P, a.index_tol);
        entry["index_report"] = {{"symbol", "winding"}, {"winding", a.winding}, {"index", idx.index},
                                 {"gap_ratio", idx.gap_ratio}, {"tol", a.index_tol}};
        entry["reliable"] = idx.reliable;
        entry["idempotence_defect"] = idempotence_defect(op.P);
        if (!idx.reliable)
          flagged = true;
        if (wants(scene, "csv"))
          io::export_csv(io::operator_table(op.P), writer.path("hardy_projection.csv"));
      } else {
        const auto surface = SurfaceSampling::from_mesh(p.mesh);
        if (surface.size() > kMaxSurfaceTriangles)
          throw SceneError("grid.resolution", "surface has " + std::to_string(surface.size()) +
                                                  " triangles; the dense operator limit is " +
                                                  std::to_string(kMaxSurfaceTriangles));
        const auto proj = hardy_projection_surface(surface);
        entry["triangles"] = surface.size();
        entry["idempotence_defect"] = idempotence_defect(proj);
        if (wants(scene, "csv"))
          io::export_csv(io::operator_table(proj), writer.path("hardy_projection.csv"));
      }
      break;
    }
    }
    analyses.push_back(entry);
  }
  report["analyses"] = analyses;

  if (wants(scene, "obj"))
    io::export_mesh(p.mesh, io::MeshFormat::obj, writer.path("lifted_boundary.obj"));
  if (wants(scene, "ply"))
    io::export_mesh(p.mesh, io::MeshFormat::ply, writer.path("lifted_boundary.ply"));
  if (wants(scene, "csv"))
    io::export_csv(io::field_table(p.distance), writer.path("distance_field.csv"));
  if (wants(scene, "occupancy"))
    io::export_occupancy(p.indicator, writer.path("occupancy.ulift"));

  writer.write_json("report.json", report);

  json manifest;
  manifest["version"] = kVersion;
  json files = json::array();
  for (const auto& path : writer.written())
    files.push_back({{"path", path.filename().string()}, {"sha256", io::sha256_file(path)}});
  manifest["artifacts"] = files;
  const auto manifest_path = writer.path("manifest.json");
  {
    std::ofstream out(manifest_path, std::ios::trunc);
    out << manifest.dump(2) << '\n';
  }
  writer.commit();

  result.exit_code = flagged ? 3 : 0;
  result.report = std::move(report);
  result.artifacts = writer.written();
  return result;
}

std::vector<std::filesystem::path> export_scene(const SceneConfig& scene, const std::string& what,
                                                const std::filesystem::path& out_dir) {
  if (what != "mesh" && what != "field")
    throw SceneError("--what", "must be mesh or field");
  ArtifactWriter writer(out_dir);
  const Grid g = Grid::covering(scene.region, scene.resolution, scene.padding_factor);
  const ScalarField d = distance_transform(g, scene.region);
  if (what == "field") {
    io::export_csv(io::field_table(d), writer.path("distance_field.csv"));
  } else {
    const ScalarField height =
        scene.regularize_epsilon ? regularized_distance(d, *scene.regularize_epsilon) : d;
    const auto mesh = extract_lifted_boundary(height, scene.region);
    const bool ply = wants(scene, "ply") && !wants(scene, "obj");
    io::export_mesh(mesh, ply ? io::MeshFormat::ply : io::MeshFormat::obj,
                    writer.path(ply ? "lifted_boundary.ply" : "lifted_boundary.obj"));
  }
  writer.commit();
  return writer.written();
}

} // namespace fraclift
