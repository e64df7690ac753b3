#pragma once

#include "fraclift/error.hpp"
#include "fraclift/ops.hpp"
#include "fraclift/region.hpp"

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace fraclift {

inline constexpr const char* kVersion = "fraclift 0.1.0";

// Limits checked by validation.
inline constexpr int kMaxResolution1d = 1'000'000;
inline constexpr int kMaxResolution2d = 2048;
inline constexpr int kMaxCurveSamples = 4096;
inline constexpr std::size_t kMaxSurfaceTriangles = 4000;

// Validation failure carrying the JSON path of the offending field.
class SceneError : public ValidationError {
public:
  SceneError(std::string field, const std::string& message)
      : ValidationError(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

private:
  std::string field_;
};

struct Analysis {
  enum class Kind { components, dimension, euler, operators };
  Kind kind = Kind::components;
  std::vector<double> scales;      // dimension
  std::string target = "boundary"; // dimension: "boundary" (E) or "lifted"
  int winding = 1;                 // operators
  int samples = 256;               // operators (curve N)
  std::optional<int> component;    // operators: mesh component of the loop
  double index_tol = kLiftedIndexTol;// operators: fredholm_index tolerance
};

struct SceneConfig {
  RegionSpec region{1, {Interval{}}};
  int resolution = 256;
  double padding_factor = 1.0;
  std::optional<int> t_resolution; // empty = match the base spacing
  std::optional<double> regularize_epsilon;
  std::vector<Analysis> analyses;
  std::string output_directory = "out";
  std::vector<std::string> formats; // obj, ply, csv, occupancy
};

// Throws SceneError naming the offending field.
SceneConfig parse_scene(const nlohmann::json& doc);
SceneConfig load_scene(const std::filesystem::path& path);

struct RunResult {
  int exit_code = 0; // 0 ok, 3 numerical flag
  nlohmann::json report;
  std::vector<std::filesystem::path> artifacts;
};

// Runs the pipeline (distance, lift, boundary, analyses) and writes the
// requested artifacts, report.json and manifest.json under `out_dir`.
// On an exception every file written so far is removed.
RunResult run_scene(const SceneConfig& scene, const std::filesystem::path& out_dir);

// Writes only the mesh or the distance field ("mesh" | "field").
std::vector<std::filesystem::path> export_scene(const SceneConfig& scene, const std::string& what,
                                                const std::filesystem::path& out_dir);

} // namespace fraclift
