// lift: batch front end for scene files.
#include "fraclift/scene.hpp"

#include "CLI11.hpp"

#include <iostream>

namespace {

constexpr int kExitValidation = 2;

int report_failure(const std::exception& e, int code) {
  std::cerr << "lift: " << e.what() << '\n';
  return code;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lifted-boundary analysis of open sets"};
  app.set_version_flag("--version", fraclift::kVersion);
  app.require_subcommand(1);

  std::string scene_path, out_dir, what;
  auto* run = app.add_subcommand("run", "run every analysis of a scene");
  run->add_option("--scene", scene_path, "scene JSON file")->required();
  run->add_option("--out", out_dir, "output directory (overrides output.directory)");

  auto* exp = app.add_subcommand("export", "write only the mesh or the distance field");
  exp->add_option("--scene", scene_path, "scene JSON file")->required();
  exp->add_option("--what", what, "mesh or field")->required()->check(CLI::IsMember({"mesh", "field"}));
  exp->add_option("--out", out_dir, "output directory (overrides output.directory)");

  auto* val = app.add_subcommand("validate", "check a scene file without running it");
  val->add_option("--scene", scene_path, "scene JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  fraclift::SceneConfig scene;
  try {
    scene = fraclift::load_scene(scene_path);
  } catch (const fraclift::ValidationError& e) {
    return report_failure(e, kExitValidation);
  }
  const std::string dir = out_dir.empty() ? scene.output_directory : out_dir;

  if (*val) {
    std::cout << "ok: " << scene_path << '\n';
    return 0;
  }

  try {
    if (*exp) {
      for (const auto& p : fraclift::export_scene(scene, what, dir))
        std::cout << p.string() << '\n';
      return 0;
    }
    const auto result = fraclift::run_scene(scene, dir);
    for (const auto& p : result.artifacts)
      std::cout << p.string() << '\n';
    if (result.exit_code != 0)
      std::cerr << "lift: numerical flag raised, see report.json\n";
    return result.exit_code;
  } catch (const fraclift::ValidationError& e) {
    return report_failure(e, kExitValidation);
  } catch (const fraclift::NumericalError& e) {
    return report_failure(e, 3);
  } catch (const std::exception& e) {
    return report_failure(e, 1);
  }
}
