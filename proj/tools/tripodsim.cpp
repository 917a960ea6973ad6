// Command-line front end: computes probe divergence profiles, ray pairs with
// foci, or susceptibility maps for a config file or a named preset.
//
// Exit codes: 0 success, 1 config error, 2 runtime failure.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tripod/tripod.hpp"

#ifndef TRIPODSIM_PRESET_DIR
#define TRIPODSIM_PRESET_DIR "presets"
#endif

namespace {

std::string locate_preset(const std::string& name,
                          const std::string& preset_dir) {
  namespace fs = std::filesystem;
  const std::string file = name + ".json";
  if (preset_dir.empty()) return file;
  return (fs::path(preset_dir) / file).string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tripodsim: probe deflection in a tripod-driven vapor"};
  app.require_subcommand(1);

  std::string config_path;
  std::string preset;
  std::string preset_dir = TRIPODSIM_PRESET_DIR;
  std::string out_dir = "out";
  std::string mode;
  long long steps = -1;
  double x0 = 0.0;
  bool x0_set = false;
  std::size_t threads = 0;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "path to a config JSON file");
    cmd->add_option("--preset", preset, "preset name: fig2, fig3 or fig4");
    cmd->add_option("--preset-dir", preset_dir,
                    "directory holding the preset files");
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--steps", steps, "override the z grid step count");
    cmd->add_option("--mode", mode,
                    "override ray mode: fixed_line or self_consistent");
    cmd->add_option("--x0", x0, "override the probe line offset in cm")
        ->each([&x0_set](const std::string&) { x0_set = true; });
    cmd->add_option("--threads", threads, "worker threads (0 = hardware)");
  };

  CLI::App* divergence = app.add_subcommand(
      "divergence", "deflection angles and transmissions along the probe line");
  CLI::App* rays =
      app.add_subcommand("rays", "circular ray pair and their crossings");
  CLI::App* chimap =
      app.add_subcommand("chimap", "susceptibility map over the x-z plane");
  add_common(divergence);
  add_common(rays);
  add_common(chimap);

  CLI11_PARSE(app, argc, argv);

  tripod::run_request req;
  if (divergence->parsed()) req.command = tripod::run_command::divergence;
  if (rays->parsed()) req.command = tripod::run_command::rays;
  if (chimap->parsed()) req.command = tripod::run_command::chimap;
  req.out_dir = out_dir;
  req.threads = threads;

  try {
    if (config_path.empty() && preset.empty()) {
      std::fprintf(stderr, "error: give either --config or --preset\n");
      return 1;
    }
    if (!config_path.empty() && !preset.empty()) {
      std::fprintf(stderr, "error: --config and --preset are exclusive\n");
      return 1;
    }
    std::string path = config_path;
    if (!preset.empty()) {
      path = locate_preset(preset, preset_dir);
      req.preset = preset;
    }

    std::ifstream in(path);
    if (!in) {
      std::fprintf(stderr, "error: cannot open config '%s'\n", path.c_str());
      return 1;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    tripod::json doc;
    try {
      doc = tripod::json::parse(buffer.str());
    } catch (const tripod::json::parse_error& e) {
      std::fprintf(stderr, "error: config is not valid JSON: %s\n", e.what());
      return 1;
    }
    if (doc.is_object() && doc.contains("config") &&
        doc.at("config").is_object() && doc.at("config").contains("beam"))
      doc = doc.at("config");

    if (steps >= 0) doc["steps"] = steps;
    if (!mode.empty()) doc["mode"] = mode;
    if (x0_set) doc["probe"]["x0_cm"] = x0;

    req.raw_doc = doc;
    req.base = tripod::resolve_config(doc);
    for (const std::string& w : req.base.warnings)
      std::fprintf(stderr, "warning: %s\n", w.c_str());
  } catch (const tripod::parse_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const tripod::validation_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }

  try {
    const tripod::run_report report = tripod::run(req);
    for (const std::string& f : report.files)
      std::printf("wrote %s\n", f.c_str());
    for (const std::string& e : report.errors)
      std::fprintf(stderr, "failed %s\n", e.c_str());
    return report.ok() ? 0 : 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
