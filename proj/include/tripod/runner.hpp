#pragma once

// Batch execution of the three output-producing commands over a config and
// its sweep: divergence profiles, ray pairs with foci, and susceptibility
// maps. Sweep points run in a small work pool; every point computes fully in
// memory and then writes its files through a temp-and-rename step, so a
// failing point never leaves partial outputs. All floating-point output uses
// 12 significant decimal digits and is byte-reproducible.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "tripod/config.hpp"
#include "tripod/propagation.hpp"
#include "tripod/version.hpp"

namespace tripod {

enum class run_command { divergence, rays, chimap };

inline const char* command_name(run_command c) {
  switch (c) {
    case run_command::divergence:
      return "divergence";
    case run_command::rays:
      return "rays";
    default:
      return "chimap";
  }
}

struct run_request {
  run_command command = run_command::divergence;
  std::string out_dir = "out";
  std::string preset;      // preset name for the metadata echo, may be empty
  json raw_doc;            // original config document (drives the sweep)
  loaded_config base;      // resolved form of raw_doc
  std::size_t threads = 0; // 0 = config value, else hardware concurrency
};

struct run_report {
  std::vector<std::string> files;
  std::vector<std::string> errors;
  bool ok() const { return errors.empty(); }
};

namespace detail {

inline std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.11e", v);
  return buf;
}

inline void append_row(std::string& out, const double* values,
                       std::size_t count) {
  for (std::size_t k = 0; k < count; ++k) {
    if (k > 0) out += ',';
    out += format_value(values[k]);
  }
  out += '\n';
}

inline void write_file_atomic(const std::filesystem::path& path,
                              const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw error("cannot write output file '" + path.string() + "'");
    }
  }
  std::filesystem::rename(tmp, path);
}

struct point_output {
  std::string csv;
  std::string foci;  // rays only
  json extra_meta = json::object();
  std::vector<std::string> warnings;
};

inline point_output run_divergence(const experiment_config& cfg) {
  point_output out;
  vapor_index_field field(cfg.beam, cfg.atomic);
  const double h = cfg.propagation.h_gradient;
  deflection_profile prof = accumulate_deflection(
      [&field](double x, double z) { return field.sample(x, z); },
      [&field, h](double x, double z, polarization pol) {
        return index_gradient(field, x, z, pol, h);
      },
      cfg.x0, cfg.cell_length, cfg.atomic.probe_wavenumber(),
      cfg.propagation.steps);

  if (prof.gain_flagged)
    out.warnings.push_back(
        "transmission exceeded 1 + 1e-6 at some sample; clamped to 1 in the "
        "CSV");

  out.csv = "z_cm,theta_plus_rad,theta_minus_rad,phi_rad,T_plus,T_minus\n";
  for (std::size_t j = 0; j < prof.z.size(); ++j) {
    const double row[6] = {prof.z[j],
                           prof.theta_plus[j],
                           prof.theta_minus[j],
                           prof.phi[j],
                           std::min(prof.t_plus[j], 1.0),
                           std::min(prof.t_minus[j], 1.0)};
    append_row(out.csv, row, 6);
  }
  out.extra_meta["max_condition_proxy"] = field.context().max_condition_proxy();
  return out;
}

inline point_output run_rays(const experiment_config& cfg) {
  point_output out;
  vapor_index_field field(cfg.beam, cfg.atomic);
  const double h = cfg.propagation.h_gradient;
  const auto grad = [&field, h](double x, double z, polarization pol) {
    return index_gradient(field, x, z, pol, h);
  };
  const ray_path plus = integrate_ray(grad, cfg.x0, 0.0, cfg.cell_length,
                                      polarization::plus,
                                      cfg.propagation.transverse_bound,
                                      cfg.propagation.mode,
                                      cfg.propagation.steps);
  const ray_path minus = integrate_ray(grad, cfg.x0, 0.0, cfg.cell_length,
                                       polarization::minus,
                                       cfg.propagation.transverse_bound,
                                       cfg.propagation.mode,
                                       cfg.propagation.steps);
  const std::vector<double> foci = find_foci(plus, minus);

  out.csv = "z_cm,x_plus_cm,x_minus_cm\n";
  for (std::size_t j = 0; j < plus.z.size(); ++j) {
    const double row[3] = {plus.z[j], plus.x[j], minus.x[j]};
    append_row(out.csv, row, 3);
  }

  json foci_doc;
  foci_doc["foci_z_cm"] = foci;
  out.foci = foci_doc.dump(2);
  out.foci += '\n';
  out.extra_meta["focus_count"] = foci.size();
  out.extra_meta["max_condition_proxy"] = field.context().max_condition_proxy();
  return out;
}

inline point_output run_chimap(const experiment_config& cfg) {
  point_output out;
  response_context ctx(cfg.beam, cfg.atomic);
  const chimap_grid& grid = cfg.chimap;

  out.csv = "x_cm,z_cm,re_chi_plus,im_chi_plus,re_chi_minus,im_chi_minus\n";
  for (std::size_t ix = 0; ix < grid.nx; ++ix) {
    const double x = grid.x_min + (grid.x_max - grid.x_min) *
                                      static_cast<double>(ix) /
                                      static_cast<double>(grid.nx - 1);
    for (std::size_t iz = 0; iz < grid.nz; ++iz) {
      const double z = cfg.cell_length * static_cast<double>(iz) /
                       static_cast<double>(grid.nz - 1);
      const susceptibility_sample s = ctx.at(x, 0.0, z);
      const double row[6] = {x,
                             z,
                             std::real(s.chi_plus),
                             std::imag(s.chi_plus),
                             std::real(s.chi_minus),
                             std::imag(s.chi_minus)};
      append_row(out.csv, row, 6);
    }
  }
  out.extra_meta["max_condition_proxy"] = ctx.max_condition_proxy();
  return out;
}

}

// Executes the request; returns the files written and per-point errors.
// Throws nothing for per-point numerical failures (they are collected), but
// propagates config-level problems.
inline run_report run(const run_request& req) {
  namespace fs = std::filesystem;
  run_report report;

  const std::vector<sweep_point> points = expand_sweep(req.raw_doc, req.base);
  fs::create_directories(req.out_dir);

  std::size_t n_threads = req.threads;
  if (n_threads == 0) n_threads = req.base.resolved.threads;
  if (n_threads == 0) n_threads = std::thread::hardware_concurrency();
  if (n_threads == 0) n_threads = 1;
  n_threads = std::min(n_threads, points.size());

  std::mutex report_mutex;
  std::atomic<std::size_t> next{0};

  const auto worker = [&] {
    while (true) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= points.size()) return;
      const sweep_point& point = points[idx];
      const std::string stem =
          std::string(command_name(req.command)) +
          (point.label.empty() ? "" : "_" + point.label);
      try {
        detail::point_output out;
        switch (req.command) {
          case run_command::divergence:
            out = detail::run_divergence(point.config.resolved);
            break;
          case run_command::rays:
            out = detail::run_rays(point.config.resolved);
            break;
          case run_command::chimap:
            out = detail::run_chimap(point.config.resolved);
            break;
        }

        json meta;
        meta["tool"] = "tripodsim";
        meta["version"] = version_string;
        meta["command"] = command_name(req.command);
        if (!req.preset.empty()) meta["preset"] = req.preset;
        if (!point.label.empty()) meta["sweep_label"] = point.label;
        meta["config"] = point.config.resolved_doc;
        std::vector<std::string> warnings = point.config.warnings;
        warnings.insert(warnings.end(), out.warnings.begin(),
                        out.warnings.end());
        meta["warnings"] = warnings;
        for (auto& [key, value] : out.extra_meta.items()) meta[key] = value;
        json outputs;
        outputs["csv"] = stem + ".csv";
        if (!out.foci.empty()) outputs["foci"] = stem + ".foci.json";
        meta["outputs"] = outputs;

        std::vector<std::pair<std::string, std::string>> files;
        files.emplace_back(stem + ".csv", out.csv);
        if (!out.foci.empty()) files.emplace_back(stem + ".foci.json", out.foci);
        files.emplace_back(stem + ".meta.json", meta.dump(2) + "\n");

        for (const auto& [name, content] : files)
          detail::write_file_atomic(fs::path(req.out_dir) / name, content);

        const std::lock_guard<std::mutex> lock(report_mutex);
        for (const auto& [name, content] : files)
          report.files.push_back((fs::path(req.out_dir) / name).string());
      } catch (const std::exception& e) {
        const std::lock_guard<std::mutex> lock(report_mutex);
        report.errors.push_back(stem + ": " + e.what());
      }
    }
  };

  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  std::sort(report.files.begin(), report.files.end());
  std::sort(report.errors.begin(), report.errors.end());
  return report;
}

}
