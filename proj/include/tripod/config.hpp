#pragma once

// Experiment configuration: a single JSON document describing the vapor, the
// control beam, the probe line, and the run geometry. Loading applies the
// documented defaults, resolves derived quantities (Rayleigh range, gradient
// step, probe offset), validates every constraint, and keeps a fully resolved
// echo of the document so any output can be regenerated from its metadata
// sidecar alone.

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tripod/beams.hpp"
#include "tripod/errors.hpp"
#include "tripod/params.hpp"
#include "tripod/propagation.hpp"

namespace tripod {

using json = nlohmann::json;

struct chimap_grid {
  std::size_t nx = 81;
  std::size_t nz = 81;
  double x_min = 0.0;
  double x_max = 0.0;
};

struct experiment_config {
  atomic_params atomic;
  beam_spec beam;
  double x0 = 0.0;           // probe line offset, cm
  double cell_length = 0.0;  // cm
  propagation_options propagation;
  chimap_grid chimap;
  std::size_t threads = 0;  // 0 = hardware concurrency
};

struct sweep_axis {
  std::vector<std::string> paths;  // dotted keys, advanced together
  std::vector<std::vector<json>> tuples;
};

struct loaded_config {
  experiment_config resolved;
  json resolved_doc;  // defaults and derived values materialized, no sweep
  std::vector<sweep_axis> sweep;
  std::vector<std::string> warnings;
};

namespace detail {

inline void check(bool ok, const std::string& message) {
  if (!ok) throw validation_error(message);
}

inline double number_field(const json& node, const std::string& key,
                           double fallback) {
  if (!node.contains(key)) return fallback;
  const json& v = node.at(key);
  check(v.is_number(), "field '" + key + "' must be a number");
  return v.get<double>();
}

inline double required_number(const json& node, const std::string& key,
                              const std::string& where) {
  check(node.contains(key), "missing required field '" + where + key + "'");
  const json& v = node.at(key);
  check(v.is_number(), "field '" + where + key + "' must be a number");
  return v.get<double>();
}

inline const json* walk_path(const json& doc, const std::string& dotted) {
  const json* node = &doc;
  std::size_t begin = 0;
  while (begin <= dotted.size()) {
    const std::size_t dot = dotted.find('.', begin);
    const std::string key = dotted.substr(
        begin, dot == std::string::npos ? std::string::npos : dot - begin);
    if (!node->is_object() || !node->contains(key)) return nullptr;
    node = &node->at(key);
    if (dot == std::string::npos) return node;
    begin = dot + 1;
  }
  return nullptr;
}

inline void assign_path(json& doc, const std::string& dotted,
                        const json& value) {
  json* node = &doc;
  std::size_t begin = 0;
  while (true) {
    const std::size_t dot = dotted.find('.', begin);
    if (dot == std::string::npos) {
      (*node)[dotted.substr(begin)] = value;
      return;
    }
    node = &(*node)[dotted.substr(begin, dot - begin)];
    begin = dot + 1;
  }
}

}

// Parses and resolves a config document. Throws parse_error for syntax
// problems and validation_error for constraint violations.
inline loaded_config resolve_config(const json& doc) {
  using detail::check;
  using detail::number_field;
  using detail::required_number;

  check(doc.is_object(), "config root must be an object");
  loaded_config out;
  experiment_config& cfg = out.resolved;

  const json atomic_node =
      doc.contains("atomic") ? doc.at("atomic") : json::object();
  check(atomic_node.is_object(), "'atomic' must be an object");
  atomic_params& a = cfg.atomic;
  a.gamma = number_field(atomic_node, "gamma_rad_per_s", constants::k39_gamma);
  a.gamma13 = number_field(atomic_node, "gamma13", 1.0);
  a.gamma23 = number_field(atomic_node, "gamma23", 1.0);
  a.gamma03 = number_field(atomic_node, "gamma03", 1.0);
  a.gamma_coll = number_field(atomic_node, "gamma_coll", 0.0);
  a.delta_probe = number_field(atomic_node, "delta_probe", 0.0);
  a.delta_control = number_field(atomic_node, "delta_control", 0.0);
  a.delta_zeeman = number_field(atomic_node, "delta_zeeman", 0.0);
  a.number_density =
      number_field(atomic_node, "number_density_per_cm3", 5.0e12);
  a.wavelength =
      number_field(atomic_node, "wavelength_cm", constants::k39_d1_wavelength);
  a.rabi_peak = number_field(atomic_node, "rabi_peak", 2.0);
  a.dipole_ratio = number_field(atomic_node, "dipole_ratio", 1.0);
  a.chi_prefactor_override = number_field(atomic_node, "chi_prefactor", 0.0);

  check(a.gamma > 0.0, "atomic.gamma_rad_per_s must be positive");
  check(a.gamma13 >= 0.0 && a.gamma23 >= 0.0 && a.gamma03 >= 0.0,
        "atomic decay rates must be non-negative");
  check(a.gamma13 + a.gamma23 + a.gamma03 > 0.0,
        "at least one decay channel must be open");
  check(a.gamma_coll >= 0.0, "atomic.gamma_coll must be non-negative");
  check(a.number_density > 0.0,
        "atomic.number_density_per_cm3 must be positive");
  check(a.wavelength > 0.0, "atomic.wavelength_cm must be positive");
  check(a.rabi_peak >= 0.0, "atomic.rabi_peak must be non-negative");
  check(a.dipole_ratio >= 0.0, "atomic.dipole_ratio must be non-negative");

  check(doc.contains("beam"), "missing required section 'beam'");
  const json& beam_node = doc.at("beam");
  check(beam_node.is_object(), "'beam' must be an object");
  beam_spec& b = cfg.beam;
  check(beam_node.contains("family"), "missing required field 'beam.family'");
  check(beam_node.at("family").is_string(), "beam.family must be a string");
  const std::string family = beam_node.at("family").get<std::string>();
  if (family == "gaussian") {
    b.family = beam_family::gaussian;
  } else if (family == "laguerre_gauss") {
    b.family = beam_family::laguerre_gauss;
  } else {
    throw validation_error("beam.family must be 'gaussian' or 'laguerre_gauss'");
  }
  b.theta_c = required_number(beam_node, "theta_c_rad", "beam.");
  b.m = static_cast<int>(number_field(beam_node, "m", 0.0));
  b.amplitude = number_field(beam_node, "amplitude", 1.0);
  if (b.family == beam_family::gaussian) {
    b.sigma = required_number(beam_node, "sigma_cm", "beam.");
    b.w0 = number_field(beam_node, "w0_cm", b.sigma);
  } else {
    b.w0 = required_number(beam_node, "w0_cm", "beam.");
    b.sigma = number_field(beam_node, "sigma_cm", b.w0);
  }
  const double z_r_given = number_field(beam_node, "z_r_cm", 0.0);
  const double z_r_derived =
      constants::pi * b.w0 * b.w0 / a.wavelength;
  b.z_r = z_r_given > 0.0 ? z_r_given : z_r_derived;
  if (z_r_given > 0.0 &&
      std::abs(z_r_given - z_r_derived) > 1e-3 * z_r_derived) {
    std::ostringstream msg;
    msg << "beam.z_r_cm = " << z_r_given
        << " differs from the diffraction value pi*w0^2/lambda = "
        << z_r_derived << "; using the configured value";
    out.warnings.push_back(msg.str());
  }

  check(b.theta_c >= 0.0 && b.theta_c < 0.5 * constants::pi,
        "beam.theta_c_rad must lie in [0, pi/2)");
  if (b.family == beam_family::gaussian) {
    check(b.sigma > 0.0, "beam.sigma_cm must be positive");
    check(b.w0 > 0.0, "beam.w0_cm must be positive");
  } else {
    check(b.w0 > 0.0, "beam.w0_cm must be positive");
    check(b.sigma > 0.0, "beam.sigma_cm must be positive");
  }
  check(b.m >= 0, "beam.m must be non-negative");
  check(b.amplitude >= 0.0, "beam.amplitude must be non-negative");

  cfg.cell_length = required_number(doc, "cell_length_cm", "");
  check(cfg.cell_length > 0.0, "cell_length_cm must be positive");

  const json probe_node =
      doc.contains("probe") ? doc.at("probe") : json::object();
  check(probe_node.is_object(), "'probe' must be an object");
  const double default_x0 = b.family == beam_family::gaussian
                                ? 0.5 * b.sigma
                                : 0.5 * b.w0 * std::sqrt(0.5 * b.m);
  cfg.x0 = number_field(probe_node, "x0_cm", default_x0);

  propagation_options& prop = cfg.propagation;
  const double steps_raw = number_field(doc, "steps", 2000.0);
  check(steps_raw >= 2.0 && steps_raw == std::floor(steps_raw),
        "steps must be an integer >= 2");
  prop.steps = static_cast<std::size_t>(steps_raw);
  prop.h_gradient = number_field(doc, "h_gradient_cm", 0.0);
  if (prop.h_gradient == 0.0) prop.h_gradient = default_gradient_step(b);
  check(prop.h_gradient > 0.0, "h_gradient_cm must be positive");
  prop.transverse_bound = number_field(doc, "transverse_bound_cm", 1.0);
  check(prop.transverse_bound > 0.0, "transverse_bound_cm must be positive");
  check(std::abs(cfg.x0) < prop.transverse_bound,
        "probe.x0_cm must lie inside transverse_bound_cm");

  if (doc.contains("mode"))
    check(doc.at("mode").is_string(), "mode must be a string");
  const std::string mode =
      doc.contains("mode") ? doc.at("mode").get<std::string>()
                           : std::string("self_consistent");
  if (mode == "self_consistent") {
    prop.mode = ray_mode::self_consistent;
  } else if (mode == "fixed_line") {
    prop.mode = ray_mode::fixed_line;
  } else {
    throw validation_error("mode must be 'self_consistent' or 'fixed_line'");
  }

  chimap_grid& cm = cfg.chimap;
  const json chimap_node =
      doc.contains("chimap") ? doc.at("chimap") : json::object();
  check(chimap_node.is_object(), "'chimap' must be an object");
  const double scale =
      b.family == beam_family::gaussian ? b.sigma : 2.0 * b.w0;
  const double nx_raw = number_field(chimap_node, "nx", 81.0);
  const double nz_raw = number_field(chimap_node, "nz", 81.0);
  check(nx_raw >= 2.0 && nx_raw == std::floor(nx_raw),
        "chimap.nx must be an integer >= 2");
  check(nz_raw >= 2.0 && nz_raw == std::floor(nz_raw),
        "chimap.nz must be an integer >= 2");
  cm.nx = static_cast<std::size_t>(nx_raw);
  cm.nz = static_cast<std::size_t>(nz_raw);
  cm.x_min = number_field(chimap_node, "x_min_cm", -2.0 * scale);
  cm.x_max = number_field(
      chimap_node, "x_max_cm",
      cfg.cell_length * std::tan(b.theta_c) + 2.0 * scale);
  check(cm.x_min < cm.x_max, "chimap.x_min_cm must be below chimap.x_max_cm");

  const double threads_raw = number_field(doc, "threads", 0.0);
  check(threads_raw >= 0.0 && threads_raw == std::floor(threads_raw),
        "threads must be a non-negative integer");
  cfg.threads = static_cast<std::size_t>(threads_raw);

  if (doc.contains("sweep")) {
    const json& sweep_node = doc.at("sweep");
    check(sweep_node.is_array(), "'sweep' must be an array");
    for (const json& entry : sweep_node) {
      check(entry.is_object(), "sweep entries must be objects");
      sweep_axis axis;
      if (entry.contains("zip")) {
        check(entry.at("zip").is_array(), "sweep 'zip' must be an array");
        std::size_t count = 0;
        for (const json& leg : entry.at("zip")) {
          check(leg.is_object() && leg.contains("path") &&
                    leg.at("path").is_string() && leg.contains("values") &&
                    leg.at("values").is_array(),
                "each zip leg needs 'path' and a 'values' array");
          axis.paths.push_back(leg.at("path").get<std::string>());
          if (axis.paths.size() == 1) {
            count = leg.at("values").size();
            check(count > 0, "sweep values must be non-empty");
            axis.tuples.resize(count);
          }
          check(leg.at("values").size() == count,
                "zip legs must have equal value counts");
          for (std::size_t k = 0; k < count; ++k)
            axis.tuples[k].push_back(leg.at("values").at(k));
        }
        check(!axis.paths.empty(), "sweep 'zip' must not be empty");
      } else {
        check(entry.contains("path") && entry.at("path").is_string() &&
                  entry.contains("values") && entry.at("values").is_array(),
              "sweep entries need 'path' and a 'values' array");
        axis.paths.push_back(entry.at("path").get<std::string>());
        const json& values = entry.at("values");
        check(!values.empty(), "sweep values must be non-empty");
        for (const json& v : values) axis.tuples.push_back({v});
      }
      for (const std::string& path : axis.paths)
        check(detail::walk_path(doc, path) != nullptr,
              "sweep path '" + path + "' does not name a config field");
      out.sweep.push_back(std::move(axis));
    }
  }

  // Fully resolved echo: defaults and derived values made explicit.
  json echo;
  echo["atomic"] = {{"gamma_rad_per_s", a.gamma},
                    {"gamma13", a.gamma13},
                    {"gamma23", a.gamma23},
                    {"gamma03", a.gamma03},
                    {"gamma_coll", a.gamma_coll},
                    {"delta_probe", a.delta_probe},
                    {"delta_control", a.delta_control},
                    {"delta_zeeman", a.delta_zeeman},
                    {"number_density_per_cm3", a.number_density},
                    {"wavelength_cm", a.wavelength},
                    {"rabi_peak", a.rabi_peak},
                    {"dipole_ratio", a.dipole_ratio},
                    {"chi_prefactor", a.chi_prefactor_override}};
  echo["beam"] = {{"family", family},
                  {"m", b.m},
                  {"theta_c_rad", b.theta_c},
                  {"w0_cm", b.w0},
                  {"sigma_cm", b.sigma},
                  {"z_r_cm", b.z_r},
                  {"amplitude", b.amplitude}};
  echo["probe"] = {{"x0_cm", cfg.x0}};
  echo["cell_length_cm"] = cfg.cell_length;
  echo["steps"] = prop.steps;
  echo["h_gradient_cm"] = prop.h_gradient;
  echo["transverse_bound_cm"] = prop.transverse_bound;
  echo["mode"] = mode;
  echo["chimap"] = {{"nx", cm.nx},
                    {"nz", cm.nz},
                    {"x_min_cm", cm.x_min},
                    {"x_max_cm", cm.x_max}};
  echo["threads"] = cfg.threads;
  out.resolved_doc = std::move(echo);
  return out;
}

inline loaded_config parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw parse_error(std::string("config is not valid JSON: ") + e.what());
  }
  // A metadata sidecar embeds the config it was produced from; accept it
  // directly so outputs can be regenerated from their sidecars.
  if (doc.is_object() && doc.contains("config")) {
    const json inner = doc.at("config");
    if (inner.is_object() && inner.contains("beam")) return resolve_config(inner);
  }
  return resolve_config(doc);
}

inline loaded_config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

struct sweep_point {
  std::string label;  // filename-safe suffix; empty when there is no sweep
  loaded_config config;
};

namespace detail {

inline std::string value_label(const json& v) {
  std::string out;
  if (v.is_string()) {
    out = v.get<std::string>();
  } else if (v.is_number()) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", v.get<double>());
    out = buf;
  } else {
    out = v.dump();
  }
  for (char& c : out)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '.' &&
        c != '+')
      c = '_';
  return out;
}

inline std::string path_label(const std::string& path) {
  std::string out = path;
  for (char& c : out)
    if (c == '.') c = '_';
  return out;
}

}

// Expands the sweep axes (cartesian product across axes, zipped within an
// axis) into fully re-resolved configurations.
inline std::vector<sweep_point> expand_sweep(const json& raw_doc,
                                             const loaded_config& base) {
  std::vector<sweep_point> points;
  if (base.sweep.empty()) {
    points.push_back({"", base});
    return points;
  }

  std::vector<std::size_t> index(base.sweep.size(), 0);
  bool done = false;
  while (!done) {
    json doc = raw_doc;
    doc.erase("sweep");
    std::string label;
    for (std::size_t ax = 0; ax < base.sweep.size(); ++ax) {
      const sweep_axis& axis = base.sweep[ax];
      const auto& tuple = axis.tuples[index[ax]];
      for (std::size_t leg = 0; leg < axis.paths.size(); ++leg) {
        detail::assign_path(doc, axis.paths[leg], tuple[leg]);
        if (!label.empty()) label += "__";
        label += detail::path_label(axis.paths[leg]) + "=" +
                 detail::value_label(tuple[leg]);
      }
    }
    points.push_back({label, resolve_config(doc)});

    done = true;
    for (std::size_t ax = base.sweep.size(); ax-- > 0;) {
      if (++index[ax] < base.sweep[ax].tuples.size()) {
        done = false;
        break;
      }
      index[ax] = 0;
    }
  }
  return points;
}

}
