#include <cmath>
#include <string>

#include "catch_amalgamated.hpp"
#include "tripod/tripod.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using tripod::json;

namespace {

json minimal_doc() {
  return json{{"beam",
               {{"family", "gaussian"},
                {"theta_c_rad", 0.5},
                {"sigma_cm", 0.1}}},
              {"cell_length_cm", 1.0}};
}

std::string preset_path(const std::string& name) {
  return std::string(TRIPODSIM_PRESET_DIR) + "/" + name + ".json";
}

}  // namespace

TEST_CASE("a minimal document resolves with the documented defaults",
          "[config]") {
  const auto loaded = tripod::resolve_config(minimal_doc());
  const tripod::experiment_config& cfg = loaded.resolved;

  CHECK(cfg.atomic.gamma == tripod::constants::k39_gamma);
  CHECK(cfg.atomic.gamma13 == 1.0);
  CHECK(cfg.atomic.gamma23 == 1.0);
  CHECK(cfg.atomic.gamma03 == 1.0);
  CHECK(cfg.atomic.gamma_coll == 0.0);
  CHECK(cfg.atomic.delta_probe == 0.0);
  CHECK(cfg.atomic.delta_control == 0.0);
  CHECK(cfg.atomic.delta_zeeman == 0.0);
  CHECK(cfg.atomic.number_density == 5.0e12);
  CHECK(cfg.atomic.wavelength == tripod::constants::k39_d1_wavelength);
  CHECK(cfg.atomic.rabi_peak == 2.0);
  CHECK(cfg.atomic.dipole_ratio == 1.0);
  CHECK(cfg.atomic.chi_prefactor_override == 0.0);

  CHECK(cfg.beam.family == tripod::beam_family::gaussian);
  CHECK(cfg.beam.theta_c == 0.5);
  CHECK(cfg.beam.sigma == 0.1);
  CHECK(cfg.cell_length == 1.0);
  CHECK_THAT(cfg.x0, WithinRel(0.05, 1e-15));

  CHECK(cfg.propagation.steps == 2000);
  CHECK_THAT(cfg.propagation.h_gradient, WithinRel(0.1 / 200.0, 1e-15));
  CHECK(cfg.propagation.transverse_bound == 1.0);
  CHECK(cfg.propagation.mode == tripod::ray_mode::self_consistent);
  CHECK(cfg.threads == 0);

  CHECK(cfg.chimap.nx == 81);
  CHECK(cfg.chimap.nz == 81);
  CHECK_THAT(cfg.chimap.x_min, WithinRel(-0.2, 1e-15));
  CHECK_THAT(cfg.chimap.x_max,
             WithinRel(1.0 * std::tan(0.5) + 0.2, 1e-15));
  CHECK(loaded.sweep.empty());
  CHECK(loaded.warnings.empty());
}

TEST_CASE("ring beams default the probe line onto the inner slope",
          "[config]") {
  json doc = minimal_doc();
  doc["beam"] = {{"family", "laguerre_gauss"},
                 {"m", 3},
                 {"theta_c_rad", 0.5},
                 {"w0_cm", 0.012}};
  const auto loaded = tripod::resolve_config(doc);
  CHECK_THAT(loaded.resolved.x0,
             WithinRel(0.5 * 0.012 * std::sqrt(1.5), 1e-12));
  CHECK_THAT(loaded.resolved.propagation.h_gradient,
             WithinRel(0.012 / 200.0, 1e-15));
}

TEST_CASE("the Rayleigh range defaults to the diffraction value", "[config]") {
  json doc = minimal_doc();
  doc["beam"] = {{"family", "laguerre_gauss"},
                 {"m", 3},
                 {"theta_c_rad", 0.3},
                 {"w0_cm", 0.012}};
  const auto loaded = tripod::resolve_config(doc);
  const double derived = tripod::constants::pi * 0.012 * 0.012 /
                         tripod::constants::k39_d1_wavelength;
  CHECK_THAT(loaded.resolved.beam.z_r, WithinRel(derived, 1e-12));
  CHECK(loaded.warnings.empty());
}

TEST_CASE("a configured Rayleigh range that contradicts diffraction warns",
          "[config]") {
  json doc = minimal_doc();
  doc["beam"] = {{"family", "laguerre_gauss"},
                 {"m", 3},
                 {"theta_c_rad", 0.3},
                 {"w0_cm", 0.012},
                 {"z_r_cm", 5.7}};
  const auto loaded = tripod::resolve_config(doc);
  CHECK(loaded.resolved.beam.z_r == 5.7);
  REQUIRE(loaded.warnings.size() == 1);
  CHECK(loaded.warnings[0].find("5.7") != std::string::npos);
  CHECK(loaded.warnings[0].find("using the configured value") !=
        std::string::npos);
}

TEST_CASE("malformed text and missing files raise parse errors", "[config]") {
  CHECK_THROWS_AS(tripod::parse_config_text("{nope"), tripod::parse_error);
  CHECK_THROWS_AS(tripod::parse_config_text(""), tripod::parse_error);
  CHECK_THROWS_AS(tripod::load_config("/nonexistent/config.json"),
                  tripod::parse_error);
}

TEST_CASE("constraint violations raise validation errors naming the field",
          "[config]") {
  const auto expect_rejected = [](json doc, const std::string& needle) {
    try {
      tripod::resolve_config(doc);
      FAIL("expected validation_error for " + needle);
    } catch (const tripod::validation_error& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };

  json doc = minimal_doc();
  doc.erase("beam");
  expect_rejected(doc, "beam");

  doc = minimal_doc();
  doc["beam"].erase("theta_c_rad");
  expect_rejected(doc, "theta_c_rad");

  doc = minimal_doc();
  doc["beam"]["family"] = "bessel";
  expect_rejected(doc, "family");

  doc = minimal_doc();
  doc["beam"]["family"] = 7;
  expect_rejected(doc, "family");

  doc = minimal_doc();
  doc["beam"]["sigma_cm"] = -0.1;
  expect_rejected(doc, "sigma_cm");

  doc = minimal_doc();
  doc["beam"]["theta_c_rad"] = 1.6;
  expect_rejected(doc, "theta_c_rad");

  doc = minimal_doc();
  doc.erase("cell_length_cm");
  expect_rejected(doc, "cell_length_cm");

  doc = minimal_doc();
  doc["cell_length_cm"] = 0.0;
  expect_rejected(doc, "cell_length_cm");

  doc = minimal_doc();
  doc["steps"] = 1;
  expect_rejected(doc, "steps");

  doc = minimal_doc();
  doc["steps"] = 10.5;
  expect_rejected(doc, "steps");

  doc = minimal_doc();
  doc["steps"] = "many";
  expect_rejected(doc, "steps");

  doc = minimal_doc();
  doc["probe"] = {{"x0_cm", 2.0}};
  expect_rejected(doc, "x0_cm");

  doc = minimal_doc();
  doc["mode"] = "ballistic";
  expect_rejected(doc, "mode");

  doc = minimal_doc();
  doc["mode"] = 3;
  expect_rejected(doc, "mode");

  doc = minimal_doc();
  doc["atomic"] = {{"gamma_coll", -0.1}};
  expect_rejected(doc, "gamma_coll");

  doc = minimal_doc();
  doc["atomic"] = {{"number_density_per_cm3", 0.0}};
  expect_rejected(doc, "number_density");

  doc = minimal_doc();
  doc["atomic"] = {{"gamma13", 0.0}, {"gamma23", 0.0}, {"gamma03", 0.0}};
  expect_rejected(doc, "decay");

  doc = minimal_doc();
  doc["threads"] = -1;
  expect_rejected(doc, "threads");

  doc = minimal_doc();
  doc["chimap"] = {{"nx", 1}};
  expect_rejected(doc, "nx");

  doc = minimal_doc();
  doc["chimap"] = {{"x_min_cm", 1.0}, {"x_max_cm", -1.0}};
  expect_rejected(doc, "x_min_cm");
}

TEST_CASE("sweep declarations are validated", "[config]") {
  json doc = minimal_doc();
  doc["sweep"] = json::array({{{"path", "beam.missing_cm"},
                               {"values", json::array({1.0})}}});
  CHECK_THROWS_AS(tripod::resolve_config(doc), tripod::validation_error);

  doc = minimal_doc();
  doc["sweep"] = json::array({{{"path", "beam.theta_c_rad"},
                               {"values", json::array()}}});
  CHECK_THROWS_AS(tripod::resolve_config(doc), tripod::validation_error);

  doc = minimal_doc();
  doc["sweep"] = json::array(
      {{{"zip", json::array(
             {{{"path", "beam.theta_c_rad"},
               {"values", json::array({0.1, 0.2})}},
              {{"path", "cell_length_cm"},
               {"values", json::array({1.0})}}})}}});
  CHECK_THROWS_AS(tripod::resolve_config(doc), tripod::validation_error);
}

TEST_CASE("the resolved echo reproduces itself when fed back", "[config]") {
  json doc = minimal_doc();
  doc["atomic"] = {{"delta_zeeman", 0.01}, {"rabi_peak", 1.5}};
  doc["steps"] = 400;
  const auto first = tripod::resolve_config(doc);
  const auto second = tripod::resolve_config(first.resolved_doc);
  CHECK(second.resolved_doc == first.resolved_doc);

  json sidecar = {{"config", first.resolved_doc},
                  {"software", "tripodsim x.y"}};
  const auto from_sidecar = tripod::parse_config_text(sidecar.dump());
  CHECK(from_sidecar.resolved_doc == first.resolved_doc);
}

TEST_CASE("a single sweep axis expands in declaration order", "[config]") {
  json doc = minimal_doc();
  doc["sweep"] = json::array({{{"path", "beam.theta_c_rad"},
                               {"values", json::array({0.1, 0.2, 0.4})}}});
  const auto base = tripod::resolve_config(doc);
  const auto points = tripod::expand_sweep(doc, base);

  REQUIRE(points.size() == 3);
  CHECK(points[0].config.resolved.beam.theta_c == 0.1);
  CHECK(points[1].config.resolved.beam.theta_c == 0.2);
  CHECK(points[2].config.resolved.beam.theta_c == 0.4);
  for (const auto& pt : points) {
    CHECK(pt.label.find("beam_theta_c_rad=") != std::string::npos);
    CHECK(pt.config.sweep.empty());
  }
  CHECK(points[0].label != points[1].label);
}

TEST_CASE("zipped paths advance together", "[config]") {
  json doc = minimal_doc();
  doc["probe"] = {{"x0_cm", 0.05}};
  doc["sweep"] = json::array(
      {{{"zip", json::array(
             {{{"path", "beam.family"},
               {"values", json::array({"gaussian", "laguerre_gauss"})}},
              {{"path", "probe.x0_cm"},
               {"values", json::array({0.07, 0.006})}},
              {{"path", "cell_length_cm"},
               {"values", json::array({1.2, 0.3})}}})}}});
  doc["beam"]["w0_cm"] = 0.012;
  doc["beam"]["m"] = 3;
  const auto base = tripod::resolve_config(doc);
  const auto points = tripod::expand_sweep(doc, base);

  REQUIRE(points.size() == 2);
  CHECK(points[0].config.resolved.beam.family ==
        tripod::beam_family::gaussian);
  CHECK(points[0].config.resolved.x0 == 0.07);
  CHECK(points[0].config.resolved.cell_length == 1.2);
  CHECK(points[1].config.resolved.beam.family ==
        tripod::beam_family::laguerre_gauss);
  CHECK(points[1].config.resolved.x0 == 0.006);
  CHECK(points[1].config.resolved.cell_length == 0.3);
  CHECK(points[1].label.find("beam_family=laguerre_gauss") !=
        std::string::npos);
  CHECK(points[1].label.find("cell_length_cm=0.3") != std::string::npos);
}

TEST_CASE("independent axes expand as a cartesian product", "[config]") {
  json doc = minimal_doc();
  doc["sweep"] = json::array(
      {{{"path", "beam.theta_c_rad"}, {"values", json::array({0.1, 0.2})}},
       {{"path", "cell_length_cm"},
        {"values", json::array({1.0, 2.0, 3.0})}}});
  const auto base = tripod::resolve_config(doc);
  const auto points = tripod::expand_sweep(doc, base);

  REQUIRE(points.size() == 6);
  CHECK(points[0].config.resolved.beam.theta_c == 0.1);
  CHECK(points[0].config.resolved.cell_length == 1.0);
  CHECK(points[1].config.resolved.cell_length == 2.0);
  CHECK(points[2].config.resolved.cell_length == 3.0);
  CHECK(points[3].config.resolved.beam.theta_c == 0.2);
  CHECK(points[3].config.resolved.cell_length == 1.0);
  CHECK(points[5].config.resolved.beam.theta_c == 0.2);
  CHECK(points[5].config.resolved.cell_length == 3.0);
}

TEST_CASE("the tilted-gaussian preset resolves to its published values",
          "[config]") {
  const auto loaded = tripod::load_config(preset_path("fig2"));
  const tripod::experiment_config& cfg = loaded.resolved;

  CHECK(cfg.beam.family == tripod::beam_family::gaussian);
  CHECK_THAT(cfg.beam.sigma, WithinRel(std::sqrt(2.0) * 0.1, 1e-12));
  CHECK_THAT(cfg.atomic.delta_zeeman, WithinRel(0.01, 1e-15));
  CHECK(cfg.atomic.number_density == 5.0e12);
  CHECK_THAT(cfg.atomic.wavelength, WithinRel(7.699e-5, 1e-15));
  CHECK(cfg.atomic.gamma_coll == 0.0);
  CHECK(cfg.atomic.delta_probe == 0.0);
  CHECK(cfg.atomic.delta_control == 0.0);
  CHECK(cfg.atomic.gamma13 == 1.0);
  CHECK(cfg.atomic.gamma23 == 1.0);
  CHECK(cfg.atomic.gamma03 == 1.0);
  CHECK(cfg.propagation.steps == 2000);

  REQUIRE(loaded.sweep.size() == 1);
  REQUIRE(loaded.sweep[0].tuples.size() == 4);
  const double pi = tripod::constants::pi;
  CHECK_THAT(loaded.sweep[0].tuples[0][0].get<double>(),
             WithinRel(pi / 10.0, 1e-12));
  CHECK_THAT(loaded.sweep[0].tuples[1][0].get<double>(),
             WithinRel(pi / 6.0, 1e-12));
  CHECK_THAT(loaded.sweep[0].tuples[2][0].get<double>(),
             WithinRel(pi / 4.0, 1e-12));
  CHECK_THAT(loaded.sweep[0].tuples[3][0].get<double>(),
             WithinRel(pi / 3.0, 1e-12));
}

TEST_CASE("the ring-beam preset pins the published Rayleigh range",
          "[config]") {
  const auto loaded = tripod::load_config(preset_path("fig3"));
  const tripod::experiment_config& cfg = loaded.resolved;

  CHECK(cfg.beam.family == tripod::beam_family::laguerre_gauss);
  CHECK(cfg.beam.m == 3);
  CHECK_THAT(cfg.beam.w0, WithinRel(0.012, 1e-15));
  CHECK(cfg.beam.z_r == 5.7);
  REQUIRE_FALSE(loaded.warnings.empty());
  CHECK(loaded.warnings[0].find("5.7") != std::string::npos);
  REQUIRE(loaded.sweep.size() == 1);
  CHECK(loaded.sweep[0].tuples.size() == 4);
}

TEST_CASE("the lens preset zips the two beam families", "[config]") {
  const auto loaded = tripod::load_config(preset_path("fig4"));
  REQUIRE(loaded.sweep.size() == 1);
  const tripod::sweep_axis& axis = loaded.sweep[0];
  REQUIRE(axis.paths.size() == 3);
  CHECK(axis.paths[0] == "beam.family");
  REQUIRE(axis.tuples.size() == 2);
  CHECK(axis.tuples[0][0].get<std::string>() == "gaussian");
  CHECK(axis.tuples[1][0].get<std::string>() == "laguerre_gauss");
  CHECK_THAT(loaded.resolved.beam.theta_c,
             WithinRel(tripod::constants::pi / 6.0, 1e-12));
}
