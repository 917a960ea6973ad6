#pragma once

// Control beam envelopes. The beam propagates along an axis tilted by theta_c
// from the probe axis z, in the x-z plane. Beam-frame coordinates:
//   X = x cos(theta_c) - z sin(theta_c)   (transverse)
//   Z = x sin(theta_c) + z cos(theta_c)   (along the beam)
// The y coordinate is shared by both frames.

#include <cmath>
#include <complex>

#include "tripod/constants.hpp"
#include "tripod/errors.hpp"
#include "tripod/params.hpp"

namespace tripod {

enum class beam_family { gaussian, laguerre_gauss };

struct beam_spec {
  beam_family family = beam_family::gaussian;
  int m = 0;               // azimuthal index, Laguerre-Gauss only
  double theta_c = 0.0;    // tilt of the beam axis from z, rad, [0, pi/2)
  double w0 = 0.012;       // Laguerre-Gauss waist, cm
  double sigma = 0.1414;   // Gaussian width, cm
  double z_r = 0.0;        // Rayleigh range, cm; 0 means pi*w0^2/lambda
  double amplitude = 1.0;  // dimensionless envelope scale

  // z_r when set, otherwise the diffraction value for the given wavelength.
  double rayleigh_range(double wavelength = constants::k39_d1_wavelength) const {
    return z_r > 0.0 ? z_r : constants::pi * w0 * w0 / wavelength;
  }
};

struct beam_coords {
  double transverse;  // X
  double axial;       // Z
};

inline beam_coords tilted_coordinates(double x, double z, double theta_c) {
  const double c = std::cos(theta_c);
  const double s = std::sin(theta_c);
  return {x * c - z * s, x * s + z * c};
}

// Complex envelope at a lab-frame point. The Gaussian family is a plain
// transverse profile exp(-(X^2+y^2)/sigma^2); the Laguerre-Gauss family
// carries the full diffracting mode of waist w0 and charge m:
//   (w0/w) (sqrt(2) r / w)^m exp(-r^2/w^2)
//     * exp(-i k r^2 / (2 R) + i m phi) * exp(-i (m+1) atan(Z/z_r))
// with w(Z) = w0 sqrt(1+(Z/z_r)^2) and 1/R(Z) = Z/(Z^2+z_r^2). The wavenumber
// in the curvature phase is recovered from the Rayleigh range, k = 2 z_r/w0^2.
inline complex envelope(double x, double y, double z, const beam_spec& beam) {
  const beam_coords bc = tilted_coordinates(x, z, beam.theta_c);

  if (beam.family == beam_family::gaussian) {
    const double r2 = bc.transverse * bc.transverse + y * y;
    return beam.amplitude * std::exp(-r2 / (beam.sigma * beam.sigma));
  }

  const double z_r = beam.rayleigh_range();
  const double zz = bc.axial;
  const double w = beam.w0 * std::sqrt(1.0 + (zz / z_r) * (zz / z_r));
  const double r2 = bc.transverse * bc.transverse + y * y;
  const double r = std::sqrt(r2);
  const double phi = std::atan2(y, bc.transverse);
  const double inv_radius = zz / (zz * zz + z_r * z_r);
  const double k = 2.0 * z_r / (beam.w0 * beam.w0);
  const double gouy = (beam.m + 1) * std::atan(zz / z_r);

  const double radial = (beam.w0 / w) *
                        std::pow(std::sqrt(2.0) * r / w, beam.m) *
                        std::exp(-r2 / (w * w));
  const double phase = -0.5 * k * r2 * inv_radius + beam.m * phi - gouy;
  return beam.amplitude * radial * std::polar(1.0, phase);
}

// Full width at half maximum of the Gaussian intensity profile.
inline double fwhm(const beam_spec& beam) {
  if (beam.family != beam_family::gaussian)
    throw wrong_family("fwhm is defined for the gaussian family only");
  return 2.0 * std::sqrt(2.0 * std::log(2.0)) * beam.sigma;
}

}
