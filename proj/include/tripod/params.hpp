#pragma once

// Medium parameters for a cold four-level tripod vapor: three Zeeman ground
// states |1>, |0>, |2> coupled to one excited state |3> by a strong control
// beam and a weak bichromatic probe.
//
// Unit conventions used throughout the library:
//   - every rate, detuning, and Rabi frequency is stored in units of gamma
//     (the per-channel decay rate), so gamma itself never appears in the
//     dynamics; the rad/s value is kept only for unit conversions,
//   - lengths are cm, angles rad.

#include <cmath>
#include <complex>

#include "tripod/constants.hpp"

namespace tripod {

using complex = std::complex<double>;

struct atomic_params {
  double gamma = constants::k39_gamma;  // rad/s, the internal frequency unit

  // Population decay rates of |3> into each ground state, in units of gamma.
  double gamma13 = 1.0;
  double gamma23 = 1.0;
  double gamma03 = 1.0;

  // Extra collisional dephasing applied to every coherence, units of gamma.
  double gamma_coll = 0.0;

  double delta_probe = 0.0;    // probe detuning, gamma units
  double delta_control = 0.0;  // control detuning, gamma units
  double delta_zeeman = 0.0;   // linear Zeeman shift of |1> (+) and |2> (-), gamma units

  double number_density = 5.0e12;                       // atoms per cm^3
  double wavelength = constants::k39_d1_wavelength;     // cm
  double rabi_peak = 2.0;                               // peak control Rabi frequency, gamma units
  double dipole_ratio = 1.0;                            // |d30| / |d|

  // Explicit susceptibility prefactor; 0 means derive it from the density
  // and wavelength (see chi_prefactor()).
  double chi_prefactor_override = 0.0;

  // Probe-control beat frequency. The first-order expansion is carried out
  // at this offset, so it is defined rather than stored.
  double omega_pc() const { return delta_probe - delta_control; }

  double probe_wavenumber() const { return 2.0 * constants::pi / wavelength; }  // 1/cm

  // 3*N*c^3 / (2*omega_p^3) = 3*N*(lambda/2pi)^3 / 2, dimensionless once the
  // coherences are expressed in gamma units.
  double chi_prefactor() const {
    if (chi_prefactor_override != 0.0) return chi_prefactor_override;
    const double reduced = wavelength / (2.0 * constants::pi);
    return 1.5 * number_density * reduced * reduced * reduced;
  }
};

// Coherence dephasing rates Gamma_ij = (1/2) sum_k (gamma_ki + gamma_kj) + gamma_coll.
// Only |3> decays, so ground-ground pairs keep just the collisional part.
struct dephasing_rates {
  double upper;   // Gamma_31 = Gamma_32 = Gamma_30
  double ground;  // Gamma_01 = Gamma_20 = Gamma_21

  explicit dephasing_rates(const atomic_params& p)
      : upper(0.5 * (p.gamma13 + p.gamma23 + p.gamma03) + p.gamma_coll),
        ground(p.gamma_coll) {}
};

// The three control Rabi couplings seen by the tripod transitions.
struct rabi_triple {
  complex g1;  // |1> - |3|, sigma+ projection of the control
  complex g2;  // |2> - |3>, sigma- projection
  complex g0;  // |0> - |3>, pi projection

  double max_magnitude() const {
    return std::max({std::abs(g1), std::abs(g2), std::abs(g0)});
  }
};

// Projection of one control beam, incident at angle theta_c in the x-z plane,
// onto the three tripod transitions. The circular components share the
// transverse field and split evenly; the pi component rides the longitudinal
// projection.
inline rabi_triple rabi_from_envelope(complex envelope, double theta_c,
                                      const atomic_params& p) {
  const complex transverse =
      p.rabi_peak * envelope * std::cos(theta_c) / std::sqrt(2.0);
  const complex longitudinal =
      p.rabi_peak * p.dipole_ratio * envelope * std::sin(theta_c);
  return {transverse, transverse, longitudinal};
}

// Linear Zeeman splitting mu_B * B * m * g_F / hbar, returned in units of the
// given gamma (angular convention throughout).
inline double zeeman_splitting(double field_gauss, double g_f, int m,
                               double gamma = constants::k39_gamma) {
  return constants::bohr_magneton * field_gauss * static_cast<double>(m) * g_f /
         (constants::hbar * gamma);
}

}
