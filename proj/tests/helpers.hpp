#pragma once

// Shared helpers for the physics test suites: slot-to-matrix-element mapping,
// randomized parameter draws, and a phase-cycled linear-response probe of the
// time-domain integrator.

#include <array>
#include <complex>
#include <cstddef>
#include <random>

#include <tripod/master_equation.hpp>
#include <tripod/params.hpp>
#include <tripod/steadystate.hpp>

namespace testutil {

using tripod::complex;

// Matrix indices (basis order |1>,|2>,|0>,|3>) for each 15-vector slot.
inline constexpr std::array<std::array<std::size_t, 2>, tripod::n_slots>
    slot_elements{{
        {0, 0},  // rho11
        {1, 1},  // rho22
        {2, 2},  // rho00
        {3, 0},  // rho31
        {0, 3},  // rho13
        {3, 1},  // rho32
        {1, 3},  // rho23
        {3, 2},  // rho30
        {2, 3},  // rho03
        {2, 0},  // rho01
        {0, 2},  // rho10
        {1, 2},  // rho20
        {2, 1},  // rho02
        {1, 0},  // rho21
        {0, 1},  // rho12
    }};

inline tripod::state_vec slots_from_matrix(const tripod::density_matrix& rho) {
  tripod::state_vec v{};
  for (std::size_t k = 0; k < tripod::n_slots; ++k)
    v[k] = rho(slot_elements[k][0], slot_elements[k][1]);
  return v;
}

struct random_set {
  tripod::atomic_params params;
  tripod::rabi_triple rabi;
};

// Healthy randomized configuration: drives well clear of zero, Zeeman
// splitting bounded away from the degenerate point so the zeroth-order
// steady state is unique without collisional help.
inline random_set draw_random_set(std::mt19937& rng) {
  std::uniform_real_distribution<double> mag(0.1, 5.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * 3.141592653589793);
  std::uniform_real_distribution<double> detuning(-2.0, 2.0);
  std::uniform_real_distribution<double> zeeman_mag(0.1, 2.0);
  std::uniform_int_distribution<int> coin(0, 1);

  random_set s;
  s.params.delta_control = detuning(rng);
  s.params.delta_probe = s.params.delta_control;
  s.params.delta_zeeman = (coin(rng) ? 1.0 : -1.0) * zeeman_mag(rng);
  s.rabi.g1 = std::polar(mag(rng), phase(rng));
  s.rabi.g2 = std::polar(mag(rng), phase(rng));
  s.rabi.g0 = std::polar(mag(rng), phase(rng));
  return s;
}

// Probe-linear part of the relaxed density matrix, per unit probe envelope,
// extracted by cycling the probe phase through the fourth roots of unity.
// The projection (1/4) sum conj(u) rho(u*g) cancels the probe-free state,
// the conjugate-analytic family, and every even order in g.
inline tripod::state_vec linear_response_probe(const tripod::atomic_params& p,
                                               const tripod::rabi_triple& g,
                                               tripod::probe_branch branch,
                                               double probe_envelope) {
  const double coupling = probe_envelope / std::sqrt(2.0);
  tripod::state_vec acc{};
  for (int q = 0; q < 4; ++q) {
    const complex u = std::polar(1.0, 0.5 * 3.141592653589793 * q);
    tripod::probe_pair probe;
    if (branch == tripod::probe_branch::sigma_plus)
      probe.g1 = u * coupling;
    else
      probe.g2 = u * coupling;
    const auto relaxed = tripod::relax_to_steady_state(p, g, probe);
    const auto v = slots_from_matrix(relaxed.rho);
    for (std::size_t k = 0; k < tripod::n_slots; ++k)
      acc[k] += std::conj(u) * v[k];
  }
  for (auto& e : acc) e *= 0.25 / probe_envelope;
  return acc;
}

}  // namespace testutil
