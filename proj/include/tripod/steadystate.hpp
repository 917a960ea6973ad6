#pragma once

// Steady state of the tripod master equation in the rotating frame, reduced
// to 15 variables by trace elimination (rho33 = 1 - rho11 - rho22 - rho00),
// plus the first-order response to each circular probe component at beat
// frequency omega_pc.
//
// Slot layout of the 15-vector (populations first, then coherences grouped
// with their conjugates):
//   0 rho11   1 rho22   2 rho00
//   3 rho31   4 rho13   5 rho32   6 rho23   7 rho30   8 rho03
//   9 rho01  10 rho10  11 rho20  12 rho02  13 rho21  14 rho12
//
// Sign conventions: with level energies (+dz, -dz, 0, -d) for (|1>,|2>,|0>,|3>)
// the coherence decay constants are
//   p31 = i(d+dz)-G31, p32 = i(d-dz)-G32, p30 = i d-G30,
//   p01 = i dz-G01,    p20 = i dz-G20,    p21 = 2i dz-G21,
// and the drive shorthands th_k = -i g_k, ph0 = -i g0. The probe enters the
// first-order sources with weight 1/sqrt(2) per circular component.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

#include "tripod/linalg.hpp"
#include "tripod/params.hpp"

namespace tripod {

inline constexpr std::size_t n_slots = 15;

enum slot : std::size_t {
  s_rho11 = 0,
  s_rho22 = 1,
  s_rho00 = 2,
  s_rho31 = 3,
  s_rho13 = 4,
  s_rho32 = 5,
  s_rho23 = 6,
  s_rho30 = 7,
  s_rho03 = 8,
  s_rho01 = 9,
  s_rho10 = 10,
  s_rho20 = 11,
  s_rho02 = 12,
  s_rho21 = 13,
  s_rho12 = 14,
};

using state_vec = vec<n_slots>;

enum class probe_branch { sigma_plus, sigma_minus };

namespace detail {

// Conjugate coherence pairs of the slot layout.
inline constexpr std::array<std::array<std::size_t, 2>, 6> conjugate_pairs{{
    {s_rho31, s_rho13},
    {s_rho32, s_rho23},
    {s_rho30, s_rho03},
    {s_rho01, s_rho10},
    {s_rho20, s_rho02},
    {s_rho21, s_rho12},
}};

}

inline linear_system<n_slots> assemble_zeroth(const atomic_params& p,
                                              const rabi_triple& g) {
  const complex i_unit{0.0, 1.0};
  const complex th1 = -i_unit * g.g1;
  const complex th2 = -i_unit * g.g2;
  const complex ph0 = -i_unit * g.g0;
  const complex th1c = std::conj(th1);
  const complex th2c = std::conj(th2);
  const complex ph0c = std::conj(ph0);

  const dephasing_rates rates(p);
  const double d = p.delta_control;
  const double dz = p.delta_zeeman;
  const complex p31 = i_unit * (d + dz) - rates.upper;
  const complex p32 = i_unit * (d - dz) - rates.upper;
  const complex p30 = i_unit * d - rates.upper;
  const complex p01 = i_unit * dz - rates.ground;
  const complex p20 = i_unit * dz - rates.ground;
  const complex p21 = i_unit * (2.0 * dz) - rates.ground;

  linear_system<n_slots> sys;
  auto& m = sys.matrix;

  m(s_rho11, s_rho11) = -p.gamma13;
  m(s_rho11, s_rho22) = -p.gamma13;
  m(s_rho11, s_rho00) = -p.gamma13;
  m(s_rho11, s_rho31) = th1c;
  m(s_rho11, s_rho13) = th1;

  m(s_rho22, s_rho11) = -p.gamma23;
  m(s_rho22, s_rho22) = -p.gamma23;
  m(s_rho22, s_rho00) = -p.gamma23;
  m(s_rho22, s_rho32) = th2c;
  m(s_rho22, s_rho23) = th2;

  m(s_rho00, s_rho11) = -p.gamma03;
  m(s_rho00, s_rho22) = -p.gamma03;
  m(s_rho00, s_rho00) = -p.gamma03;
  m(s_rho00, s_rho30) = ph0c;
  m(s_rho00, s_rho03) = ph0;

  m(s_rho31, s_rho11) = -2.0 * th1;
  m(s_rho31, s_rho22) = -th1;
  m(s_rho31, s_rho00) = -th1;
  m(s_rho31, s_rho31) = p31;
  m(s_rho31, s_rho01) = -ph0;
  m(s_rho31, s_rho21) = -th2;

  m(s_rho13, s_rho11) = -2.0 * th1c;
  m(s_rho13, s_rho22) = -th1c;
  m(s_rho13, s_rho00) = -th1c;
  m(s_rho13, s_rho13) = std::conj(p31);
  m(s_rho13, s_rho10) = -ph0c;
  m(s_rho13, s_rho12) = -th2c;

  m(s_rho32, s_rho11) = -th2;
  m(s_rho32, s_rho22) = -2.0 * th2;
  m(s_rho32, s_rho00) = -th2;
  m(s_rho32, s_rho32) = p32;
  m(s_rho32, s_rho02) = -ph0;
  m(s_rho32, s_rho12) = -th1;

  m(s_rho23, s_rho11) = -th2c;
  m(s_rho23, s_rho22) = -2.0 * th2c;
  m(s_rho23, s_rho00) = -th2c;
  m(s_rho23, s_rho23) = std::conj(p32);
  m(s_rho23, s_rho20) = -ph0c;
  m(s_rho23, s_rho21) = -th1c;

  m(s_rho30, s_rho11) = -ph0;
  m(s_rho30, s_rho22) = -ph0;
  m(s_rho30, s_rho00) = -2.0 * ph0;
  m(s_rho30, s_rho30) = p30;
  m(s_rho30, s_rho10) = -th1;
  m(s_rho30, s_rho20) = -th2;

  m(s_rho03, s_rho11) = -ph0c;
  m(s_rho03, s_rho22) = -ph0c;
  m(s_rho03, s_rho00) = -2.0 * ph0c;
  m(s_rho03, s_rho03) = std::conj(p30);
  m(s_rho03, s_rho01) = -th1c;
  m(s_rho03, s_rho02) = -th2c;

  m(s_rho01, s_rho31) = ph0c;
  m(s_rho01, s_rho03) = th1;
  m(s_rho01, s_rho01) = p01;

  m(s_rho10, s_rho13) = ph0;
  m(s_rho10, s_rho30) = th1c;
  m(s_rho10, s_rho10) = std::conj(p01);

  m(s_rho20, s_rho23) = ph0;
  m(s_rho20, s_rho30) = th2c;
  m(s_rho20, s_rho20) = p20;

  m(s_rho02, s_rho32) = ph0c;
  m(s_rho02, s_rho03) = th2;
  m(s_rho02, s_rho02) = std::conj(p20);

  m(s_rho21, s_rho31) = th2c;
  m(s_rho21, s_rho23) = th1;
  m(s_rho21, s_rho21) = p21;

  m(s_rho12, s_rho13) = th2;
  m(s_rho12, s_rho32) = th1c;
  m(s_rho12, s_rho12) = std::conj(p21);

  sys.rhs = {-p.gamma13, -p.gamma23, -p.gamma03, -th1, -th1c,
             -th2,       -th2c,      -ph0,       -ph0c};
  return sys;
}

// First-order system at beat frequency omega_pc: same coefficient matrix with
// the diagonal shifted by i*omega_pc, driven by the commutator of one circular
// probe component (weight 1/sqrt(2)) with the zeroth-order state.
inline linear_system<n_slots> assemble_first(const atomic_params& p,
                                             const rabi_triple& g,
                                             const state_vec& zeroth,
                                             probe_branch branch) {
  linear_system<n_slots> sys = assemble_zeroth(p, g);
  const complex shift{0.0, p.omega_pc()};
  for (std::size_t k = 0; k < n_slots; ++k) sys.matrix(k, k) += shift;

  const complex is2{0.0, 1.0 / std::sqrt(2.0)};
  const auto& x = zeroth;
  vec<n_slots> b{};
  if (branch == probe_branch::sigma_plus) {
    b[s_rho11] = is2 * x[s_rho13];
    b[s_rho31] = -is2 * (2.0 * x[s_rho11] + x[s_rho22] + x[s_rho00] - 1.0);
    b[s_rho32] = -is2 * x[s_rho12];
    b[s_rho30] = -is2 * x[s_rho10];
    b[s_rho01] = is2 * x[s_rho03];
    b[s_rho21] = is2 * x[s_rho23];
  } else {
    b[s_rho22] = is2 * x[s_rho23];
    b[s_rho31] = -is2 * x[s_rho21];
    b[s_rho32] = -is2 * (x[s_rho11] + 2.0 * x[s_rho22] + x[s_rho00] - 1.0);
    b[s_rho30] = -is2 * x[s_rho20];
    b[s_rho02] = is2 * x[s_rho03];
    b[s_rho12] = is2 * x[s_rho13];
  }
  sys.rhs = b;
  return sys;
}

struct steady_state_solution {
  state_vec zeroth{};
  state_vec sigma_plus{};   // first-order response to the sigma+ probe
  state_vec sigma_minus{};  // first-order response to the sigma- probe

  // Pre-symmetrization health of the zeroth-order solve.
  double hermiticity_residual = 0.0;
  double imag_population_residual = 0.0;
  double condition_proxy = 0.0;

  double excited_population() const {
    return 1.0 - std::real(zeroth[s_rho11] + zeroth[s_rho22] +
                           zeroth[s_rho00]);
  }
};

struct steady_state_options {
  // Project the zeroth-order solution onto its exact symmetry class (real
  // populations, conjugate-paired coherences). The raw residuals are recorded
  // on the solution either way.
  bool symmetrize = true;
};

inline steady_state_solution solve_steady_state(
    const atomic_params& p, const rabi_triple& g,
    const steady_state_options& opts = {}) {
  steady_state_solution sol;

  linear_system<n_slots> zeroth_sys = assemble_zeroth(p, g);
  const lu_factorization<n_slots> lu(zeroth_sys.matrix);
  sol.zeroth = lu.solve(zeroth_sys.rhs);
  sol.condition_proxy = lu.condition_proxy();

  for (std::size_t k = 0; k < 3; ++k)
    sol.imag_population_residual =
        std::max(sol.imag_population_residual, std::abs(std::imag(sol.zeroth[k])));
  for (const auto& pair : detail::conjugate_pairs)
    sol.hermiticity_residual =
        std::max(sol.hermiticity_residual,
                 std::abs(sol.zeroth[pair[0]] - std::conj(sol.zeroth[pair[1]])));

  if (opts.symmetrize) {
    for (std::size_t k = 0; k < 3; ++k)
      sol.zeroth[k] = std::real(sol.zeroth[k]);
    for (const auto& pair : detail::conjugate_pairs) {
      const complex mean =
          0.5 * (sol.zeroth[pair[0]] + std::conj(sol.zeroth[pair[1]]));
      sol.zeroth[pair[0]] = mean;
      sol.zeroth[pair[1]] = std::conj(mean);
    }
  }

  // The two probe branches share one coefficient matrix; reuse the zeroth
  // factorization when the beat frequency vanishes.
  if (p.omega_pc() == 0.0) {
    sol.sigma_plus =
        lu.solve(assemble_first(p, g, sol.zeroth, probe_branch::sigma_plus).rhs);
    sol.sigma_minus = lu.solve(
        assemble_first(p, g, sol.zeroth, probe_branch::sigma_minus).rhs);
  } else {
    linear_system<n_slots> plus_sys =
        assemble_first(p, g, sol.zeroth, probe_branch::sigma_plus);
    const lu_factorization<n_slots> lu_first(plus_sys.matrix);
    sol.sigma_plus = lu_first.solve(plus_sys.rhs);
    sol.sigma_minus = lu_first.solve(
        assemble_first(p, g, sol.zeroth, probe_branch::sigma_minus).rhs);
  }
  return sol;
}

}
