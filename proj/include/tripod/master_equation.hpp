#pragma once

// Direct time integration of the tripod master equation on the full 4x4
// density matrix. Deliberately independent of the 15-variable steady-state
// reduction: built from the rotating-frame Hamiltonian and Lindblad
// dissipators, it serves as the dynamical oracle the algebraic solver is
// validated against.
//
// Basis order (|1>, |2>, |0>, |3>) with rotating-frame energies
// (+dz, -dz, 0, -d). The control couples all three ground states to |3>;
// an optional static probe adds (g1, g2) on the circular transitions, valid
// at zero probe-control beat frequency.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

#include "tripod/errors.hpp"
#include "tripod/params.hpp"

namespace tripod {

inline constexpr std::size_t n_levels = 4;

struct density_matrix {
  std::array<complex, n_levels * n_levels> a{};

  complex& operator()(std::size_t i, std::size_t j) { return a[i * 4 + j]; }
  const complex& operator()(std::size_t i, std::size_t j) const {
    return a[i * 4 + j];
  }

  double trace_real() const {
    return std::real(a[0] + a[5] + a[10] + a[15]);
  }
};

// Populations equally split over the three ground states.
inline density_matrix unpolarized_ground_state() {
  density_matrix rho;
  rho(0, 0) = rho(1, 1) = rho(2, 2) = 1.0 / 3.0;
  return rho;
}

struct probe_pair {
  complex g1{};
  complex g2{};
};

inline density_matrix master_equation_rhs(const density_matrix& rho,
                                          const atomic_params& p,
                                          const rabi_triple& g,
                                          const probe_pair& probe = {}) {
  const complex i_unit{0.0, 1.0};

  std::array<complex, n_levels * n_levels> h{};
  auto H = [&h](std::size_t i, std::size_t j) -> complex& {
    return h[i * 4 + j];
  };
  H(0, 0) = p.delta_zeeman;
  H(1, 1) = -p.delta_zeeman;
  H(3, 3) = -p.delta_control;
  H(3, 0) = -(g.g1 + probe.g1);
  H(3, 1) = -(g.g2 + probe.g2);
  H(3, 2) = -g.g0;
  H(0, 3) = std::conj(H(3, 0));
  H(1, 3) = std::conj(H(3, 1));
  H(2, 3) = std::conj(H(3, 2));

  density_matrix dot;
  for (std::size_t i = 0; i < n_levels; ++i)
    for (std::size_t j = 0; j < n_levels; ++j) {
      complex comm{};
      for (std::size_t k = 0; k < n_levels; ++k)
        comm += H(i, k) * rho(k, j) - rho(i, k) * H(k, j);
      dot(i, j) = -i_unit * comm;
    }

  // Spontaneous decay |3> -> |j> at rates gamma_j3 plus collisional
  // dephasing of every coherence.
  const double total_decay = p.gamma13 + p.gamma23 + p.gamma03;
  dot(0, 0) += p.gamma13 * rho(3, 3);
  dot(1, 1) += p.gamma23 * rho(3, 3);
  dot(2, 2) += p.gamma03 * rho(3, 3);
  dot(3, 3) -= total_decay * rho(3, 3);
  for (std::size_t k = 0; k < 3; ++k) {
    dot(3, k) -= 0.5 * total_decay * rho(3, k);
    dot(k, 3) -= 0.5 * total_decay * rho(k, 3);
  }
  for (std::size_t i = 0; i < n_levels; ++i)
    for (std::size_t j = 0; j < n_levels; ++j)
      if (i != j) dot(i, j) -= p.gamma_coll * rho(i, j);

  return dot;
}

inline density_matrix rk4_step(const density_matrix& rho, double dt,
                               const atomic_params& p, const rabi_triple& g,
                               const probe_pair& probe = {}) {
  const density_matrix k1 = master_equation_rhs(rho, p, g, probe);
  density_matrix mid = rho;
  for (std::size_t n = 0; n < 16; ++n) mid.a[n] = rho.a[n] + 0.5 * dt * k1.a[n];
  const density_matrix k2 = master_equation_rhs(mid, p, g, probe);
  for (std::size_t n = 0; n < 16; ++n) mid.a[n] = rho.a[n] + 0.5 * dt * k2.a[n];
  const density_matrix k3 = master_equation_rhs(mid, p, g, probe);
  for (std::size_t n = 0; n < 16; ++n) mid.a[n] = rho.a[n] + dt * k3.a[n];
  const density_matrix k4 = master_equation_rhs(mid, p, g, probe);

  density_matrix next = rho;
  for (std::size_t n = 0; n < 16; ++n)
    next.a[n] +=
        dt / 6.0 * (k1.a[n] + 2.0 * k2.a[n] + 2.0 * k3.a[n] + k4.a[n]);
  return next;
}

// Default step: resolve the fastest scale among the unit decay rate, the
// drives, and the detunings.
inline double default_time_step(const atomic_params& p, const rabi_triple& g,
                                const probe_pair& probe = {}) {
  const double scale = std::max(
      {1.0, g.max_magnitude(), std::abs(probe.g1), std::abs(probe.g2),
       std::abs(p.delta_control), std::abs(p.delta_probe),
       std::abs(p.delta_zeeman)});
  return 1e-3 / scale;
}

inline double max_derivative_norm(const density_matrix& dot) {
  double m = 0.0;
  for (const complex& v : dot.a) m = std::max(m, std::abs(v));
  return m;
}

struct evolve_options {
  double dt = 0.0;                       // 0 = default_time_step
  double convergence_threshold = 1e-12;  // on max |rho_dot| entry
  bool require_converged = false;        // throw non_convergence at t_end
  bool stop_when_converged = false;      // return early once threshold is met
};

struct evolve_result {
  density_matrix rho;
  double t = 0.0;
  bool converged = false;
};

inline evolve_result time_evolve(const atomic_params& p, const rabi_triple& g,
                                 const probe_pair& probe, double t_end,
                                 const evolve_options& opts = {}) {
  const double dt = opts.dt > 0.0 ? opts.dt : default_time_step(p, g, probe);
  evolve_result res{unpolarized_ground_state(), 0.0, false};

  const auto residual = [&] {
    return max_derivative_norm(master_equation_rhs(res.rho, p, g, probe));
  };

  std::size_t steps_since_check = 0;
  while (res.t < t_end) {
    const double step = std::min(dt, t_end - res.t);
    res.rho = rk4_step(res.rho, step, p, g, probe);
    res.t += step;
    if (opts.stop_when_converged && ++steps_since_check >= 64) {
      steps_since_check = 0;
      if (residual() < opts.convergence_threshold) {
        res.converged = true;
        return res;
      }
    }
  }
  res.converged = residual() < opts.convergence_threshold;
  if (opts.require_converged && !res.converged)
    throw non_convergence("relaxation residual above threshold at t_end");
  return res;
}

// Runs until the derivative norm drops below threshold, up to t_max. The
// workhorse behind the fixed-point comparisons: it strides 50x faster than
// the default step, which is legitimate here because any stable fixed step
// has the exact steady state as its fixed point and proximity is certified
// by the true derivative norm, not by path accuracy.
inline evolve_result relax_to_steady_state(const atomic_params& p,
                                           const rabi_triple& g,
                                           const probe_pair& probe = {},
                                           double t_max = 2e5,
                                           double threshold = 1e-12) {
  evolve_options opts;
  opts.dt = 50.0 * default_time_step(p, g, probe);
  opts.convergence_threshold = threshold;
  opts.stop_when_converged = true;
  opts.require_converged = true;
  return time_evolve(p, g, probe, t_max, opts);
}

}
