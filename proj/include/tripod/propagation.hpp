#pragma once

// Probe propagation through the transversely structured vapor: accumulated
// deflection angles from the transverse index gradient, attenuation from the
// imaginary susceptibility, paraxial ray pairs, and their crossings.
//
// The transverse profile is confined to the y = 0 plane; the y branch of the
// gradient exists for symmetry and returns zero there. Algorithms are
// templated on an index field so synthetic media with known solutions can
// drive the convergence and correctness tests; the physical field wraps a
// memoizing response_context.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "tripod/errors.hpp"
#include "tripod/response.hpp"

namespace tripod {

enum class polarization { plus, minus };

enum class ray_mode { self_consistent, fixed_line };

// Index field over the y=0 plane backed by the driven-vapor response.
class vapor_index_field {
 public:
  vapor_index_field(const beam_spec& beam, const atomic_params& p)
      : ctx_(beam, p) {}

  double operator()(double x, double z, polarization pol) {
    const susceptibility_sample s = ctx_.at(x, 0.0, z);
    return pol == polarization::plus ? s.n_plus : s.n_minus;
  }

  susceptibility_sample sample(double x, double z) { return ctx_.at(x, 0.0, z); }

  response_context& context() { return ctx_; }

 private:
  response_context ctx_;
};

// Central-difference transverse gradient of the refractive index.
template <class Field>
double index_gradient(Field&& n, double x, double z, polarization pol,
                      double h) {
  return (n(x + h, z, pol) - n(x - h, z, pol)) / (2.0 * h);
}

// y-gradient under the y = 0 restriction.
template <class Field>
double index_gradient_y(Field&&, double, double, polarization, double) {
  return 0.0;
}

struct deflection_profile {
  std::vector<double> z;            // cm, steps+1 samples from 0 to length
  std::vector<double> theta_plus;   // rad
  std::vector<double> theta_minus;  // rad
  std::vector<double> phi;          // theta_plus - theta_minus
  std::vector<double> t_plus;       // transmitted intensity fraction
  std::vector<double> t_minus;
  bool gain_flagged = false;  // some transmission sample exceeded 1 + 1e-6
};

struct propagation_options {
  std::size_t steps = 2000;
  double h_gradient = 0.0;     // 0 = min(sigma, w0)/200 for the beam family
  double transverse_bound = 1.0;  // cm, ray escape limit
  ray_mode mode = ray_mode::self_consistent;
};

inline double default_gradient_step(const beam_spec& beam) {
  const double scale =
      beam.family == beam_family::gaussian ? beam.sigma : beam.w0;
  return scale / 200.0;
}

// Deflection angles and transmissions accumulated along the fixed line
// x = x0: theta(z) is the cumulative trapezoid of the index gradient, and
// t(z) = exp(-k_p * cumulative trapezoid of Im chi).
template <class SampleField, class GradField>
deflection_profile accumulate_deflection(SampleField&& sample_at,
                                         GradField&& grad_at, double x0,
                                         double length, double wavenumber,
                                         std::size_t steps) {
  deflection_profile prof;
  const std::size_t n = steps + 1;
  prof.z.resize(n);
  prof.theta_plus.resize(n);
  prof.theta_minus.resize(n);
  prof.phi.resize(n);
  prof.t_plus.resize(n);
  prof.t_minus.resize(n);

  const double dz = length / static_cast<double>(steps);
  double th_p = 0.0, th_m = 0.0, ab_p = 0.0, ab_m = 0.0;
  double prev_gp = 0.0, prev_gm = 0.0, prev_kp = 0.0, prev_km = 0.0;

  for (std::size_t j = 0; j < n; ++j) {
    const double z = dz * static_cast<double>(j);
    const susceptibility_sample s = sample_at(x0, z);
    const double gp = grad_at(x0, z, polarization::plus);
    const double gm = grad_at(x0, z, polarization::minus);
    const double kp = s.kappa_plus();
    const double km = s.kappa_minus();

    if (j > 0) {
      th_p += 0.5 * dz * (prev_gp + gp);
      th_m += 0.5 * dz * (prev_gm + gm);
      ab_p += 0.5 * dz * (prev_kp + kp);
      ab_m += 0.5 * dz * (prev_km + km);
    }
    prev_gp = gp;
    prev_gm = gm;
    prev_kp = kp;
    prev_km = km;

    prof.z[j] = z;
    prof.theta_plus[j] = th_p;
    prof.theta_minus[j] = th_m;
    prof.phi[j] = th_p - th_m;
    prof.t_plus[j] = std::exp(-wavenumber * ab_p);
    prof.t_minus[j] = std::exp(-wavenumber * ab_m);
    if (prof.t_plus[j] > 1.0 + 1e-6 || prof.t_minus[j] > 1.0 + 1e-6)
      prof.gain_flagged = true;
  }
  return prof;
}

inline deflection_profile deflection_angles(double x0, double length,
                                            const beam_spec& beam,
                                            const atomic_params& p,
                                            const propagation_options& opts = {}) {
  vapor_index_field field(beam, p);
  const double h = opts.h_gradient > 0.0 ? opts.h_gradient
                                         : default_gradient_step(beam);
  return accumulate_deflection(
      [&field](double x, double z) { return field.sample(x, z); },
      [&field, h](double x, double z, polarization pol) {
        return index_gradient(field, x, z, pol, h);
      },
      x0, length, p.probe_wavenumber(), opts.steps);
}

// Transmitted intensity fraction at the cell exit for one circular component.
inline double transmission(double x0, double length, polarization pol,
                           const beam_spec& beam, const atomic_params& p,
                           const propagation_options& opts = {}) {
  vapor_index_field field(beam, p);
  const double dz = length / static_cast<double>(opts.steps);
  double acc = 0.0, prev = 0.0;
  for (std::size_t j = 0; j <= opts.steps; ++j) {
    const double z = dz * static_cast<double>(j);
    const susceptibility_sample s = field.sample(x0, z);
    const double kappa =
        pol == polarization::plus ? s.kappa_plus() : s.kappa_minus();
    if (j > 0) acc += 0.5 * dz * (prev + kappa);
    prev = kappa;
  }
  return std::exp(-p.probe_wavenumber() * acc);
}

struct ray_path {
  std::vector<double> z;      // cm
  std::vector<double> x;      // cm
  std::vector<double> slope;  // dx/dz
};

// Paraxial ray equation d2x/dz2 = dn/dx integrated with classic RK4. In
// fixed_line mode the gradient is sampled at the launch offset instead of the
// moving ray, matching the assumption behind accumulate_deflection.
template <class GradField>
ray_path integrate_ray(GradField&& grad_at, double x0, double slope0,
                       double length, polarization pol, double bound,
                       ray_mode mode, std::size_t steps) {
  ray_path path;
  path.z.resize(steps + 1);
  path.x.resize(steps + 1);
  path.slope.resize(steps + 1);

  const double dz = length / static_cast<double>(steps);
  double x = x0, s = slope0;
  path.z[0] = 0.0;
  path.x[0] = x0;
  path.slope[0] = slope0;

  const auto accel = [&](double xq, double zq) {
    return grad_at(mode == ray_mode::self_consistent ? xq : x0, zq, pol);
  };

  for (std::size_t j = 0; j < steps; ++j) {
    const double z = dz * static_cast<double>(j);
    const double k1x = s;
    const double k1s = accel(x, z);
    const double k2x = s + 0.5 * dz * k1s;
    const double k2s = accel(x + 0.5 * dz * k1x, z + 0.5 * dz);
    const double k3x = s + 0.5 * dz * k2s;
    const double k3s = accel(x + 0.5 * dz * k2x, z + 0.5 * dz);
    const double k4x = s + dz * k3s;
    const double k4s = accel(x + dz * k3x, z + dz);

    x += dz / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    s += dz / 6.0 * (k1s + 2.0 * k2s + 2.0 * k3s + k4s);
    if (std::abs(x) > bound)
      throw ray_escaped("ray left the transverse bounds at z = " +
                        std::to_string(z + dz));
    path.z[j + 1] = z + dz;
    path.x[j + 1] = x;
    path.slope[j + 1] = s;
  }
  return path;
}

inline ray_path trace_ray(double x0, double slope0, double length,
                          polarization pol, const beam_spec& beam,
                          const atomic_params& p,
                          const propagation_options& opts = {}) {
  vapor_index_field field(beam, p);
  const double h = opts.h_gradient > 0.0 ? opts.h_gradient
                                         : default_gradient_step(beam);
  return integrate_ray(
      [&field, h](double x, double z, polarization pol_q) {
        return index_gradient(field, x, z, pol_q, h);
      },
      x0, slope0, length, pol, opts.transverse_bound, opts.mode, opts.steps);
}

// z positions where the two circular rays cross, from sign changes of their
// separation with linear interpolation. A shared starting point (separation
// exactly zero at the front face) is not a crossing.
inline std::vector<double> find_foci(const ray_path& plus,
                                     const ray_path& minus) {
  std::vector<double> foci;
  const std::size_t n = std::min(plus.z.size(), minus.z.size());

  double prev_delta = 0.0;
  double prev_z = 0.0;
  bool have_prev = false;
  for (std::size_t j = 0; j < n; ++j) {
    const double delta = plus.x[j] - minus.x[j];
    if (delta == 0.0) continue;  // exact zeros carry no sign information yet
    if (have_prev && std::signbit(delta) != std::signbit(prev_delta)) {
      const double t = std::abs(prev_delta) /
                       (std::abs(prev_delta) + std::abs(delta));
      foci.push_back(prev_z + t * (plus.z[j] - prev_z));
    }
    prev_delta = delta;
    prev_z = plus.z[j];
    have_prev = true;
  }
  return foci;
}

}
