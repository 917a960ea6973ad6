// Probe absorption and dispersion spectrum of the driven vapor, scanned over
// probe detuning at fixed control drive. Writes CSV to stdout; redirect to a
// file and plot im_chi_* to see the transparency window, re_chi_* for the
// steep dispersion that drives the deflection results.
//
//   spectrum_demo > spectrum.csv

#include <cstdio>

#include <tripod/tripod.hpp>

int main() {
  tripod::atomic_params params;
  params.delta_zeeman = 0.01;
  params.delta_control = 0.0;

  tripod::beam_spec beam;
  beam.theta_c = tripod::constants::pi / 4.0;

  std::printf("delta,re_chi_plus,im_chi_plus,re_chi_minus,im_chi_minus\n");
  for (int j = -300; j <= 300; ++j) {
    params.delta_probe = 0.01 * j;
    const auto g = tripod::rabi_from_envelope(1.0, beam.theta_c, params);
    const auto sample =
        tripod::susceptibility(tripod::solve_steady_state(params, g), params);
    std::printf("%.2f,%.6e,%.6e,%.6e,%.6e\n", params.delta_probe,
                std::real(sample.chi_plus), std::imag(sample.chi_plus),
                std::real(sample.chi_minus), std::imag(sample.chi_minus));
  }
  return 0;
}
