#pragma once

// Physical constants in CGS-Gaussian units. Lengths are cm, angular frequencies rad/s.

namespace tripod::constants {

inline constexpr double speed_of_light = 2.99792458e10;  // cm/s
inline constexpr double hbar = 1.054571817e-27;          // erg s
inline constexpr double bohr_magneton = 9.2740100783e-21;  // erg/G
inline constexpr double pi = 3.141592653589793238462643383279502884;

// 4P_1/2 spontaneous emission rate of potassium-39, 2*pi * 6.079 MHz.
inline constexpr double k39_einstein_a = 2.0 * pi * 6.079e6;  // rad/s

// Per-channel decay rate when the upper level empties into twelve Zeeman
// channels at equal strength. This is the internal frequency unit gamma.
inline constexpr double k39_gamma = k39_einstein_a / 12.0;  // rad/s

inline constexpr double k39_d1_wavelength = 7.699e-5;  // cm

}
