// Physical constants (CODATA 2018 exact/recommended values).
#pragma once

namespace etrap::constants {

inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double k_boltzmann = 1.380649e-23;    // J/K (exact)
inline constexpr double elementary_charge = 1.602176634e-19;  // C (exact)
inline constexpr double electron_mass = 9.1093837015e-31;     // kg
inline constexpr double bohr_magneton = 9.2740100783e-24;     // J/T
inline constexpr double atomic_mass_unit = 1.66053906660e-27; // kg
inline constexpr double g_electron = 2.0;  // spin g-factor, anomaly ignored

// Ca-40, reference species for heating-rate extrapolation.
inline constexpr double calcium40_mass = 39.962590863 * atomic_mass_unit;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

}  // namespace etrap::constants
