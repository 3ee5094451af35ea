// constants.hpp: CODATA 2018 physical constants (SI)

#pragma once

#include <numbers>

namespace sqcav::constants {

inline constexpr double pi = std::numbers::pi;

inline constexpr double planck = 6.62607015e-34;          // J s (exact)
inline constexpr double hbar = planck / (2.0 * pi);       // J s
inline constexpr double elementary_charge = 1.602176634e-19; // C (exact)
inline constexpr double boltzmann = 1.380649e-23;         // J/K (exact)
inline constexpr double speed_of_light = 299792458.0;     // m/s (exact)
inline constexpr double vacuum_permittivity = 8.8541878128e-12; // F/m
inline constexpr double flux_quantum = planck / (2.0 * elementary_charge); // Wb

} // namespace sqcav::constants
