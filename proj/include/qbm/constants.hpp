#pragma once

// Reduced units are used throughout the numerics: hbar = k_B = m = 1.
// SI values appear only in the free-electron (gold) arithmetic, which is
// pure algebra on laboratory constants.

namespace qbm::constants {

// Reduced units.
inline constexpr double hbar = 1.0;
inline constexpr double kB = 1.0;

// CODATA 2018 values, SI.
inline constexpr double hbar_si = 1.054571817e-34;      // J s
inline constexpr double planck_si = 6.62607015e-34;     // J s
inline constexpr double electron_mass_si = 9.1093837015e-31;  // kg
inline constexpr double electron_volt = 1.602176634e-19;      // J

} // namespace qbm::constants
