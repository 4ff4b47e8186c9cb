#pragma once

// Physical constants (CODATA 2018), SI units.
namespace sgb::constants {

inline constexpr double hbar = 1.054571817e-34;          // reduced Planck constant [J s]
inline constexpr double bohr_magneton = 9.2740100783e-24; // [J/T]

} // namespace sgb::constants
