#pragma once

// Unit conventions used throughout the library:
//   position  nm        current    A         magnetic field  Gauss
//   time      us        frequency  cyclic MHz (1/us)
// Angular frequencies (rad/us) appear only inside the Hamiltonian builder
// and the integrator. All unit conversions live in this table.
namespace mrl::units {

// mu0/(2*pi) = 2e-7 T*m/A = 2e6 Gauss*nm/A; field of one straight wire is
// mu0/(2*pi) * I / r.
inline constexpr double mu0_over_2pi_gauss_nm_per_amp = 2.0e6;

inline constexpr double nm_per_um = 1.0e3;

// Electron-spin gyromagnetic ratio, cyclic MHz per Gauss.
inline constexpr double default_gyromagnetic_mhz_per_gauss = 2.8;

}  // namespace mrl::units
