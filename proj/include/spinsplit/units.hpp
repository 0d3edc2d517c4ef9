#pragma once

// Internal unit system: energies in eV, momenta in eV/c, time in hbar/eV and
// length in hbar*c/eV. With these choices hbar = c = 1, the electron mass is
// its rest energy in eV and a photon energy in eV doubles as its wavenumber.
// SI quantities only appear at I/O boundaries.

#include <numbers>

namespace spinsplit::units {

inline constexpr double pi = std::numbers::pi;

inline constexpr double electron_rest_energy = 510998.95;    // eV
inline constexpr double hbar_ev_s = 6.582119569e-16;         // eV s
inline constexpr double hbar_c_ev_nm = 197.3269804;          // eV nm
inline constexpr double speed_of_light = 299792458.0;        // m/s
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m

inline constexpr double fs_per_time_unit = hbar_ev_s * 1e15;
inline constexpr double nm_per_length_unit = hbar_c_ev_nm;
inline constexpr double um_per_length_unit = hbar_c_ev_nm * 1e-3;
inline constexpr double m_per_length_unit = hbar_c_ev_nm * 1e-9;

constexpr double from_fs(double fs) { return fs / fs_per_time_unit; }
constexpr double to_fs(double t) { return t * fs_per_time_unit; }
constexpr double from_as(double as) { return from_fs(as * 1e-3); }
constexpr double to_as(double t) { return to_fs(t) * 1e3; }

constexpr double from_um(double um) { return um / um_per_length_unit; }
constexpr double to_um(double z) { return z * um_per_length_unit; }
constexpr double from_nm(double nm) { return nm / nm_per_length_unit; }
constexpr double to_nm(double z) { return z * nm_per_length_unit; }

/// Angular frequency in rad/s for an energy hbar*omega in eV.
constexpr double to_rad_per_s(double energy) { return energy / hbar_ev_s; }

/// Peak intensity in W/cm^2 of a linearly polarized plane wave whose electric
/// field amplitude times the elementary charge is `field` (eV per length unit).
constexpr double intensity_w_cm2(double field) {
  const double e_v_per_m = field / m_per_length_unit;
  return 0.5 * vacuum_permittivity * speed_of_light * e_v_per_m * e_v_per_m *
         1e-4;
}

/// Inverse of intensity_w_cm2; returns e*E in eV per length unit.
double field_from_intensity(double intensity_w_cm2);

}  // namespace spinsplit::units
