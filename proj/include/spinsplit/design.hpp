#pragma once

// Feasibility estimates for an experimental realization: field strengths,
// intensities, interaction geometry, pulse energy and tolerance budget.
// Inputs and outputs use laboratory units (eV, W/cm^2, fs, um, mJ).

#include <string>
#include <vector>

#include "spinsplit/fields.hpp"

namespace spinsplit::design {

/// xi = e*a / (m c^2).
double xi_from_amplitude(double amplitude_ev);
double amplitude_from_xi(double xi);

/// Peak intensity in W/cm^2 of a wave with relativistic parameter xi and
/// photon energy hbar*w: e*E = xi m c^2 w, I = eps0 c E^2 / 2.
double intensity_from_xi(double xi, double photon_energy);

/// hbar*Omega_b = hbar*w xi1^2 xi2 / 2 (equal to rabi_frequency_bi).
double rabi_frequency_bi_xi(double xi1, double xi2, double photon_energy);
/// hbar*Omega_m = xi^2 m c^2 / 8 for the standing amplitude xi.
double rabi_frequency_mono_xi(double xi);

struct Geometry {
  double interaction_time_fs = 0.0;  // T = pi / (2 Omega)
  double velocity_over_c = 0.0;      // nonrelativistic, from the kinetic energy
  double beam_width_um = 0.0;        // v T
  bool nonrelativistic = true;       // v/c <= 0.05
};
/// T_b and the beam width an electron of the given kinetic energy crosses
/// during T_b.
Geometry interaction_geometry(double rabi_energy, double kinetic_energy);

/// Top-hat estimate I * dx * dy * duration in mJ.
double pulse_energy_mj(double intensity_w_cm2, double waist_x_um, double waist_y_um,
                       double duration_fs);

/// Delta p_z / p_z = m c^2 hbar*Omega_b / (4 (hbar k c)^2).
double momentum_acceptance(double rabi_energy, double photon_momentum);
/// Same quantity from xi1^2 xi2 m c / (8 hbar k).
double momentum_acceptance_xi(double xi1, double xi2, double photon_momentum);

/// Delta P / P = (pi/2) (Delta p_y / p_y + Delta L / L).
double scatter_probability_uncertainty(double dpy_over_py, double dl_over_l);

/// hbar*Omega_no-flip = (5 Delta p_x / (2 hbar k)) hbar*Omega_b.
double no_flip_rabi(double dpx, double photon_momentum, double rabi_energy);

struct Tolerances {
  double dpy_over_py = 0.01;
  double dl_over_l = 0.01;
  double dpx = 0.0;  // eV/c
};

struct DesignInputs {
  double photon_energy = 200.0;         // hbar*w in eV
  double xi1 = 0.046;
  double xi2 = 0.046;
  double mono_amplitude = 100.0;        // e*a0 in eV
  AmplitudeConvention convention = AmplitudeConvention::traveling;
  double kinetic_energy = 30.0;         // transverse electron energy in eV
  double waist_x_um = 0.0;              // 0 = same as the computed beam width
  double pulse_duration_fs = 0.0;       // 0 = T_b
  Tolerances tolerances;

  /// Throws std::invalid_argument for non-physical inputs.
  void validate() const;
};

struct DesignReport {
  DesignInputs inputs;
  double amplitude1 = 0.0;            // e*a1 in eV
  double amplitude2 = 0.0;
  double intensity1 = 0.0;            // W/cm^2, frequency w
  double intensity2 = 0.0;            // W/cm^2, frequency 2w
  double rabi_bi = 0.0;               // eV
  double rabi_mono = 0.0;             // eV
  double time_bi_fs = 0.0;            // pi/2 pulse
  double time_mono_fs = 0.0;          // pi/2 pulse; the pi pulse is twice as long
  Geometry geometry;
  double pulse_energy_per_beam_mj = 0.0;  // beam 1
  double pulse_energy_total_mj = 0.0;     // both bichromatic beams
  double bragg_momentum = 0.0;        // p_z = 2 hbar k in eV/c
  double longitudinal_energy = 0.0;   // p_z^2 / 2m in eV
  double momentum_acceptance = 0.0;   // Delta p_z / p_z
  double momentum_width = 0.0;        // Delta p_z in eV/c
  double scatter_uncertainty = 0.0;   // Delta P / P
  double no_flip_rabi = 0.0;          // eV
  std::vector<std::string> flags;     // violated bounds
};

DesignReport full_design_report(const DesignInputs& in);

/// Structured key-value text, one `key = value  # unit` line per quantity.
std::string format_report(const DesignReport& r);
/// Header line and one delimiter-separated summary row.
std::string format_summary_csv(const DesignReport& r);

}  // namespace spinsplit::design
