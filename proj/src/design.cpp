#include "spinsplit/design.hpp"

#include <cmath>
#include <fmt/format.h>
#include <stdexcept>

#include "spinsplit/analytic.hpp"
#include "spinsplit/units.hpp"

namespace spinsplit::design {
namespace {

constexpr double kMc2 = units::electron_rest_energy;

void require_non_negative(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(name) + " must be non-negative and finite");
  }
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(name) + " must be positive and finite");
  }
}

}  // namespace

double xi_from_amplitude(double amplitude_ev) { return amplitude_ev / kMc2; }
double amplitude_from_xi(double xi) { return xi * kMc2; }

double intensity_from_xi(double xi, double photon_energy) {
  require_non_negative(xi, "xi");
  require_positive(photon_energy, "photon energy");
  return units::intensity_w_cm2(xi * kMc2 * photon_energy);
}

double rabi_frequency_bi_xi(double xi1, double xi2, double photon_energy) {
  return 0.5 * photon_energy * xi1 * xi1 * xi2;
}

double rabi_frequency_mono_xi(double xi) { return xi * xi * kMc2 / 8.0; }

Geometry interaction_geometry(double rabi_energy, double kinetic_energy) {
  require_positive(rabi_energy, "Rabi frequency");
  require_positive(kinetic_energy, "kinetic energy");
  Geometry g;
  const double t = units::pi / (2.0 * rabi_energy);
  g.interaction_time_fs = units::to_fs(t);
  g.velocity_over_c = std::sqrt(2.0 * kinetic_energy / kMc2);
  g.beam_width_um = units::to_um(g.velocity_over_c * t);
  g.nonrelativistic = g.velocity_over_c <= 0.05;
  return g;
}

double pulse_energy_mj(double intensity_w_cm2, double waist_x_um, double waist_y_um,
                       double duration_fs) {
  require_non_negative(intensity_w_cm2, "intensity");
  require_non_negative(waist_x_um, "waist x");
  require_non_negative(waist_y_um, "waist y");
  require_non_negative(duration_fs, "duration");
  const double area_cm2 = (waist_x_um * 1e-4) * (waist_y_um * 1e-4);
  return intensity_w_cm2 * area_cm2 * duration_fs * 1e-15 * 1e3;
}

double momentum_acceptance(double rabi_energy, double photon_momentum) {
  require_non_negative(rabi_energy, "Rabi frequency");
  require_positive(photon_momentum, "photon momentum");
  return kMc2 * rabi_energy / (4.0 * photon_momentum * photon_momentum);
}

double momentum_acceptance_xi(double xi1, double xi2, double photon_momentum) {
  require_positive(photon_momentum, "photon momentum");
  return xi1 * xi1 * xi2 * kMc2 / (8.0 * photon_momentum);
}

double scatter_probability_uncertainty(double dpy_over_py, double dl_over_l) {
  require_non_negative(dpy_over_py, "Delta p_y / p_y");
  require_non_negative(dl_over_l, "Delta L / L");
  return 0.5 * units::pi * (dpy_over_py + dl_over_l);
}

double no_flip_rabi(double dpx, double photon_momentum, double rabi_energy) {
  require_non_negative(dpx, "Delta p_x");
  require_positive(photon_momentum, "photon momentum");
  require_non_negative(rabi_energy, "Rabi frequency");
  return 2.5 * dpx / photon_momentum * rabi_energy;
}

void DesignInputs::validate() const {
  require_positive(photon_energy, "photon_energy");
  require_positive(xi1, "xi1");
  require_positive(xi2, "xi2");
  require_positive(mono_amplitude, "mono_amplitude");
  require_positive(kinetic_energy, "kinetic_energy");
  require_non_negative(waist_x_um, "waist_x");
  require_non_negative(pulse_duration_fs, "pulse_duration");
  require_non_negative(tolerances.dpy_over_py, "dpy_over_py");
  require_non_negative(tolerances.dl_over_l, "dl_over_l");
  require_non_negative(tolerances.dpx, "dpx");
}

DesignReport full_design_report(const DesignInputs& in) {
  in.validate();
  DesignReport r;
  r.inputs = in;
  const double k = in.photon_energy;
  r.amplitude1 = amplitude_from_xi(in.xi1);
  r.amplitude2 = amplitude_from_xi(in.xi2);
  r.intensity1 = intensity_from_xi(in.xi1, in.photon_energy);
  r.intensity2 = intensity_from_xi(in.xi2, 2.0 * in.photon_energy);
  r.rabi_bi = rabi_frequency_bi(r.amplitude1, r.amplitude2, in.photon_energy);
  const double standing = in.convention == AmplitudeConvention::traveling
                              ? 2.0 * in.mono_amplitude
                              : in.mono_amplitude;
  r.rabi_mono = rabi_frequency_mono(standing);
  r.time_bi_fs = units::to_fs(units::pi / (2.0 * r.rabi_bi));
  r.time_mono_fs = units::to_fs(units::pi / (2.0 * r.rabi_mono));
  r.geometry = interaction_geometry(r.rabi_bi, in.kinetic_energy);
  const double waist_x = in.waist_x_um > 0.0 ? in.waist_x_um : r.geometry.beam_width_um;
  const double duration = in.pulse_duration_fs > 0.0 ? in.pulse_duration_fs : r.time_bi_fs;
  r.pulse_energy_per_beam_mj =
      pulse_energy_mj(r.intensity1, waist_x, r.geometry.beam_width_um, duration);
  r.pulse_energy_total_mj =
      r.pulse_energy_per_beam_mj +
      pulse_energy_mj(r.intensity2, waist_x, r.geometry.beam_width_um, duration);
  r.bragg_momentum = 2.0 * k;
  r.longitudinal_energy = r.bragg_momentum * r.bragg_momentum / (2.0 * kMc2);
  r.momentum_acceptance = momentum_acceptance(r.rabi_bi, k);
  r.momentum_width = r.momentum_acceptance * r.bragg_momentum;
  r.scatter_uncertainty =
      scatter_probability_uncertainty(in.tolerances.dpy_over_py, in.tolerances.dl_over_l);
  r.no_flip_rabi = no_flip_rabi(in.tolerances.dpx, k, r.rabi_bi);

  if (in.xi1 >= 0.2 || in.xi2 >= 0.2) r.flags.push_back("xi >= 0.2: outside the nonrelativistic regime");
  if (!r.geometry.nonrelativistic) r.flags.push_back("v/c > 0.05: nonrelativistic kinematics questionable");
  if (r.momentum_acceptance > 0.04) r.flags.push_back("Delta p_z / p_z exceeds 0.04");
  if (in.tolerances.dpx > 0.1 * k) {
    r.flags.push_back("Delta p_x is not small against hbar k: spin-preserving scattering not suppressed");
  }
  return r;
}

std::string format_report(const DesignReport& r) {
  std::string s;
  auto line = [&](const char* key, double v, const char* unit) {
    s += fmt::format("{:<28} = {:.6e}  # {}\n", key, v, unit);
  };
  line("photon_energy", r.inputs.photon_energy, "eV");
  line("xi1", r.inputs.xi1, "1");
  line("xi2", r.inputs.xi2, "1");
  line("amplitude1", r.amplitude1, "eV (e*a1)");
  line("amplitude2", r.amplitude2, "eV (e*a2)");
  line("intensity1", r.intensity1, "W/cm^2 (frequency w)");
  line("intensity2", r.intensity2, "W/cm^2 (frequency 2w)");
  line("rabi_bi", r.rabi_bi, "eV");
  line("rabi_mono", r.rabi_mono, "eV");
  line("time_bi_half_pi", r.time_bi_fs, "fs");
  line("time_mono_half_pi", r.time_mono_fs, "fs");
  line("kinetic_energy", r.inputs.kinetic_energy, "eV (transverse)");
  line("velocity_over_c", r.geometry.velocity_over_c, "1");
  line("beam_width", r.geometry.beam_width_um, "um");
  line("pulse_energy_beam1", r.pulse_energy_per_beam_mj, "mJ");
  line("pulse_energy_total", r.pulse_energy_total_mj, "mJ (both bichromatic beams)");
  line("bragg_momentum", r.bragg_momentum, "eV/c");
  line("longitudinal_energy", r.longitudinal_energy, "eV");
  line("momentum_acceptance", r.momentum_acceptance, "1 (Delta p_z / p_z)");
  line("momentum_width", r.momentum_width, "eV/c");
  line("scatter_uncertainty", r.scatter_uncertainty, "1 (Delta P / P)");
  line("dpx", r.inputs.tolerances.dpx, "eV/c");
  line("no_flip_rabi", r.no_flip_rabi, "eV");
  s += fmt::format("{:<28} = {}\n", "flags", r.flags.empty() ? "none" : "");
  for (const auto& f : r.flags) s += "  - " + f + "\n";
  return s;
}

std::string format_summary_csv(const DesignReport& r) {
  std::string s =
      "intensity1_w_cm2,intensity2_w_cm2,rabi_bi_ev,rabi_mono_ev,time_bi_fs,time_mono_fs,"
      "beam_width_um,pulse_energy_total_mj,momentum_acceptance,scatter_uncertainty,"
      "no_flip_rabi_ev,flags\n";
  s += fmt::format("{:.6e},{:.6e},{:.6e},{:.6e},{:.6e},{:.6e},{:.6e},{:.6e},{:.6e},{:.6e},{:.6e},{}\n",
                   r.intensity1, r.intensity2, r.rabi_bi, r.rabi_mono, r.time_bi_fs,
                   r.time_mono_fs, r.geometry.beam_width_um, r.pulse_energy_total_mj,
                   r.momentum_acceptance, r.scatter_uncertainty, r.no_flip_rabi,
                   r.flags.size());
  return s;
}

}  // namespace spinsplit::design
