#pragma once

// Closed-form model of the beam splitter restricted to the Bragg subspace
// {-2 hbar k, +2 hbar k} x {up, down}. Field-induced detuning is deliberately
// not part of this model; the numerical backends expose it.

#include <Eigen/Core>
#include <vector>

#include "spinsplit/bragg.hpp"
#include "spinsplit/fields.hpp"

namespace spinsplit {

/// hbar*Omega_m = (e a0)^2 / (8 m c^2) for the standing-wave amplitude e*a0.
double rabi_frequency_mono(double standing_amplitude);
/// hbar*Omega_b = (e a1)^2 (e a2) hbar w / (2 (m c^2)^3).
double rabi_frequency_bi(double amplitude1, double amplitude2, double photon_energy);

/// Ponderomotive potential of one stage.
///   mono:        V(z) =  V0 cos(4 k z + chi) * 1
///   bichromatic: V(z) = -V0 sin(4 k z) * sigma_y
/// with V0 the corresponding hbar*Omega. `strength` may be negative, which
/// is how time-reversed runs flip the coupling sign.
struct EffectivePotential {
  StageKind kind = StageKind::monochromatic;
  double strength = 0.0;    // V0 in eV
  double wavenumber = 0.0;  // fundamental k
  double chi = 0.0;         // mono only

  static EffectivePotential from_stage(const FieldStage& stage);
  double spatial_period() const;
};

/// 2x2 Hermitian value of the potential at position z, in eV.
Eigen::Matrix2cd effective_potential_value(const EffectivePotential& pot, double z);

/// Bragg-subspace block matrix of a stage normalized by hbar*Omega/2:
/// mono [[0, e^{-i chi}],[e^{i chi}, 0]] (x) 1, bichromatic i[[0,-sigma_y],[sigma_y,0]].
Eigen::Matrix4cd coupling_matrix(StageKind kind, double chi = 0.0);

struct StageUnitary {
  Eigen::Matrix4cd matrix = Eigen::Matrix4cd::Identity();
  StageKind kind = StageKind::monochromatic;
  double area = 0.0;
  double chi = 0.0;

  BraggState apply(const BraggState& state) const;
  /// Largest entry of |U^dagger U - 1|.
  double unitarity_error() const;
};

/// exp(-i area/2 * coupling_matrix(kind, chi)) in closed form.
StageUnitary stage_unitary(StageKind kind, double area, double chi = 0.0);

/// Product U_3 U_2 U_1 of the ideal pi/2 (bichromatic), pi (mono) and
/// pi/2 (mono) pulses sharing phase chi.
StageUnitary total_evolution(double chi);

/// Product of the stage unitaries of a pulse sequence, first stage rightmost.
Eigen::Matrix4cd compose(const std::vector<StageUnitary>& sequence);

/// U rho U^dagger. Throws for a non-Hermitian input.
BraggDensity evolve_density(const Eigen::Matrix4cd& u, const Eigen::Matrix4cd& rho);
BraggDensity evolve_density(const StageUnitary& u, const BraggDensity& rho);

/// Block-diagonal diag(sigma_y, sigma_y).
Eigen::Matrix4cd sigma_y_total();

/// Pulse sequence of a list of field stages, using each stage's exact
/// envelope-weighted area.
std::vector<StageUnitary> stage_sequence(const std::vector<FieldStage>& stages);

}  // namespace spinsplit
