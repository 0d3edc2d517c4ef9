#pragma once

#include <Eigen/Core>
#include <span>

#include "spinsplit/bragg.hpp"
#include "spinsplit/mode_lattice.hpp"
#include "spinsplit/spinor.hpp"

namespace spinsplit {

/// Momentum-binned populations and spin content of the two outgoing channels
/// centred at +-2 hbar k. Populations are normalized by the total norm, so
/// plus + minus + unassigned = 1.
struct ChannelReport {
  double population_plus = 0.0;
  double population_minus = 0.0;
  double unassigned = 0.0;
  BlochVector bloch_plus;   // channel-normalized, zero when empty
  BlochVector bloch_minus;
  double norm = 0.0;        // total norm of the analysed state

  double population(Channel c) const {
    return c == Channel::plus ? population_plus : population_minus;
  }
  const BlochVector& bloch(Channel c) const {
    return c == Channel::plus ? bloch_plus : bloch_minus;
  }
  /// Reduced spin density matrix over both bins, normalized to unit trace.
  Eigen::Matrix2cd spin_density() const;
};

/// Default bin half-width: hbar k.
ChannelReport channel_report(const SpinorWavefunction& psi, double wavenumber);
ChannelReport channel_report(const SpinorWavefunction& psi, double wavenumber,
                             double half_width);
ChannelReport channel_report(const MomentumAmplitudes& phi, double wavenumber,
                             double half_width);
ChannelReport channel_report(const LatticeEnsemble& ensemble, double wavenumber,
                             double half_width);

/// Population-weighted mixture of reports, e.g. two orthogonal spin runs
/// combined into an unpolarized ensemble.
ChannelReport mix_reports(std::span<const ChannelReport> reports,
                          std::span<const double> weights);

/// |<sigma_y>| of one channel. Throws when its population is below 1e-6.
double polarization_degree(const ChannelReport& report, Channel channel);

struct RabiFit {
  double omega = 0.0;       // fitted (generalized) Rabi frequency
  double visibility = 0.0;  // v in P = v sin^2(omega t / 2 + phase)
  double phase = 0.0;
  double detuning = 0.0;    // omega * sqrt(1 - v), two-level estimate
  double rms_residual = 0.0;
};

/// Least-squares fit of P(t) = v sin^2(omega t / 2 + phase). The trace must
/// cover at least half a Rabi period; non-oscillatory traces are rejected.
RabiFit fit_rabi(std::span<const double> times, std::span<const double> populations);

/// Base-2 von Neumann entropy of a 2x2 density matrix.
double spin_entropy(const Eigen::Matrix2cd& rho);

/// Entanglement between spin and momentum channel for a normalized pure
/// state: entropy of the reduced spin state.
double spin_momentum_entanglement(const BraggState& state);
/// Throws for a mixed density matrix (purity below 1 - 1e-10).
double spin_momentum_entanglement(const BraggDensity& rho);
double spin_momentum_entanglement(const ChannelReport& report);
double spin_momentum_entanglement(const SpinorWavefunction& psi, double wavenumber);

}  // namespace spinsplit
