#pragma once

#include <array>
#include <complex>
#include <string>
#include <variant>

namespace spinsplit {

/// Switching envelope with sin^2 edges: rises from 0 to 1 over `rise`, stays
/// at 1 for `plateau`, falls back to 0 over `fall`. Times are relative to the
/// stage start.
struct Envelope {
  double rise = 0.0;
  double plateau = 0.0;
  double fall = 0.0;

  double duration() const { return rise + plateau + fall; }
  double value(double t) const;
  /// Integral of f(t)^p over the whole envelope. Each sin^2 edge of length r
  /// contributes r * binom(2p, p) / 4^p.
  double power_integral(int p) const;
};

double envelope_value(const Envelope& env, double t);

/// How the monochromatic amplitude e*a0 is read. `standing` takes it as the
/// amplitude of the standing wave in the literal vector potential; `traveling`
/// takes it as the amplitude of each of the two counterpropagating waves, so
/// the standing amplitude is 2*a0.
enum class AmplitudeConvention { standing, traveling };

/// e*A = f(t) a0 cos(2 w t) cos(2 k z + chi/2), with w = c k the fundamental.
struct MonoStandingWave {
  double amplitude = 0.0;      // e*a0 in eV
  double photon_energy = 0.0;  // hbar*w of the fundamental in eV
  double chi = 0.0;
  AmplitudeConvention convention = AmplitudeConvention::traveling;
  Envelope envelope;
  double start = 0.0;

  double standing_amplitude() const {
    return convention == AmplitudeConvention::traveling ? 2.0 * amplitude : amplitude;
  }
};

/// e*A = f(t) [a1 cos(w t - k z) + a2 cos(2 w t + 2 k z)].
struct BichromaticWave {
  double amplitude1 = 0.0;     // e*a1 in eV
  double amplitude2 = 0.0;     // e*a2 in eV
  double photon_energy = 0.0;  // hbar*w in eV
  Envelope envelope;
  double start = 0.0;
};

enum class StageKind { monochromatic, bichromatic };

/// One laser interaction of the beam splitter.
class FieldStage {
 public:
  using Wave = std::variant<MonoStandingWave, BichromaticWave>;

  FieldStage(std::string label, Wave wave);

  const std::string& label() const { return label_; }
  const Wave& wave() const { return wave_; }
  StageKind kind() const;
  const Envelope& envelope() const;
  double start() const;
  double end() const { return start() + envelope().duration(); }
  /// Fundamental wavenumber k (equal to hbar*w in natural units).
  double wavenumber() const;
  /// Highest carrier angular frequency present (2w for both kinds).
  double max_carrier_frequency() const;
  /// hbar*Omega at full envelope, from the Bragg-subspace formulas.
  double rabi_frequency() const;
  /// Power of the envelope multiplying the effective coupling (2 or 3).
  int envelope_power() const;
  /// Integral of Omega(t) dt over the stage.
  double pulse_area() const;
  /// Envelope value at absolute time t.
  double envelope_at(double t) const { return envelope().value(t - start()); }

 private:
  std::string label_;
  Wave wave_;
};

/// e*A_x(t, z) in eV.
double vector_potential(const FieldStage& stage, double t, double z);
/// e*B_y = d/dz (e*A_x) in eV per length unit (eV^2 with hbar = c = 1).
/// The envelope is treated as z-independent.
double magnetic_field(const FieldStage& stage, double t, double z);

/// Fourier coefficients u_m of e*A_x(t, z) = sum_m u_m exp(i m k z) for
/// m = -2..2 (index m + 2), including the envelope.
std::array<std::complex<double>, 5> vector_potential_harmonics(const FieldStage& stage,
                                                                double t);

}  // namespace spinsplit
