#include "spinsplit/fields.hpp"

#include <cmath>
#include <stdexcept>

#include "spinsplit/analytic.hpp"
#include "spinsplit/units.hpp"

namespace spinsplit {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double sin2_ramp(double x) {
  const double s = std::sin(0.5 * units::pi * x);
  return s * s;
}

void check_envelope(const Envelope& e) {
  if (!(e.rise >= 0.0) || !(e.plateau >= 0.0) || !(e.fall >= 0.0) ||
      !std::isfinite(e.duration())) {
    throw std::invalid_argument("envelope times must be non-negative and finite");
  }
}

}  // namespace

double Envelope::value(double t) const {
  if (t < 0.0 || t > duration()) return 0.0;
  if (t < rise) return sin2_ramp(t / rise);
  if (t <= rise + plateau) return 1.0;
  const double tf = t - rise - plateau;
  return sin2_ramp(1.0 - tf / fall);
}

double Envelope::power_integral(int p) const {
  // int_0^1 sin^(2p)(pi x / 2) dx = binom(2p, p) / 4^p
  double edge_fraction = 1.0;
  for (int j = 1; j <= p; ++j) {
    edge_fraction *= static_cast<double>(2 * j - 1) / static_cast<double>(2 * j);
  }
  return plateau + (rise + fall) * edge_fraction;
}

double envelope_value(const Envelope& env, double t) { return env.value(t); }

FieldStage::FieldStage(std::string label, Wave wave)
    : label_(std::move(label)), wave_(std::move(wave)) {
  check_envelope(envelope());
  std::visit(overloaded{[](const MonoStandingWave& w) {
                          if (!(w.amplitude >= 0.0) || !(w.photon_energy > 0.0)) {
                            throw std::invalid_argument(
                                "monochromatic stage needs a0 >= 0 and photon energy > 0");
                          }
                        },
                        [](const BichromaticWave& w) {
                          if (!(w.amplitude1 >= 0.0) || !(w.amplitude2 >= 0.0) ||
                              !(w.photon_energy > 0.0)) {
                            throw std::invalid_argument(
                                "bichromatic stage needs a1, a2 >= 0 and photon energy > 0");
                          }
                        }},
             wave_);
}

StageKind FieldStage::kind() const {
  return std::holds_alternative<MonoStandingWave>(wave_) ? StageKind::monochromatic
                                                         : StageKind::bichromatic;
}

const Envelope& FieldStage::envelope() const {
  return std::visit([](const auto& w) -> const Envelope& { return w.envelope; }, wave_);
}

double FieldStage::start() const {
  return std::visit([](const auto& w) { return w.start; }, wave_);
}

double FieldStage::wavenumber() const {
  return std::visit([](const auto& w) { return w.photon_energy; }, wave_);
}

double FieldStage::max_carrier_frequency() const { return 2.0 * wavenumber(); }

double FieldStage::rabi_frequency() const {
  return std::visit(
      overloaded{[](const MonoStandingWave& w) {
                   return rabi_frequency_mono(w.standing_amplitude());
                 },
                 [](const BichromaticWave& w) {
                   return rabi_frequency_bi(w.amplitude1, w.amplitude2, w.photon_energy);
                 }},
      wave_);
}

int FieldStage::envelope_power() const {
  return kind() == StageKind::monochromatic ? 2 : 3;
}

double FieldStage::pulse_area() const {
  return rabi_frequency() * envelope().power_integral(envelope_power());
}

double vector_potential(const FieldStage& stage, double t, double z) {
  const double f = stage.envelope_at(t);
  if (f == 0.0) return 0.0;
  return std::visit(
      overloaded{[&](const MonoStandingWave& w) {
                   const double om = w.photon_energy;
                   const double k = w.photon_energy;
                   return f * w.standing_amplitude() * std::cos(2.0 * om * t) *
                          std::cos(2.0 * k * z + 0.5 * w.chi);
                 },
                 [&](const BichromaticWave& w) {
                   const double om = w.photon_energy;
                   const double k = w.photon_energy;
                   return f * (w.amplitude1 * std::cos(om * t - k * z) +
                               w.amplitude2 * std::cos(2.0 * om * t + 2.0 * k * z));
                 }},
      stage.wave());
}

double magnetic_field(const FieldStage& stage, double t, double z) {
  const double f = stage.envelope_at(t);
  if (f == 0.0) return 0.0;
  return std::visit(
      overloaded{[&](const MonoStandingWave& w) {
                   const double om = w.photon_energy;
                   const double k = w.photon_energy;
                   return -2.0 * k * f * w.standing_amplitude() * std::cos(2.0 * om * t) *
                          std::sin(2.0 * k * z + 0.5 * w.chi);
                 },
                 [&](const BichromaticWave& w) {
                   const double om = w.photon_energy;
                   const double k = w.photon_energy;
                   return f * (w.amplitude1 * k * std::sin(om * t - k * z) -
                               2.0 * k * w.amplitude2 * std::sin(2.0 * om * t + 2.0 * k * z));
                 }},
      stage.wave());
}

std::array<std::complex<double>, 5> vector_potential_harmonics(const FieldStage& stage,
                                                                double t) {
  using C = std::complex<double>;
  std::array<C, 5> u{};
  const double f = stage.envelope_at(t);
  if (f == 0.0) return u;
  std::visit(overloaded{[&](const MonoStandingWave& w) {
                          const double c = 0.5 * f * w.standing_amplitude() *
                                           std::cos(2.0 * w.photon_energy * t);
                          u[4] = c * std::polar(1.0, 0.5 * w.chi);
                          u[0] = c * std::polar(1.0, -0.5 * w.chi);
                        },
                        [&](const BichromaticWave& w) {
                          const double om = w.photon_energy;
                          u[1] = 0.5 * f * w.amplitude1 * std::polar(1.0, om * t);
                          u[3] = 0.5 * f * w.amplitude1 * std::polar(1.0, -om * t);
                          u[4] = 0.5 * f * w.amplitude2 * std::polar(1.0, 2.0 * om * t);
                          u[0] = 0.5 * f * w.amplitude2 * std::polar(1.0, -2.0 * om * t);
                        }},
             stage.wave());
  return u;
}

}  // namespace spinsplit
