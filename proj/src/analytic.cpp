#include "spinsplit/analytic.hpp"

#include <cmath>
#include <stdexcept>

#include "spinsplit/units.hpp"

namespace spinsplit {
namespace {

constexpr Complex I{0.0, 1.0};

Eigen::Matrix2cd sigma_y() {
  Eigen::Matrix2cd s;
  s << 0.0, -I, I, 0.0;
  return s;
}

}  // namespace

double rabi_frequency_mono(double standing_amplitude) {
  if (standing_amplitude < 0.0) throw std::invalid_argument("negative amplitude");
  return standing_amplitude * standing_amplitude / (8.0 * units::electron_rest_energy);
}

double rabi_frequency_bi(double amplitude1, double amplitude2, double photon_energy) {
  if (amplitude1 < 0.0 || amplitude2 < 0.0) throw std::invalid_argument("negative amplitude");
  const double mc2 = units::electron_rest_energy;
  return amplitude1 * amplitude1 * amplitude2 * photon_energy / (2.0 * mc2 * mc2 * mc2);
}

EffectivePotential EffectivePotential::from_stage(const FieldStage& stage) {
  EffectivePotential p;
  p.kind = stage.kind();
  p.strength = stage.rabi_frequency();
  p.wavenumber = stage.wavenumber();
  if (const auto* mono = std::get_if<MonoStandingWave>(&stage.wave())) p.chi = mono->chi;
  return p;
}

double EffectivePotential::spatial_period() const {
  return units::pi / (2.0 * wavenumber);
}

Eigen::Matrix2cd effective_potential_value(const EffectivePotential& pot, double z) {
  const double phase = 4.0 * pot.wavenumber * z;
  if (pot.kind == StageKind::monochromatic) {
    return pot.strength * std::cos(phase + pot.chi) * Eigen::Matrix2cd::Identity();
  }
  return -pot.strength * std::sin(phase) * sigma_y();
}

Eigen::Matrix4cd coupling_matrix(StageKind kind, double chi) {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  if (kind == StageKind::monochromatic) {
    const Eigen::Matrix2cd one = Eigen::Matrix2cd::Identity();
    m.block<2, 2>(0, 2) = std::polar(1.0, -chi) * one;
    m.block<2, 2>(2, 0) = std::polar(1.0, chi) * one;
  } else {
    m.block<2, 2>(0, 2) = -I * sigma_y();
    m.block<2, 2>(2, 0) = I * sigma_y();
  }
  return m;
}

StageUnitary stage_unitary(StageKind kind, double area, double chi) {
  // The coupling matrix squares to the identity, so
  // exp(-i a/2 M) = cos(a/2) 1 - i sin(a/2) M.
  const double c = std::cos(0.5 * area);
  const double s = std::sin(0.5 * area);
  StageUnitary u;
  u.matrix = c * Eigen::Matrix4cd::Identity() - I * s * coupling_matrix(kind, chi);
  u.kind = kind;
  u.area = area;
  u.chi = kind == StageKind::monochromatic ? chi : 0.0;
  return u;
}

BraggState StageUnitary::apply(const BraggState& state) const {
  return BraggState(matrix * state.amplitudes());
}

double StageUnitary::unitarity_error() const {
  return (matrix.adjoint() * matrix - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff();
}

StageUnitary total_evolution(double chi) {
  const auto u1 = stage_unitary(StageKind::bichromatic, units::pi / 2.0);
  const auto u2 = stage_unitary(StageKind::monochromatic, units::pi, chi);
  const auto u3 = stage_unitary(StageKind::monochromatic, units::pi / 2.0, chi);
  StageUnitary total;
  total.matrix = u3.matrix * u2.matrix * u1.matrix;
  total.kind = StageKind::monochromatic;
  total.area = 2.0 * units::pi;
  total.chi = chi;
  return total;
}

Eigen::Matrix4cd compose(const std::vector<StageUnitary>& sequence) {
  Eigen::Matrix4cd u = Eigen::Matrix4cd::Identity();
  for (const auto& s : sequence) u = s.matrix * u;
  return u;
}

BraggDensity evolve_density(const Eigen::Matrix4cd& u, const Eigen::Matrix4cd& rho) {
  if (!is_hermitian(rho, 1e-12)) {
    throw std::invalid_argument("evolve_density: input is not Hermitian");
  }
  Eigen::Matrix4cd out = u * rho * u.adjoint();
  // Remove the rounding-level anti-Hermitian part.
  out = 0.5 * (out + out.adjoint()).eval();
  return BraggDensity(out);
}

BraggDensity evolve_density(const StageUnitary& u, const BraggDensity& rho) {
  return evolve_density(u.matrix, rho.matrix());
}

Eigen::Matrix4cd sigma_y_total() {
  Eigen::Matrix4cd s = Eigen::Matrix4cd::Zero();
  s.block<2, 2>(0, 0) = sigma_y();
  s.block<2, 2>(2, 2) = sigma_y();
  return s;
}

std::vector<StageUnitary> stage_sequence(const std::vector<FieldStage>& stages) {
  std::vector<StageUnitary> seq;
  seq.reserve(stages.size());
  for (const auto& st : stages) {
    double chi = 0.0;
    if (const auto* mono = std::get_if<MonoStandingWave>(&st.wave())) chi = mono->chi;
    seq.push_back(stage_unitary(st.kind(), st.pulse_area(), chi));
  }
  return seq;
}

}  // namespace spinsplit
