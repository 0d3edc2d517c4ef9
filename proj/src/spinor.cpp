#include "spinsplit/spinor.hpp"

#include <cmath>
#include <stdexcept>

#include "spinsplit/units.hpp"

namespace spinsplit {

double BlochVector::length() const { return std::sqrt(x * x + y * y + z * z); }

namespace spin {
Spinor up() { return Spinor(1.0, 0.0); }
Spinor down() { return Spinor(0.0, 1.0); }
Spinor plus_y() { return Spinor(1.0, Complex(0.0, 1.0)) / std::sqrt(2.0); }
Spinor minus_y() { return Spinor(1.0, Complex(0.0, -1.0)) / std::sqrt(2.0); }
}  // namespace spin

SpinorWavefunction::SpinorWavefunction(SpatialGrid grid)
    : grid_(grid), data_(2 * grid.points(), Complex{}) {}

double SpinorWavefunction::norm() const {
  double s = 0.0;
  for (const auto& v : data_) s += std::norm(v);
  return s * grid_.spacing();
}

void SpinorWavefunction::normalize() {
  const double n = norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw std::domain_error("cannot normalize a zero or non-finite state");
  }
  const double scale = 1.0 / std::sqrt(n);
  for (auto& v : data_) v *= scale;
}

BlochVector SpinorWavefunction::spin_moments() const {
  double sx = 0.0, sy = 0.0, sz = 0.0;
  const auto u = up();
  const auto d = down();
  for (std::size_t j = 0; j < size(); ++j) {
    const Complex c = std::conj(u[j]) * d[j];
    sx += 2.0 * c.real();
    sy += 2.0 * c.imag();
    sz += std::norm(u[j]) - std::norm(d[j]);
  }
  const double dz = grid_.spacing();
  return {sx * dz, sy * dz, sz * dz};
}

SpinorWavefunction gaussian_packet(const SpatialGrid& grid, double center,
                                   double width, double central_momentum,
                                   const Spinor& spin) {
  if (!(width >= 4.0 * grid.spacing())) {
    throw std::invalid_argument("packet width is below four grid spacings");
  }
  const double edge = std::min(center - grid.lower_edge(), grid.upper_edge() - center);
  if (edge <= 0.0) {
    throw std::invalid_argument("packet center lies outside the grid");
  }
  const double edge_density = std::exp(-edge * edge / (2.0 * width * width));
  if (edge_density > 1e-10) {
    throw std::invalid_argument(
        "packet overlaps the periodic boundary: edge density " +
        std::to_string(edge_density) + " exceeds 1e-10");
  }
  const double spin_norm = spin.norm();
  if (!(spin_norm > 0.0)) throw std::invalid_argument("zero spin vector");
  const Spinor s = spin / spin_norm;

  SpinorWavefunction psi(grid);
  auto u = psi.up();
  auto d = psi.down();
  for (std::size_t j = 0; j < grid.points(); ++j) {
    const double z = grid.position(j);
    const double dz = z - center;
    const double env = std::exp(-dz * dz / (4.0 * width * width));
    const Complex phase = std::polar(env, central_momentum * z);
    u[j] = phase * s(0);
    d[j] = phase * s(1);
  }
  psi.normalize();
  return psi;
}

BlochVector spin_expectations(const SpinorWavefunction& psi) {
  const double n = psi.norm();
  if (!(n > 0.0)) throw std::domain_error("spin expectation of a zero-norm state");
  const BlochVector m = psi.spin_moments();
  return {m.x / n, m.y / n, m.z / n};
}

double position_expectation(const SpinorWavefunction& psi) {
  const auto& g = psi.grid();
  double s = 0.0, w = 0.0;
  for (std::size_t j = 0; j < g.points(); ++j) {
    const double rho = std::norm(psi.up()[j]) + std::norm(psi.down()[j]);
    s += rho * g.position(j);
    w += rho;
  }
  if (!(w > 0.0)) throw std::domain_error("position of a zero-norm state");
  return s / w;
}

double position_variance(const SpinorWavefunction& psi) {
  const auto& g = psi.grid();
  const double mean = position_expectation(psi);
  double s = 0.0, w = 0.0;
  for (std::size_t j = 0; j < g.points(); ++j) {
    const double rho = std::norm(psi.up()[j]) + std::norm(psi.down()[j]);
    const double dz = g.position(j) - mean;
    s += rho * dz * dz;
    w += rho;
  }
  return s / w;
}

MomentumAmplitudes::MomentumAmplitudes(const SpinorWavefunction& psi)
    : grid_(psi.grid()), data_(psi.data().begin(), psi.data().end()) {
  const BatchedFft fft(grid_.points(), 2);
  transform(fft);
}

MomentumAmplitudes::MomentumAmplitudes(const SpinorWavefunction& psi,
                                       const BatchedFft& fft)
    : grid_(psi.grid()), data_(psi.data().begin(), psi.data().end()) {
  transform(fft);
}

void MomentumAmplitudes::transform(const BatchedFft& fft) {
  fft.forward(data_);
  const double scale = grid_.spacing() / std::sqrt(2.0 * units::pi);
  for (auto& v : data_) v *= scale;
}

double MomentumAmplitudes::norm() const {
  double s = 0.0;
  for (const auto& v : data_) s += std::norm(v);
  return s * grid_.momentum_spacing();
}

double MomentumAmplitudes::mean_momentum() const {
  double s = 0.0, w = 0.0;
  const std::size_t n = grid_.points();
  for (std::size_t j = 0; j < n; ++j) {
    const double rho = std::norm(data_[j]) + std::norm(data_[j + n]);
    s += rho * grid_.momentum(j);
    w += rho;
  }
  return s / w;
}

double MomentumAmplitudes::momentum_variance() const {
  const double mean = mean_momentum();
  double s = 0.0, w = 0.0;
  const std::size_t n = grid_.points();
  for (std::size_t j = 0; j < n; ++j) {
    const double rho = std::norm(data_[j]) + std::norm(data_[j + n]);
    const double dp = grid_.momentum(j) - mean;
    s += rho * dp * dp;
    w += rho;
  }
  return s / w;
}

}  // namespace spinsplit
