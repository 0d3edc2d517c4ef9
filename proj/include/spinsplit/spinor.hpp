#pragma once

#include <Eigen/Core>
#include <complex>
#include <span>

#include "spinsplit/fft.hpp"
#include "spinsplit/grid.hpp"

namespace spinsplit {

using Complex = std::complex<double>;
/// Two-component spin state, quantized along z: (up, down).
using Spinor = Eigen::Vector2cd;

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double length() const;
};

namespace spin {
Spinor up();
Spinor down();
/// sigma_y eigenstates (|up> +- i|down>)/sqrt(2).
Spinor plus_y();
Spinor minus_y();
}  // namespace spin

/// Pauli spinor sampled on a periodic grid. Amplitudes are stored as one
/// contiguous buffer [up(0..n-1), down(0..n-1)] so both components can be
/// transformed with a single batched FFT.
class SpinorWavefunction {
 public:
  explicit SpinorWavefunction(SpatialGrid grid);

  const SpatialGrid& grid() const { return grid_; }
  std::size_t size() const { return grid_.points(); }

  std::span<Complex> up() { return {data_.data(), size()}; }
  std::span<Complex> down() { return {data_.data() + size(), size()}; }
  std::span<const Complex> up() const { return {data_.data(), size()}; }
  std::span<const Complex> down() const { return {data_.data() + size(), size()}; }
  std::span<Complex> data() { return data_; }
  std::span<const Complex> data() const { return data_; }

  /// sum(|up|^2 + |down|^2) * dz
  double norm() const;
  void normalize();

  /// Unnormalized <psi|sigma_i|psi> (times dz).
  BlochVector spin_moments() const;

 private:
  SpatialGrid grid_;
  ComplexBuffer data_;
};

/// Normalized Gaussian packet exp(-(z-z0)^2/(4 sigma^2)) exp(i p z) (x) spin.
/// `width` is the standard deviation of |psi|^2. Throws when the width is
/// below four grid spacings or the packet density relative to its peak exceeds
/// 1e-10 at the nearer domain edge.
SpinorWavefunction gaussian_packet(const SpatialGrid& grid, double center,
                                   double width, double central_momentum,
                                   const Spinor& spin);

/// <sigma_x,y,z> / <psi|psi>. Throws on a zero-norm state.
BlochVector spin_expectations(const SpinorWavefunction& psi);

double position_expectation(const SpinorWavefunction& psi);
double position_variance(const SpinorWavefunction& psi);

/// Momentum-space amplitudes phi(p_j) in FFT order, scaled so that
/// sum |phi|^2 dp equals the spatial norm.
class MomentumAmplitudes {
 public:
  explicit MomentumAmplitudes(const SpinorWavefunction& psi);
  MomentumAmplitudes(const SpinorWavefunction& psi, const BatchedFft& fft);

  const SpatialGrid& grid() const { return grid_; }
  std::span<const Complex> up() const { return {data_.data(), grid_.points()}; }
  std::span<const Complex> down() const {
    return {data_.data() + grid_.points(), grid_.points()};
  }
  double momentum(std::size_t j) const { return grid_.momentum(j); }
  double norm() const;
  double mean_momentum() const;
  double momentum_variance() const;

 private:
  void transform(const BatchedFft& fft);

  SpatialGrid grid_;
  ComplexBuffer data_;
};

}  // namespace spinsplit
