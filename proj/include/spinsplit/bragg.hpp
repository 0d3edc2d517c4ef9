#pragma once

#include <Eigen/Core>

#include "spinsplit/spinor.hpp"

namespace spinsplit {

/// Momentum blocks of the Bragg subspace, in storage order.
enum class Channel { minus = 0, plus = 1 };

/// Pure state in the four-dimensional Bragg subspace, ordered
/// (c[-2k] up, c[-2k] down, c[+2k] up, c[+2k] down).
class BraggState {
 public:
  BraggState() = default;
  explicit BraggState(const Eigen::Vector4cd& amplitudes);
  static BraggState from_blocks(const Spinor& minus, const Spinor& plus);
  /// Normalized state with `spin` in one channel and nothing in the other.
  static BraggState in_channel(Channel channel, const Spinor& spin);

  const Eigen::Vector4cd& amplitudes() const { return amplitudes_; }
  Spinor block(Channel channel) const;
  double norm_squared() const { return amplitudes_.squaredNorm(); }
  /// Throws unless sum |c_i|^2 = 1 within 1e-12.
  void require_normalized() const;

  Eigen::Matrix4cd density() const;

 private:
  Eigen::Vector4cd amplitudes_ = Eigen::Vector4cd::Zero();
};

/// Hermitian, unit-trace, positive semidefinite 4x4 density matrix.
class BraggDensity {
 public:
  /// Validates the invariants; throws std::invalid_argument otherwise.
  explicit BraggDensity(const Eigen::Matrix4cd& rho);
  static BraggDensity pure(const BraggState& state);
  /// Unpolarized ensemble occupying one momentum channel: identity/2 there.
  static BraggDensity unpolarized(Channel channel);

  const Eigen::Matrix4cd& matrix() const { return rho_; }
  Eigen::Matrix2cd block(Channel row, Channel col) const;
  double population(Channel channel) const;
  /// Channel-normalized Bloch vector; zero vector for an empty channel.
  BlochVector bloch(Channel channel) const;

 private:
  Eigen::Matrix4cd rho_;
};

/// Validation helpers shared with the analytic model.
bool is_hermitian(const Eigen::Matrix4cd& m, double tol);

}  // namespace spinsplit
