#include "spinsplit/bragg.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>
#include <string>

namespace spinsplit {
namespace {
int offset(Channel c) { return c == Channel::minus ? 0 : 2; }
}  // namespace

BraggState::BraggState(const Eigen::Vector4cd& amplitudes) : amplitudes_(amplitudes) {}

BraggState BraggState::from_blocks(const Spinor& minus, const Spinor& plus) {
  Eigen::Vector4cd v;
  v << minus(0), minus(1), plus(0), plus(1);
  return BraggState(v);
}

BraggState BraggState::in_channel(Channel channel, const Spinor& spin) {
  const Spinor s = spin.normalized();
  return channel == Channel::plus ? from_blocks(Spinor::Zero(), s)
                                  : from_blocks(s, Spinor::Zero());
}

Spinor BraggState::block(Channel channel) const {
  return amplitudes_.segment<2>(offset(channel));
}

void BraggState::require_normalized() const {
  if (std::abs(norm_squared() - 1.0) > 1e-12) {
    throw std::invalid_argument("Bragg state is not normalized");
  }
}

Eigen::Matrix4cd BraggState::density() const {
  return amplitudes_ * amplitudes_.adjoint();
}

bool is_hermitian(const Eigen::Matrix4cd& m, double tol) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

BraggDensity::BraggDensity(const Eigen::Matrix4cd& rho) : rho_(rho) {
  if (!rho.allFinite()) throw std::invalid_argument("density matrix is not finite");
  if (!is_hermitian(rho, 1e-12)) {
    throw std::invalid_argument("density matrix is not Hermitian");
  }
  const Complex tr = rho.trace();
  if (std::abs(tr.real() - 1.0) > 1e-10 || std::abs(tr.imag()) > 1e-12) {
    throw std::invalid_argument("density matrix trace is not 1");
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10) {
    throw std::invalid_argument("density matrix has a negative eigenvalue " +
                                std::to_string(es.eigenvalues().minCoeff()));
  }
}

BraggDensity BraggDensity::pure(const BraggState& state) {
  state.require_normalized();
  return BraggDensity(state.density());
}

BraggDensity BraggDensity::unpolarized(Channel channel) {
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  rho.block<2, 2>(offset(channel), offset(channel)) = 0.5 * Eigen::Matrix2cd::Identity();
  return BraggDensity(rho);
}

Eigen::Matrix2cd BraggDensity::block(Channel row, Channel col) const {
  return rho_.block<2, 2>(offset(row), offset(col));
}

double BraggDensity::population(Channel channel) const {
  return block(channel, channel).trace().real();
}

BlochVector BraggDensity::bloch(Channel channel) const {
  const Eigen::Matrix2cd b = block(channel, channel);
  const double pop = b.trace().real();
  if (pop <= 0.0) return {};
  // Tr(rho sigma_i) for the 2x2 block.
  const double sx = 2.0 * b(1, 0).real();
  const double sy = 2.0 * b(1, 0).imag();
  const double sz = (b(0, 0) - b(1, 1)).real();
  return {sx / pop, sy / pop, sz / pop};
}

}  // namespace spinsplit
