#pragma once

// Independent reference constructions used by the unit and acceptance tests.

#include <Eigen/Core>
#include <cmath>
#include <complex>

namespace oracle {

using C = std::complex<double>;

/// Matrix exponential by scaling and squaring of a Taylor series.
inline Eigen::Matrix4cd expm(const Eigen::Matrix4cd& a) {
  int squarings = 0;
  double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  while (norm > 0.05) {
    norm *= 0.5;
    ++squarings;
  }
  const Eigen::Matrix4cd x = a / std::pow(2.0, squarings);
  Eigen::Matrix4cd term = Eigen::Matrix4cd::Identity();
  Eigen::Matrix4cd sum = Eigen::Matrix4cd::Identity();
  for (int n = 1; n < 30; ++n) {
    term = term * x / double(n);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

inline Eigen::Matrix2cd sigma_y() {
  Eigen::Matrix2cd s;
  s << 0.0, C(0, -1), C(0, 1), 0.0;
  return s;
}

/// [[0, e^{-i chi}], [e^{i chi}, 0]] (x) 1
inline Eigen::Matrix4cd mono_block(double chi) {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m.block<2, 2>(0, 2) = std::polar(1.0, -chi) * Eigen::Matrix2cd::Identity();
  m.block<2, 2>(2, 0) = std::polar(1.0, chi) * Eigen::Matrix2cd::Identity();
  return m;
}

/// i [[0, -sigma_y], [sigma_y, 0]]
inline Eigen::Matrix4cd bichromatic_block() {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m.block<2, 2>(0, 2) = -C(0, 1) * sigma_y();
  m.block<2, 2>(2, 0) = C(0, 1) * sigma_y();
  return m;
}

/// Total evolution at chi = pi/2: (1/2) [[-1 - sy, -1 + sy], [1 - sy, -1 - sy]].
inline Eigen::Matrix4cd spin_filter() {
  const Eigen::Matrix2cd one = Eigen::Matrix2cd::Identity();
  const Eigen::Matrix2cd sy = sigma_y();
  Eigen::Matrix4cd u;
  u << -one - sy, -one + sy, one - sy, -one - sy;
  return 0.5 * u;
}

/// Unpolarized ensemble after the spin filter: (1/4) diag(1 - sy, 1 + sy).
inline Eigen::Matrix4cd unpolarized_output() {
  const Eigen::Matrix2cd one = Eigen::Matrix2cd::Identity();
  Eigen::Matrix4cd r = Eigen::Matrix4cd::Zero();
  r.block<2, 2>(0, 0) = one - sigma_y();
  r.block<2, 2>(2, 2) = one + sigma_y();
  return 0.25 * r;
}

}  // namespace oracle
