#pragma once

// Truncated momentum-mode lattice: psi(z) = exp(i q z) sum_n c_n exp(i n k z)
// with one Pauli spinor per mode, n in [-N, N]. Because the fields are
// periodic in z with period 2 pi / k, different quasi-momenta q never mix, so
// a wave packet decomposes exactly into independent lattices weighted by its
// momentum distribution.

#include <Eigen/Core>
#include <array>
#include <span>
#include <string>
#include <vector>

#include "spinsplit/fields.hpp"
#include "spinsplit/spinor.hpp"

namespace spinsplit {

/// Which couplings drive the lattice: the exact A^2 and sigma.B harmonics of
/// the laser fields, or the ponderomotive potentials of the Bragg model.
enum class LatticeCoupling { full_field, effective };

class ModeLattice {
 public:
  ModeLattice(int half_width, double wavenumber, double quasi_momentum,
              LatticeCoupling coupling);

  int half_width() const { return half_width_; }
  int modes() const { return 2 * half_width_ + 1; }
  std::size_t dimension() const { return 2 * static_cast<std::size_t>(modes()); }
  double wavenumber() const { return wavenumber_; }
  double quasi_momentum() const { return quasi_momentum_; }
  LatticeCoupling coupling() const { return coupling_; }
  /// Momentum q + n k of mode n.
  double momentum(int n) const { return quasi_momentum_ + n * wavenumber_; }
  /// Index of the up component of mode n; down follows at +1.
  std::size_t index(int n) const { return 2 * static_cast<std::size_t>(n + half_width_); }

  /// out = H(t) in. The spatially uniform part of A^2 is a global phase and
  /// is left out.
  void apply_hamiltonian(std::span<const FieldStage> stages, double t,
                         const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const;

  /// Upper bound on the spectral radius of H for the given stages at full
  /// envelope, used for step-size control.
  double hamiltonian_bound(std::span<const FieldStage> stages) const;

  /// One step of the two-stage Gauss-Legendre collocation method (fourth
  /// order). It conserves the norm exactly up to the stage-solve tolerance.
  void step(Eigen::VectorXcd& c, std::span<const FieldStage> stages, double t,
            double dt) const;

 private:
  struct Couplings {
    // Index m + 4 for harmonic exp(i m k z), m = -4..4.
    std::array<Complex, 9> scalar{};
    std::array<Complex, 9> spin{};  // coefficient of sigma_y
  };
  Couplings couplings(std::span<const FieldStage> stages, double t) const;
  void apply(const Couplings& cp, const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const;

  int half_width_;
  double wavenumber_;
  double quasi_momentum_;
  LatticeCoupling coupling_;
  Eigen::VectorXd kinetic_;
};

/// step_mode_lattice: advance the amplitudes of one lattice by dt.
void step_mode_lattice(const ModeLattice& lattice, Eigen::VectorXcd& amplitudes,
                       std::span<const FieldStage> stages, double t, double dt);

/// One quadrature node of a packet: a lattice plus its weight.
struct LatticeMember {
  ModeLattice lattice;
  double weight = 1.0;
  Eigen::VectorXcd amplitudes;
};

/// Plane-wave decomposition of a Gaussian packet onto mode lattices using
/// Gauss-Hermite nodes of its momentum distribution. One node places a single
/// plane wave at the central momentum.
struct LatticeEnsemble {
  std::vector<LatticeMember> members;

  static LatticeEnsemble from_packet(double central_momentum, double momentum_width,
                                     const Spinor& spin, int half_width,
                                     double wavenumber, int nodes,
                                     LatticeCoupling coupling);

  double norm() const;
  /// sum_j w_j <c_j|sigma_y|c_j>
  double sigma_y_moment() const;
  /// Largest weighted population sitting in the outermost modes.
  double edge_population() const;
};

/// Gauss-Hermite nodes and weights for weight function exp(-x^2).
void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace spinsplit
