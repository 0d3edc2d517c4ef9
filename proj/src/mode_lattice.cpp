#include "spinsplit/mode_lattice.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "spinsplit/analytic.hpp"
#include "spinsplit/units.hpp"

namespace spinsplit {
namespace {

constexpr Complex I{0.0, 1.0};

// Two-stage Gauss-Legendre tableau.
const double kSqrt3 = std::sqrt(3.0);
const double kC1 = 0.5 - kSqrt3 / 6.0;
const double kC2 = 0.5 + kSqrt3 / 6.0;
const double kA11 = 0.25;
const double kA12 = 0.25 - kSqrt3 / 6.0;
const double kA21 = 0.25 + kSqrt3 / 6.0;
const double kA22 = 0.25;

constexpr int kMaxIterations = 200;

}  // namespace

ModeLattice::ModeLattice(int half_width, double wavenumber, double quasi_momentum,
                         LatticeCoupling coupling)
    : half_width_(half_width),
      wavenumber_(wavenumber),
      quasi_momentum_(quasi_momentum),
      coupling_(coupling) {
  if (half_width < 2) throw std::invalid_argument("mode lattice half-width must be >= 2");
  if (!(wavenumber > 0.0)) throw std::invalid_argument("mode lattice wavenumber must be positive");
  kinetic_.resize(static_cast<Eigen::Index>(dimension()));
  for (int n = -half_width_; n <= half_width_; ++n) {
    const double p = momentum(n);
    const double e = p * p / (2.0 * units::electron_rest_energy);
    kinetic_(static_cast<Eigen::Index>(index(n))) = e;
    kinetic_(static_cast<Eigen::Index>(index(n) + 1)) = e;
  }
}

ModeLattice::Couplings ModeLattice::couplings(std::span<const FieldStage> stages,
                                              double t) const {
  Couplings cp;
  const double two_m = 2.0 * units::electron_rest_energy;
  if (coupling_ == LatticeCoupling::full_field) {
    std::array<Complex, 5> u{};
    bool any = false;
    for (const auto& st : stages) {
      if (st.envelope_at(t) == 0.0) continue;
      const auto h = vector_potential_harmonics(st, t);
      for (int i = 0; i < 5; ++i) u[i] += h[i];
      any = true;
    }
    if (!any) return cp;
    for (int m1 = -2; m1 <= 2; ++m1) {
      for (int m2 = -2; m2 <= 2; ++m2) {
        const int m = m1 + m2;
        if (m == 0) continue;  // uniform part: global phase
        cp.scalar[m + 4] += u[m1 + 2] * u[m2 + 2] / two_m;
      }
    }
    for (int m = -2; m <= 2; ++m) {
      cp.spin[m + 4] = I * static_cast<double>(m) * wavenumber_ * u[m + 2] / two_m;
    }
  } else {
    for (const auto& st : stages) {
      const double f = st.envelope_at(t);
      if (f == 0.0) continue;
      const double v = st.rabi_frequency() * std::pow(f, st.envelope_power());
      if (const auto* mono = std::get_if<MonoStandingWave>(&st.wave())) {
        cp.scalar[8] += 0.5 * v * std::polar(1.0, mono->chi);
        cp.scalar[0] += 0.5 * v * std::polar(1.0, -mono->chi);
      } else {
        cp.spin[8] += 0.5 * I * v;
        cp.spin[0] += -0.5 * I * v;
      }
    }
  }
  return cp;
}

void ModeLattice::apply(const Couplings& cp, const Eigen::VectorXcd& in,
                        Eigen::VectorXcd& out) const {
  out = kinetic_.cast<Complex>().cwiseProduct(in);
  const int nmax = half_width_;
  for (int m = -4; m <= 4; ++m) {
    const Complex s = cp.scalar[m + 4];
    const Complex p = cp.spin[m + 4];
    if (s == Complex{} && p == Complex{}) continue;
    const int lo = std::max(-nmax, -nmax + m);
    const int hi = std::min(nmax, nmax + m);
    for (int n = lo; n <= hi; ++n) {
      const auto src = static_cast<Eigen::Index>(index(n - m));
      const auto dst = static_cast<Eigen::Index>(index(n));
      const Complex a = in(src);
      const Complex b = in(src + 1);
      // s * (a, b) + p * sigma_y (a, b), sigma_y (a, b) = (-i b, i a)
      out(dst) += s * a - I * p * b;
      out(dst + 1) += s * b + I * p * a;
    }
  }
}

void ModeLattice::apply_hamiltonian(std::span<const FieldStage> stages, double t,
                                    const Eigen::VectorXcd& in,
                                    Eigen::VectorXcd& out) const {
  apply(couplings(stages, t), in, out);
}

double ModeLattice::hamiltonian_bound(std::span<const FieldStage> stages) const {
  double kin = kinetic_.cwiseAbs().maxCoeff();
  double coupling = 0.0;
  const double two_m = 2.0 * units::electron_rest_energy;
  if (coupling_ == LatticeCoupling::full_field) {
    double amp = 0.0;
    for (const auto& st : stages) {
      if (const auto* mono = std::get_if<MonoStandingWave>(&st.wave())) {
        amp += mono->standing_amplitude();
      } else {
        const auto& w = std::get<BichromaticWave>(st.wave());
        amp += w.amplitude1 + w.amplitude2;
      }
    }
    // |A^2| <= amp^2 and |dA/dz| <= 2 k amp pointwise.
    coupling = amp * amp / two_m + 2.0 * wavenumber_ * amp / two_m;
  } else {
    for (const auto& st : stages) coupling += st.rabi_frequency();
  }
  return kin + coupling;
}

void ModeLattice::step(Eigen::VectorXcd& c, std::span<const FieldStage> stages, double t,
                       double dt) const {
  const Couplings cp1 = couplings(stages, t + kC1 * dt);
  const Couplings cp2 = couplings(stages, t + kC2 * dt);

  Eigen::VectorXcd k1, k2, y1, y2, n1, n2;
  apply(cp1, c, k1);
  apply(cp2, c, k2);
  k1 *= -I;
  k2 *= -I;
  const double scale = c.norm() + 1e-300;
  double previous = std::numeric_limits<double>::infinity();
  for (int it = 0;; ++it) {
    y1 = c + dt * (kA11 * k1 + kA12 * k2);
    y2 = c + dt * (kA21 * k1 + kA22 * k2);
    apply(cp1, y1, n1);
    apply(cp2, y2, n2);
    n1 *= -I;
    n2 *= -I;
    const double change = std::max((n1 - k1).norm(), (n2 - k2).norm()) * dt;
    k1.swap(n1);
    k2.swap(n2);
    if (change <= 1e-15 * scale) break;
    // Stagnation at rounding level.
    if (it > 4 && change >= previous && change < 1e-12 * scale) break;
    previous = change;
    if (it >= kMaxIterations) {
      throw std::runtime_error(
          "mode lattice: Gauss-Legendre stage iteration did not converge; reduce dt");
    }
  }
  c += 0.5 * dt * (k1 + k2);
}

void step_mode_lattice(const ModeLattice& lattice, Eigen::VectorXcd& amplitudes,
                       std::span<const FieldStage> stages, double t, double dt) {
  lattice.step(amplitudes, stages, t, dt);
}

void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("Gauss-Hermite order must be >= 1");
  // Golub-Welsch: eigen-decomposition of the symmetric Jacobi matrix.
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    j(i, i - 1) = j(i - 1, i) = std::sqrt(0.5 * i);
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  nodes.resize(static_cast<std::size_t>(n));
  weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    nodes[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    weights[static_cast<std::size_t>(i)] = std::sqrt(units::pi) * v0 * v0;
  }
}

LatticeEnsemble LatticeEnsemble::from_packet(double central_momentum, double momentum_width,
                                             const Spinor& spin, int half_width,
                                             double wavenumber, int nodes,
                                             LatticeCoupling coupling) {
  std::vector<double> x, w;
  if (nodes == 1) {
    x = {0.0};
    w = {std::sqrt(units::pi)};
  } else {
    gauss_hermite(nodes, x, w);
  }
  const Spinor s = spin.normalized();
  LatticeEnsemble ens;
  for (std::size_t i = 0; i < x.size(); ++i) {
    // |phi(p)|^2 ~ exp(-(p - p0)^2 / (2 sigma_p^2)), so p = p0 + sqrt(2) sigma_p x.
    const double p = central_momentum + std::sqrt(2.0) * momentum_width * x[i];
    const int n0 = static_cast<int>(std::lround(p / wavenumber));
    const double q = p - n0 * wavenumber;
    if (std::abs(n0) > half_width - 2) {
      throw std::invalid_argument("packet momentum lies outside the mode lattice");
    }
    ModeLattice lat(half_width, wavenumber, q, coupling);
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(lat.dimension()));
    const auto idx = static_cast<Eigen::Index>(lat.index(n0));
    c(idx) = s(0);
    c(idx + 1) = s(1);
    ens.members.push_back({lat, w[i] / std::sqrt(units::pi), std::move(c)});
  }
  return ens;
}

double LatticeEnsemble::norm() const {
  double s = 0.0;
  for (const auto& m : members) s += m.weight * m.amplitudes.squaredNorm();
  return s;
}

double LatticeEnsemble::sigma_y_moment() const {
  double s = 0.0;
  for (const auto& m : members) {
    const auto& c = m.amplitudes;
    for (Eigen::Index i = 0; i < c.size(); i += 2) {
      s += m.weight * 2.0 * (std::conj(c(i)) * c(i + 1)).imag();
    }
  }
  return s;
}

double LatticeEnsemble::edge_population() const {
  double worst = 0.0;
  for (const auto& m : members) {
    const int n = m.lattice.half_width();
    const auto lo = static_cast<Eigen::Index>(m.lattice.index(-n));
    const auto hi = static_cast<Eigen::Index>(m.lattice.index(n));
    const double pop = m.amplitudes.segment(lo, 2).squaredNorm() +
                       m.amplitudes.segment(hi, 2).squaredNorm();
    worst = std::max(worst, pop);
  }
  return worst;
}

}  // namespace spinsplit
