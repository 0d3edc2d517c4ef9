#include "spinsplit/analysis.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unsupported/Eigen/NonLinearOptimization>

#include "spinsplit/units.hpp"

namespace spinsplit {
namespace {

constexpr Complex I{0.0, 1.0};

// Accumulates |up|^2, |down|^2 and up* down for one channel.
struct Accumulator {
  double uu = 0.0;
  double dd = 0.0;
  Complex ud{};

  void add(Complex a, Complex b, double w) {
    uu += w * std::norm(a);
    dd += w * std::norm(b);
    ud += w * std::conj(a) * b;
  }
  double population() const { return uu + dd; }
  BlochVector bloch() const {
    const double n = population();
    if (n <= 0.0) return {};
    return {2.0 * ud.real() / n, 2.0 * ud.imag() / n, (uu - dd) / n};
  }
};

enum class Bin { minus, plus, none };

Bin classify(double p, double k, double half_width) {
  if (std::abs(p - 2.0 * k) <= half_width) return Bin::plus;
  if (std::abs(p + 2.0 * k) <= half_width) return Bin::minus;
  return Bin::none;
}

void check_bins(double k, double half_width) {
  if (!(k > 0.0)) throw std::invalid_argument("channel_report: wavenumber must be positive");
  if (!(half_width > 0.0) || half_width >= 2.0 * k) {
    throw std::invalid_argument("channel_report: bin half-width must lie in (0, 2k)");
  }
}

ChannelReport finish(const Accumulator& plus, const Accumulator& minus, double total) {
  if (!(total > 0.0)) throw std::invalid_argument("channel_report: zero-norm state");
  ChannelReport r;
  r.norm = total;
  r.population_plus = plus.population() / total;
  r.population_minus = minus.population() / total;
  r.unassigned = std::max(0.0, 1.0 - r.population_plus - r.population_minus);
  r.bloch_plus = plus.bloch();
  r.bloch_minus = minus.bloch();
  return r;
}

Eigen::Matrix2cd bloch_density(const BlochVector& b) {
  Eigen::Matrix2cd rho;
  rho << 1.0 + b.z, b.x - I * b.y, b.x + I * b.y, 1.0 - b.z;
  return 0.5 * rho;
}

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

// Residuals of P = v sin^2(omega t / 2 + phase) for the LM solver.
struct RabiResidual {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  std::span<const double> t;
  std::span<const double> y;

  int inputs() const { return 3; }
  int values() const { return static_cast<int>(t.size()); }

  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& f) const {
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double s = std::sin(0.5 * x(0) * t[i] + x(2));
      f(static_cast<Eigen::Index>(i)) = x(1) * s * s - y[i];
    }
    return 0;
  }
  int df(const Eigen::VectorXd& x, Eigen::MatrixXd& j) const {
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double arg = 0.5 * x(0) * t[i] + x(2);
      const double s = std::sin(arg);
      const double sc = std::sin(2.0 * arg);  // d/darg sin^2 = sin(2 arg)
      const auto r = static_cast<Eigen::Index>(i);
      j(r, 0) = x(1) * sc * 0.5 * t[i];
      j(r, 1) = s * s;
      j(r, 2) = x(1) * sc;
    }
    return 0;
  }
};

}  // namespace

Eigen::Matrix2cd ChannelReport::spin_density() const {
  const double total = population_plus + population_minus;
  if (!(total > 0.0)) throw std::invalid_argument("spin_density: both channels are empty");
  return (population_plus * bloch_density(bloch_plus) +
          population_minus * bloch_density(bloch_minus)) /
         total;
}

ChannelReport channel_report(const SpinorWavefunction& psi, double wavenumber) {
  return channel_report(psi, wavenumber, wavenumber);
}

ChannelReport channel_report(const SpinorWavefunction& psi, double wavenumber,
                             double half_width) {
  return channel_report(MomentumAmplitudes(psi), wavenumber, half_width);
}

ChannelReport channel_report(const MomentumAmplitudes& phi, double wavenumber,
                             double half_width) {
  check_bins(wavenumber, half_width);
  Accumulator plus, minus;
  double total = 0.0;
  const auto up = phi.up();
  const auto down = phi.down();
  const double dp = phi.grid().momentum_spacing();
  for (std::size_t j = 0; j < up.size(); ++j) {
    total += dp * (std::norm(up[j]) + std::norm(down[j]));
    switch (classify(phi.momentum(j), wavenumber, half_width)) {
      case Bin::plus: plus.add(up[j], down[j], dp); break;
      case Bin::minus: minus.add(up[j], down[j], dp); break;
      case Bin::none: break;
    }
  }
  return finish(plus, minus, total);
}

ChannelReport channel_report(const LatticeEnsemble& ensemble, double wavenumber,
                             double half_width) {
  check_bins(wavenumber, half_width);
  Accumulator plus, minus;
  double total = 0.0;
  for (const auto& m : ensemble.members) {
    const int nmax = m.lattice.half_width();
    for (int n = -nmax; n <= nmax; ++n) {
      const auto i = static_cast<Eigen::Index>(m.lattice.index(n));
      const Complex a = m.amplitudes(i);
      const Complex b = m.amplitudes(i + 1);
      total += m.weight * (std::norm(a) + std::norm(b));
      switch (classify(m.lattice.momentum(n), wavenumber, half_width)) {
        case Bin::plus: plus.add(a, b, m.weight); break;
        case Bin::minus: minus.add(a, b, m.weight); break;
        case Bin::none: break;
      }
    }
  }
  return finish(plus, minus, total);
}

ChannelReport mix_reports(std::span<const ChannelReport> reports,
                          std::span<const double> weights) {
  if (reports.empty() || reports.size() != weights.size()) {
    throw std::invalid_argument("mix_reports: need one weight per report");
  }
  double wsum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("mix_reports: negative weight");
    wsum += w;
  }
  if (!(wsum > 0.0)) throw std::invalid_argument("mix_reports: weights sum to zero");

  ChannelReport out;
  BlochVector bp, bm;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    const double w = weights[i] / wsum;
    out.population_plus += w * r.population_plus;
    out.population_minus += w * r.population_minus;
    out.unassigned += w * r.unassigned;
    out.norm += w * r.norm;
    bp.x += w * r.population_plus * r.bloch_plus.x;
    bp.y += w * r.population_plus * r.bloch_plus.y;
    bp.z += w * r.population_plus * r.bloch_plus.z;
    bm.x += w * r.population_minus * r.bloch_minus.x;
    bm.y += w * r.population_minus * r.bloch_minus.y;
    bm.z += w * r.population_minus * r.bloch_minus.z;
  }
  auto scale = [](BlochVector b, double pop) {
    if (pop <= 0.0) return BlochVector{};
    return BlochVector{b.x / pop, b.y / pop, b.z / pop};
  };
  out.bloch_plus = scale(bp, out.population_plus);
  out.bloch_minus = scale(bm, out.population_minus);
  return out;
}

double polarization_degree(const ChannelReport& report, Channel channel) {
  if (report.population(channel) < 1e-6) {
    throw std::domain_error("polarization_degree: channel population below 1e-6");
  }
  return std::abs(report.bloch(channel).y);
}

RabiFit fit_rabi(std::span<const double> times, std::span<const double> populations) {
  if (times.size() != populations.size()) {
    throw std::invalid_argument("fit_rabi: times and populations differ in length");
  }
  const std::size_t n = times.size();
  if (n < 8) throw std::invalid_argument("fit_rabi: need at least 8 samples");
  const auto [tmin_it, tmax_it] = std::minmax_element(times.begin(), times.end());
  const double span = *tmax_it - *tmin_it;
  if (!(span > 0.0)) throw std::invalid_argument("fit_rabi: zero time span");
  const auto [pmin_it, pmax_it] = std::minmax_element(populations.begin(), populations.end());
  if (*pmax_it - *pmin_it < 1e-3) {
    throw std::invalid_argument("fit_rabi: trace does not oscillate");
  }

  // Coarse scan: P = c0 + c1 cos(w t) + c2 sin(w t) is linear for fixed w.
  const double w_lo = units::pi / span;
  const double w_hi = units::pi * static_cast<double>(n - 1) / span;  // Nyquist
  const int scan = std::max(400, static_cast<int>(20.0 * w_hi / w_lo));
  Eigen::MatrixXd a(static_cast<Eigen::Index>(n), 3);
  Eigen::VectorXd y(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) y(static_cast<Eigen::Index>(i)) = populations[i];
  double best_res = std::numeric_limits<double>::infinity();
  double best_w = w_lo;
  Eigen::Vector3d best_c = Eigen::Vector3d::Zero();
  for (int s = 0; s <= scan; ++s) {
    const double w = w_lo * std::pow(w_hi / w_lo, static_cast<double>(s) / scan);
    for (std::size_t i = 0; i < n; ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      a(r, 0) = 1.0;
      a(r, 1) = std::cos(w * times[i]);
      a(r, 2) = std::sin(w * times[i]);
    }
    const Eigen::Vector3d c = a.colPivHouseholderQr().solve(y);
    const double res = (a * c - y).squaredNorm();
    if (res < best_res) {
      best_res = res;
      best_w = w;
      best_c = c;
    }
  }
  // v sin^2(x) = v/2 - v/2 cos(2x), with 2x = w t + 2 phase.
  const double amp = std::hypot(best_c(1), best_c(2));
  Eigen::VectorXd x(3);
  x << best_w, 2.0 * amp, 0.5 * std::atan2(best_c(2), -best_c(1));

  RabiResidual functor{times, populations};
  Eigen::LevenbergMarquardt<RabiResidual> lm(functor);
  lm.parameters.xtol = 1e-14;
  lm.parameters.ftol = 1e-14;
  lm.parameters.maxfev = 2000;
  lm.minimize(x);

  RabiFit fit;
  fit.omega = std::abs(x(0));
  fit.visibility = x(1);
  double phase = x(0) < 0.0 ? -x(2) : x(2);
  if (fit.visibility < 0.0) {
    // -v sin^2(a) = -v + v cos^2(a) is not of the model form; refit sign.
    throw std::runtime_error("fit_rabi: fit converged to negative visibility");
  }
  phase = std::remainder(phase, units::pi);
  fit.phase = phase;
  fit.detuning = fit.omega * std::sqrt(std::max(0.0, 1.0 - std::min(fit.visibility, 1.0)));
  Eigen::VectorXd f(static_cast<Eigen::Index>(n));
  functor(x, f);
  fit.rms_residual = std::sqrt(f.squaredNorm() / static_cast<double>(n));
  return fit;
}

double spin_entropy(const Eigen::Matrix2cd& rho) {
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(rho);
  const double tr = es.eigenvalues().sum();
  if (!(tr > 0.0)) throw std::invalid_argument("spin_entropy: zero trace");
  return binary_entropy(std::clamp(es.eigenvalues()(0) / tr, 0.0, 1.0));
}

double spin_momentum_entanglement(const BraggState& state) {
  state.require_normalized();
  const Spinor m = state.block(Channel::minus);
  const Spinor p = state.block(Channel::plus);
  const Eigen::Matrix2cd rho = m * m.adjoint() + p * p.adjoint();
  return spin_entropy(rho);
}

double spin_momentum_entanglement(const BraggDensity& rho) {
  const double purity = (rho.matrix() * rho.matrix()).trace().real();
  if (purity < 1.0 - 1e-10) {
    throw std::invalid_argument(
        "spin_momentum_entanglement: state is mixed; entropy is not an entanglement measure");
  }
  const Eigen::Matrix2cd reduced =
      rho.block(Channel::minus, Channel::minus) + rho.block(Channel::plus, Channel::plus);
  return spin_entropy(reduced);
}

double spin_momentum_entanglement(const ChannelReport& report) {
  return spin_entropy(report.spin_density());
}

double spin_momentum_entanglement(const SpinorWavefunction& psi, double wavenumber) {
  return spin_momentum_entanglement(channel_report(psi, wavenumber));
}

}  // namespace spinsplit
