#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "spinsplit/analysis.hpp"
#include "spinsplit/units.hpp"

using namespace spinsplit;
using doctest::Approx;

namespace {

constexpr double kK = 200.0;

// a |+2k, s1> + b |-2k, s2> with Gaussian envelopes
SpinorWavefunction two_channel_state(const SpatialGrid& g, double a, const Spinor& s1, double b,
                                     const Spinor& s2) {
  auto psi = gaussian_packet(g, 0.0, 2.0, 2 * kK, s1);
  const auto other = gaussian_packet(g, 0.0, 2.0, -2 * kK, s2);
  auto d = psi.data();
  const auto o = other.data();
  for (std::size_t j = 0; j < d.size(); ++j) d[j] = a * d[j] + b * o[j];
  return psi;
}

}  // namespace

TEST_CASE("channel populations and spin content") {
  const SpatialGrid g(40.0, 32768, 0.0, kK);
  const double a = std::sqrt(0.3), b = std::sqrt(0.7);
  const auto psi = two_channel_state(g, a, spin::plus_y(), b, spin::minus_y());
  const auto r = channel_report(psi, kK);
  CHECK(r.population_plus == Approx(0.3).epsilon(1e-9));
  CHECK(r.population_minus == Approx(0.7).epsilon(1e-9));
  CHECK(r.unassigned == Approx(0.0).epsilon(1e-9));
  CHECK(r.bloch_plus.y == Approx(1.0).epsilon(1e-9));
  CHECK(r.bloch_minus.y == Approx(-1.0).epsilon(1e-9));
  CHECK(polarization_degree(r, Channel::plus) == Approx(1.0).epsilon(1e-9));
  // channels with orthogonal spins: entanglement is the binary entropy of 0.3
  const double h = -(0.3 * std::log2(0.3) + 0.7 * std::log2(0.7));
  CHECK(spin_momentum_entanglement(r) == Approx(h).epsilon(1e-8));
  CHECK(spin_momentum_entanglement(psi, kK) == Approx(h).epsilon(1e-8));

  const auto same = two_channel_state(g, a, spin::up(), b, spin::up());
  CHECK(spin_momentum_entanglement(same, kK) == Approx(0.0).epsilon(1e-8));

  CHECK_THROWS_AS(channel_report(psi, kK, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(channel_report(psi, kK, 2.5 * kK), std::invalid_argument);

  const auto only_plus = gaussian_packet(g, 0.0, 2.0, 2 * kK, spin::up());
  CHECK_THROWS_AS(polarization_degree(channel_report(only_plus, kK), Channel::minus),
                  std::domain_error);
}

TEST_CASE("mode lattice report") {
  const auto ens = LatticeEnsemble::from_packet(2 * kK, 0.5, spin::minus_y(), 8, kK, 5,
                                                LatticeCoupling::effective);
  const auto r = channel_report(ens, kK, kK);
  CHECK(r.population_plus == Approx(1.0).epsilon(1e-12));
  CHECK(r.bloch_plus.y == Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("mixing reports") {
  ChannelReport up, down;
  up.population_plus = 1.0;
  up.bloch_plus = {0.0, 1.0, 0.0};
  up.norm = 1.0;
  down.population_minus = 1.0;
  down.bloch_minus = {0.0, -1.0, 0.0};
  down.norm = 1.0;
  const std::vector<ChannelReport> reports{up, down};
  const std::vector<double> w{0.5, 0.5};
  const auto m = mix_reports(reports, w);
  CHECK(m.population_plus == Approx(0.5));
  CHECK(m.population_minus == Approx(0.5));
  CHECK(m.bloch_plus.y == Approx(1.0));
  CHECK(m.bloch_minus.y == Approx(-1.0));

  ChannelReport same = up;
  same.bloch_plus = {0.0, -1.0, 0.0};
  const std::vector<ChannelReport> opposite{up, same};
  CHECK(mix_reports(opposite, w).bloch_plus.length() == Approx(0.0));
}

TEST_CASE("spin entropy") {
  CHECK(spin_entropy(0.5 * Eigen::Matrix2cd::Identity()) == Approx(1.0));
  const Spinor s = spin::plus_y();
  CHECK(spin_entropy(s * s.adjoint()) == Approx(0.0).epsilon(1e-12));
  Eigen::Matrix2cd d = Eigen::Matrix2cd::Zero();
  d(0, 0) = 0.75;
  d(1, 1) = 0.25;
  CHECK(spin_entropy(d) == Approx(-(0.75 * std::log2(0.75) + 0.25 * std::log2(0.25))));
}

TEST_CASE("Rabi fit recovers frequency, visibility and phase") {
  const double omega = 0.037, v = 0.93, phase = 0.21;
  std::vector<double> t, p;
  for (int i = 0; i < 200; ++i) {
    t.push_back(2.0 * i);
    const double s = std::sin(0.5 * omega * t.back() + phase);
    p.push_back(v * s * s);
  }
  const auto fit = fit_rabi(t, p);
  CHECK(fit.omega == Approx(omega).epsilon(1e-8));
  CHECK(fit.visibility == Approx(v).epsilon(1e-8));
  CHECK(fit.rms_residual < 1e-10);
  CHECK(fit.detuning == Approx(omega * std::sqrt(1.0 - v)).epsilon(1e-6));

  std::vector<double> flat(t.size(), 0.25);
  CHECK_THROWS(fit_rabi(t, flat));
  CHECK_THROWS(fit_rabi(std::span(t).first(4), std::span(p).first(4)));
}
