#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "small_sincos.hpp"
#include "spinsplit/analytic.hpp"
#include "spinsplit/pauli_solver.hpp"
#include "spinsplit/units.hpp"

using namespace spinsplit;
using doctest::Approx;

namespace {

constexpr double kM = units::electron_rest_energy;
// Desk-scale parameters: hbar*w = 3.2 keV, Omega = w / 200.
constexpr double kK = 3200.0;
constexpr double kRabi = kK / 200.0;

double mono_amplitude_for(double rabi) { return 0.5 * std::sqrt(8.0 * kM * rabi); }
double bi_amplitude_for(double rabi) { return std::cbrt(2.0 * rabi * kM * kM * kM / kK); }

FieldStage scaled_mono(double area, double chi = 0.0, double start = 0.0) {
  const double edge = units::from_as(10.0);
  const double plateau = area / kRabi - 0.75 * edge;
  return FieldStage("m", MonoStandingWave{mono_amplitude_for(kRabi), kK, chi,
                                          AmplitudeConvention::traveling,
                                          Envelope{edge, plateau, edge}, start});
}

FieldStage scaled_bi(double area, double start = 0.0) {
  const double edge = units::from_as(10.0);
  const double a = bi_amplitude_for(kRabi);
  const double plateau = area / kRabi - 0.625 * edge;
  return FieldStage("b", BichromaticWave{a, a, kK, Envelope{edge, plateau, edge}, start});
}

Scenario scaled_scenario(std::vector<FieldStage> stages, Backend backend,
                         const Spinor& spin = spin::up()) {
  Scenario s;
  s.name = "test";
  s.electron = PacketSpec{0.0, units::from_nm(2.5), 2.0 * kK, spin};
  s.grid = SpatialGrid(units::from_nm(78.93), 4096, 0.0, kK);
  s.stages = std::move(stages);
  double end = 0.0;
  for (const auto& st : s.stages) end = std::max(end, st.end());
  s.duration = end;
  s.config.backend = backend;
  s.config.mode_half_width = 12;
  s.config.snapshot_every = units::from_as(5.0);
  return s;
}

}  // namespace

TEST_CASE("polynomial sincos agrees with libm") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-kSmallSinCosRange, kSmallSinCosRange);
  double worst = 0.0;
  for (int i = 0; i < 200000; ++i) {
    const double x = dist(rng);
    double s, c;
    small_sincos(x, s, c);
    worst = std::max({worst, std::abs(s - std::sin(x)), std::abs(c - std::cos(x))});
  }
  CHECK(worst < 1e-15);
}

TEST_CASE("free Gaussian spreading") {
  Scenario s;
  s.electron = PacketSpec{0.0, units::from_um(0.01), 400.0, spin::up()};
  s.grid = SpatialGrid(units::from_um(3.0), 16384);
  s.duration = units::from_fs(500.0);
  s.config.backend = Backend::full_field;
  s.config.snapshot_every = units::from_fs(100.0);
  const auto r = run_scenario(s);
  REQUIRE(r.final_state);
  const double s0 = s.electron.width;
  const double tau = s.duration / (2.0 * kM * s0 * s0);
  const double expected = s0 * s0 * (1.0 + tau * tau);
  CHECK(tau > 0.2);  // the packet spreads noticeably
  CHECK(position_variance(*r.final_state) == Approx(expected).epsilon(1e-6));
  CHECK(position_expectation(*r.final_state) ==
        Approx(400.0 / kM * s.duration).epsilon(1e-9));
  CHECK(r.max_norm_drift < 1e-12);
}

TEST_CASE("effective backend: mono pulses") {
  SUBCASE("pi pulse transfers the population") {
    const auto r = run_scenario(scaled_scenario({scaled_mono(units::pi)}, Backend::effective));
    CHECK(r.series.back().report.population_minus > 0.99);
  }
  SUBCASE("pi/2 pulse splits 50/50 and leaves the spin alone") {
    const auto r = run_scenario(
        scaled_scenario({scaled_mono(units::pi / 2)}, Backend::effective, spin::plus_y()));
    const auto& rep = r.series.back().report;
    CHECK(rep.population_plus == Approx(0.5).epsilon(0.01));
    CHECK(rep.population_minus == Approx(0.5).epsilon(0.01));
    CHECK(rep.bloch_plus.y == Approx(1.0).epsilon(1e-9));
    CHECK(rep.bloch_minus.y == Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("effective backend: bichromatic pi pulse flips spin on reflection") {
  const auto r = run_scenario(scaled_scenario({scaled_bi(units::pi)}, Backend::effective));
  const auto& rep = r.series.back().report;
  CHECK(rep.population_minus > 0.99);
  CHECK(rep.bloch_minus.z == Approx(-1.0).epsilon(1e-3));
  CHECK(r.max_sigma_y_drift < 1e-8);
  CHECK(r.max_norm_drift < 1e-8);
}

TEST_CASE("full-field bichromatic stage at reference intensity conserves sigma_y") {
  Scenario s;
  s.electron = PacketSpec{0.0, units::from_um(0.05), 400.0, spin::up()};
  s.grid = SpatialGrid(units::from_um(0.75), 4096, 0.0, 200.0);
  s.stages.push_back(FieldStage(
      "b", BichromaticWave{2.35e4, 2.35e4, 200.0,
                           Envelope{units::from_fs(2.0), units::from_fs(3.0), units::from_fs(2.0)},
                           0.0}));
  s.duration = s.stages.back().end();
  s.config.backend = Backend::full_field;
  const auto r = run_scenario(s);
  CHECK(r.max_norm_drift < 1e-8);
  CHECK(r.max_sigma_y_drift < 1e-8);
}

TEST_CASE("timestep convergence of the full-field backend") {
  auto s = scaled_scenario({scaled_mono(units::pi / 2)}, Backend::full_field);
  const auto coarse = run_scenario(s);
  s.config.timestep = 0.5 * coarse.dt;
  const auto fine = run_scenario(s);
  CHECK(std::abs(coarse.series.back().report.population_minus -
                 fine.series.back().report.population_minus) < 1e-4);
}

TEST_CASE("time reversal returns the initial state") {
  const auto s = scaled_scenario({}, Backend::effective);
  const auto first = scaled_bi(units::pi / 2);
  const std::vector<FieldStage> stages{first, scaled_mono(units::pi, 0.4, first.end())};
  const double duration = stages[1].end();
  const std::size_t n = 800;
  const double dt = duration / n;
  const auto psi0 = gaussian_packet(s.grid, 0.0, s.electron.width, 2 * kK, spin::up());
  auto psi = psi0;
  SplitStepPropagator(s.grid, stages, Backend::effective, dt).advance(psi, 0.0, n);
  for (auto& v : psi.data()) v = std::conj(v);
  SplitStepPropagator(s.grid, stages, Backend::effective, dt, {true, duration})
      .advance(psi, 0.0, n);
  Complex overlap = 0.0;
  for (std::size_t j = 0; j < psi.data().size(); ++j) {
    overlap += std::conj(psi0.data()[j]) * std::conj(psi.data()[j]);
  }
  overlap *= s.grid.spacing();
  CHECK(std::norm(overlap) > 1.0 - 1e-6);
}

TEST_CASE("two-mode lattice reproduces the analytic Rabi dynamics") {
  const auto st = scaled_mono(units::pi / 2, 0.3);
  const std::vector<FieldStage> stages{st};
  const ModeLattice lat(2, kK, 0.0, LatticeCoupling::effective);
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(lat.dimension());
  c[lat.index(2)] = 1.0;
  const std::size_t n = 4000;
  const double dt = st.end() / n;
  for (std::size_t i = 0; i < n; ++i) lat.step(c, stages, i * dt, dt);
  const auto u = stage_unitary(StageKind::monochromatic, st.pulse_area(), 0.3);
  const auto expected = u.apply(BraggState::in_channel(Channel::plus, spin::up()));
  CHECK(std::norm(c[lat.index(-2)]) ==
        Approx(std::norm(expected.amplitudes()[0])).epsilon(1e-8));
  CHECK(std::norm(c[lat.index(2)]) == Approx(std::norm(expected.amplitudes()[2])).epsilon(1e-8));
  CHECK(c.norm() == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("zero field leaves lattice populations constant") {
  const ModeLattice lat(6, kK, 0.1, LatticeCoupling::full_field);
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(lat.dimension());
  c[lat.index(2)] = 0.6;
  c[lat.index(-3) + 1] = 0.8;
  const Eigen::VectorXcd c0 = c;
  for (int i = 0; i < 100; ++i) lat.step(c, {}, i * 1e-3, 1e-3);
  CHECK((c.cwiseAbs() - c0.cwiseAbs()).norm() < 1e-12);
}

TEST_CASE("scenario validation") {
  auto s = scaled_scenario({scaled_mono(units::pi / 2)}, Backend::full_field);
  CHECK_NOTHROW(s.validate());
  CHECK(default_timestep(s) == Approx(units::pi / kK / 64.0));
  CHECK(max_timestep(s) == Approx(units::pi / kK / 40.0));

  auto big = s;
  big.config.timestep = 2.0 * max_timestep(s);
  CHECK_THROWS_AS(big.validate(), std::invalid_argument);

  auto late = s;
  late.duration = 0.5 * s.duration;
  CHECK_THROWS_AS(late.validate(), std::invalid_argument);

  auto lattice = s;
  lattice.config.backend = Backend::mode_lattice;
  lattice.config.mode_half_width = 3;
  CHECK_THROWS_AS(lattice.validate(), std::invalid_argument);

  auto eff = s;
  eff.config.backend = Backend::effective;
  CHECK(max_timestep(eff) == Approx(0.01 / kRabi));

  CHECK(parse_backend("mode_lattice") == Backend::mode_lattice);
  CHECK_THROWS(parse_backend("rk4"));
}
