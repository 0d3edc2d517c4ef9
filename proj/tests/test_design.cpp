#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "spinsplit/analytic.hpp"
#include "spinsplit/design.hpp"

using namespace spinsplit;
using namespace spinsplit::design;
using doctest::Approx;

namespace {

constexpr double kMc2 = 510998.95;           // eV
constexpr double kEps0 = 8.8541878128e-12;   // F/m
constexpr double kC = 299792458.0;           // m/s
constexpr double kHbarC = 197.3269804e-9;    // eV m

// I = eps0 c E^2 / 2 with e E = xi m c^2 k
double intensity_oracle(double xi, double photon_energy) {
  const double k = photon_energy / kHbarC;  // 1/m
  const double e_field = xi * kMc2 * k;     // V/m
  return 0.5 * kEps0 * kC * e_field * e_field * 1e-4;
}

}  // namespace

TEST_CASE("xi and intensity") {
  CHECK(xi_from_amplitude(2.35e4) == Approx(0.04599).epsilon(1e-3));
  CHECK(amplitude_from_xi(xi_from_amplitude(123.0)) == Approx(123.0));
  CHECK(intensity_from_xi(0.046, 200.0) == Approx(intensity_oracle(0.046, 200.0)).epsilon(1e-9));
  CHECK(intensity_from_xi(0.046, 200.0) == Approx(7.6e19).epsilon(0.03));
  CHECK(intensity_from_xi(0.046, 400.0) == Approx(4.0 * intensity_from_xi(0.046, 200.0)));
  CHECK_THROWS(intensity_from_xi(-0.1, 200.0));
}

TEST_CASE("Rabi frequencies from xi agree with the amplitude forms") {
  const double a = 2.35e4;
  CHECK(rabi_frequency_bi_xi(a / kMc2, a / kMc2, 200.0) ==
        Approx(rabi_frequency_bi(a, a, 200.0)).epsilon(1e-12));
  CHECK(rabi_frequency_mono_xi(200.0 / kMc2) == Approx(rabi_frequency_mono(200.0)).epsilon(1e-12));
}

TEST_CASE("geometry, acceptance and tolerances") {
  const double wb = 9.73e-3;
  const auto g = interaction_geometry(wb, 30.0);
  CHECK(g.velocity_over_c == Approx(std::sqrt(60.0 / kMc2)));
  CHECK(g.nonrelativistic);
  const double t_s = 3.14159265358979 / (2.0 * wb) * 6.582119569e-16;
  CHECK(g.interaction_time_fs == Approx(t_s * 1e15).epsilon(1e-9));
  CHECK(g.beam_width_um == Approx(g.velocity_over_c * kC * t_s * 1e6).epsilon(1e-9));

  CHECK(momentum_acceptance(wb, 200.0) == Approx(kMc2 * wb / (4.0 * 200.0 * 200.0)));
  const double xi = 2.35e4 / kMc2;
  CHECK(momentum_acceptance_xi(xi, xi, 200.0) ==
        Approx(momentum_acceptance(rabi_frequency_bi(2.35e4, 2.35e4, 200.0), 200.0)).epsilon(1e-12));

  CHECK(scatter_probability_uncertainty(0.01, 0.02) == Approx(1.5707963267948966 * 0.03));
  CHECK(no_flip_rabi(4.0, 200.0, wb) == Approx(2.5 * 4.0 / 200.0 * wb));
  CHECK(no_flip_rabi(0.0, 200.0, wb) == 0.0);
  CHECK(pulse_energy_mj(1e20, 0.3, 0.3, 100.0) == Approx(1e20 * 9e-10 * 1e-13 * 1e3));
}

TEST_CASE("full report at the reference inputs") {
  DesignInputs in;
  in.xi1 = in.xi2 = 2.35e4 / kMc2;
  const auto r = full_design_report(in);
  CHECK(r.intensity2 == Approx(4.0 * r.intensity1));
  CHECK(r.rabi_bi == Approx(9.73e-3).epsilon(0.01));
  CHECK(r.time_bi_fs == Approx(106.0).epsilon(0.01));
  CHECK(r.momentum_acceptance == Approx(0.031).epsilon(0.02));
  CHECK(r.momentum_acceptance <= 0.04);
  CHECK(r.pulse_energy_total_mj > 25.0);
  CHECK(r.pulse_energy_total_mj < 100.0);
  CHECK(r.flags.empty());

  in.xi1 = 0.3;
  CHECK_FALSE(full_design_report(in).flags.empty());
  in.kinetic_energy = -1.0;
  CHECK_THROWS_AS(full_design_report(in), std::invalid_argument);
}

TEST_CASE("report formatting") {
  const auto r = full_design_report(DesignInputs{});
  const auto text = format_report(r);
  CHECK(text.find("intensity1") != std::string::npos);
  CHECK(text.find("# W/cm^2") != std::string::npos);
  const auto csv = format_summary_csv(r);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
}
