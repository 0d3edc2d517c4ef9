// Acceptance criteria 1-9. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. Criterion 8 and the reference-scale parts of the
// conservation suite need --long.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>

#include "oracles.hpp"
#include "spinsplit/analytic.hpp"
#include "spinsplit/commands.hpp"
#include "spinsplit/units.hpp"

using namespace spinsplit;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = SPINSPLIT_SCENARIO_DIR;
const Complex I(0.0, 1.0);

struct Outcome {
  enum class Status { pass, fail, skip } status = Status::pass;
  std::string detail;
};

Outcome verdict(bool ok, std::string detail) {
  return {ok ? Outcome::Status::pass : Outcome::Status::fail, std::move(detail)};
}

double max_abs(const Eigen::Matrix4cd& m) { return m.cwiseAbs().maxCoeff(); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

LoadedScenario load(const std::string& name, std::optional<Backend> backend = std::nullopt) {
  ScenarioOverrides ov;
  ov.backend = backend;
  return parse_scenario(kScenarios / (name + ".scenario"), ov);
}

// 1. Unitary algebra exactness.
Outcome unitary_algebra() {
  const Eigen::Matrix4cd u = total_evolution(units::pi / 2).matrix;
  const double err_u = max_abs(u - oracle::spin_filter());
  const auto plus = BraggState::in_channel(Channel::plus, spin::plus_y()).amplitudes();
  const auto minus = BraggState::in_channel(Channel::plus, spin::minus_y()).amplitudes();
  const auto reflected = BraggState::in_channel(Channel::minus, spin::minus_y()).amplitudes();
  const double err_plus = (u * plus + plus).norm();
  const double err_minus = (u * minus + reflected).norm();
  const auto rho = evolve_density(u, BraggDensity::unpolarized(Channel::plus).matrix());
  const double err_rho = max_abs(rho.matrix() - oracle::unpolarized_output());
  const double err_sy = std::max(std::abs(rho.bloch(Channel::plus).y - 1.0),
                                 std::abs(rho.bloch(Channel::minus).y + 1.0));
  const double worst = std::max({err_u, err_plus, err_minus, err_rho, err_sy});
  return verdict(worst < 1e-12,
                 fmt::format("max|U - U_ref| = {:.2e}, |U(0,+) + (0,+)| = {:.2e}, "
                             "|U(0,-) + (-,0)| = {:.2e}, max|rho - rho_ref| = {:.2e}, "
                             "sy = ({:+.15f}, {:+.15f})",
                             err_u, err_plus, err_minus, err_rho, rho.bloch(Channel::plus).y,
                             rho.bloch(Channel::minus).y));
}

// 2. Closed-form stage unitaries against a Taylor-series exponential.
Outcome oracle_equivalence() {
  double worst = 0.0;
  int cases = 0;
  for (double theta : {0.1, units::pi / 4, units::pi / 2, units::pi, 2 * units::pi}) {
    for (double chi : {0.0, units::pi / 10, -units::pi / 10, units::pi / 2}) {
      const auto u = stage_unitary(StageKind::monochromatic, theta, chi).matrix;
      const Eigen::Matrix4cd ref =
          oracle::expm(Eigen::Matrix4cd(-I * (theta / 2.0) * oracle::mono_block(chi)));
      worst = std::max(worst, max_abs(u - ref));
      ++cases;
    }
    const auto ub = stage_unitary(StageKind::bichromatic, theta).matrix;
    const Eigen::Matrix4cd refb =
        oracle::expm(Eigen::Matrix4cd(-I * (theta / 2.0) * oracle::bichromatic_block()));
    worst = std::max(worst, max_abs(ub - refb));
    ++cases;
  }
  return verdict(worst < 1e-10, fmt::format("{} cases, max entry deviation {:.2e}", cases, worst));
}

// Fitted Rabi frequency of the reflected population over the plateau.
double fitted_rabi(const LoadedScenario& ls, double& expected) {
  const auto& st = ls.scenario.stages.front();
  expected = st.rabi_frequency();
  const auto r = run_scenario(ls.scenario);
  const double t0 = st.start() + st.envelope().rise;
  const double t1 = t0 + st.envelope().plateau;
  std::vector<double> t, p;
  for (const auto& row : r.series) {
    if (row.t < t0 || row.t > t1) continue;
    t.push_back(row.t);
    p.push_back(row.report.population_minus);
  }
  return fit_rabi(t, p).omega;
}

// 3. Rabi-frequency regression.
Outcome rabi_regression() {
  double wm_ref = 0.0, wb_ref = 0.0;
  const double wm = fitted_rabi(load("mono-rabi"), wm_ref);
  const double wb = fitted_rabi(load("bichrom-rabi"), wb_ref);
  const double dm = std::abs(wm / wm_ref - 1.0);
  const double db = std::abs(wb / wb_ref - 1.0);
  const double ref_wb = rabi_frequency_bi(2.35e4, 2.35e4, 200.0);
  const double ref_tb = units::to_fs(units::pi / (2.0 * ref_wb));
  const double d_ref = std::abs(ref_wb / 9.73e-3 - 1.0);
  const double d_tb = std::abs(ref_tb / 106.0 - 1.0);
  return verdict(dm < 0.02 && db < 0.02 && d_ref < 0.02 && d_tb < 0.02,
                 fmt::format("mono fit {:.5e} vs {:.5e} eV ({:.2f}%), bichromatic fit {:.5e} vs "
                             "{:.5e} eV ({:.2f}%), hbar*Omega_b = {:.4e} eV ({:.2f}% from 9.73e-3), "
                             "T_b = {:.2f} fs ({:.2f}% from 106)",
                             wm, wm_ref, 100 * dm, wb, wb_ref, 100 * db, ref_wb, 100 * d_ref,
                             ref_tb, 100 * d_tb));
}

// 4. Norm and sigma_y conservation over the bundled scenarios.
Outcome conservation(bool long_run, const std::map<std::string, RunResult>& finished) {
  // Reference-intensity full-field runs of 0.5-0.7 ps take 40-60 min each; the
  // full-field backend is exercised on the desk-scale scenario and, with
  // --long, on fig2.
  const std::set<std::string> full_field_default{"scaled-mono"};
  const std::set<std::string> full_field_long{"scaled-mono", "fig2"};
  const std::set<std::string> lattice_long_only{"fig2"};
  double worst_norm = 0.0, worst_sy = 0.0;
  std::vector<std::string> runs, skipped;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(kScenarios)) {
    if (e.path().extension() == ".scenario") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    const std::string name = path.stem().string();
    for (Backend b : {Backend::effective, Backend::mode_lattice, Backend::full_field}) {
      const std::string tag = name + "/" + backend_name(b);
      const bool ff_ok = (long_run ? full_field_long : full_field_default).count(name) > 0;
      if (b == Backend::full_field && !ff_ok) {
        skipped.push_back(tag);
        continue;
      }
      if (b == Backend::mode_lattice && !long_run && lattice_long_only.count(name)) {
        skipped.push_back(tag);
        continue;
      }
      RunResult r;
      if (auto it = finished.find(tag); it != finished.end()) {
        r = it->second;
      } else {
        r = run_scenario(load(name, b).scenario);
      }
      worst_norm = std::max(worst_norm, r.max_norm_drift);
      worst_sy = std::max(worst_sy, r.max_sigma_y_drift);
      runs.push_back(fmt::format("{} ({:.1e}, {:.1e})", tag, r.max_norm_drift,
                                 r.max_sigma_y_drift));
    }
  }
  std::string detail = fmt::format("max norm drift {:.2e}, max sigma_y drift {:.2e} over {} runs",
                                   worst_norm, worst_sy, runs.size());
  for (const auto& r : runs) detail += "; " + r;
  if (!skipped.empty()) {
    detail += "; not run:";
    for (const auto& s : skipped) detail += " " + s;
  }
  return verdict(worst_norm < 1e-8 && worst_sy < 1e-8, detail);
}

// 5. Free Gaussian spreading.
Outcome free_propagation() {
  Scenario s;
  s.name = "free";
  s.electron = PacketSpec{0.0, units::from_um(0.01), 400.0, spin::up()};
  s.grid = SpatialGrid(units::from_um(3.0), 16384);
  s.duration = units::from_fs(500.0);
  s.config.snapshot_every = units::from_fs(50.0);
  double worst = 0.0;
  const double s0 = s.electron.width;
  run_scenario(s, [&](const Snapshot& snap) {
    const double tau = snap.t / (2.0 * units::electron_rest_energy * s0 * s0);
    const double expected = s0 * s0 * (1.0 + tau * tau);
    worst = std::max(worst, std::abs(position_variance(*snap.wavefunction) / expected - 1.0));
  });
  const double tau = s.duration / (2.0 * units::electron_rest_energy * s0 * s0);
  return verdict(worst < 1e-6,
                 fmt::format("max relative sigma^2 deviation {:.2e} over 500 fs "
                             "(sigma grows by {:.1f}%)",
                             worst, 100 * (std::sqrt(1.0 + tau * tau) - 1.0)));
}

// 6. Backend cross-validation at desk scale.
Outcome cross_validation() {
  const auto ls = load("scaled-mono");
  const std::vector<Backend> backends{Backend::effective, Backend::full_field,
                                      Backend::mode_lattice};
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<RunResult> runs;
  for (auto b : backends) {
    Scenario s = ls.scenario;
    s.config.backend = b;
    runs.push_back(run_scenario(s));
  }
  const double elapsed = seconds_since(t0);
  const auto rows = comparison_rows(ls.scenario, runs);
  double cross = 0.0, analytic_final = 0.0;
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.backends.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        for (Channel c : {Channel::plus, Channel::minus}) {
          cross = std::max(cross, population_deviation(row.backends[i].population(c),
                                                       row.backends[j].population(c)));
        }
      }
    }
  }
  std::string finals;
  const auto& last = rows.back();
  for (std::size_t i = 0; i < backends.size(); ++i) {
    double dev = 0.0;
    for (Channel c : {Channel::plus, Channel::minus}) {
      dev = std::max(dev, population_deviation(last.backends[i].population(c),
                                               last.analytic.population(c)));
    }
    analytic_final = std::max(analytic_final, dev);
    finals += fmt::format(", {} P-={:.5f} (residual vs analytic {:.2f}%)", backend_name(backends[i]),
                          last.backends[i].population_minus, 100 * dev);
  }
  const double ratio = ls.scenario.wavenumber() / ls.scenario.stages.front().rabi_frequency();
  return verdict(cross <= 0.02 && analytic_final <= 0.05 && elapsed < 60.0,
                 fmt::format("w/Omega = {:.0f}, analytic P- = {:.5f}{}, max cross-backend "
                             "deviation {:.2f}% over {} snapshots, runtime {:.1f} s",
                             ratio, last.analytic.population_minus, finals, 100 * cross,
                             rows.size(), elapsed));
}

// 7. Ideal spin splitter on an unpolarized input.
Outcome ideal_splitter() {
  auto ls = load("fig2-ideal");
  std::vector<ChannelReport> reports;
  for (const Spinor& s : {spin::up(), spin::down()}) {
    ls.scenario.electron.spin = s;
    reports.push_back(run_scenario(ls.scenario).series.back().report);
  }
  const std::vector<double> w{0.5, 0.5};
  const auto mixed = mix_reports(reports, w);
  const double pp = polarization_degree(mixed, Channel::plus);
  const double pm = polarization_degree(mixed, Channel::minus);
  const bool ok = pp > 0.999 && pm > 0.999 && std::abs(mixed.population_plus - 0.5) <= 0.002 &&
                  std::abs(mixed.population_minus - 0.5) <= 0.002 && mixed.bloch_plus.y > 0 &&
                  mixed.bloch_minus.y < 0;
  return verdict(ok, fmt::format("P+ = {:.5f} (sy {:+.6f}), P- = {:.5f} (sy {:+.6f})",
                                 mixed.population_plus, mixed.bloch_plus.y,
                                 mixed.population_minus, mixed.bloch_minus.y));
}

// 8. Reference-parameter reproduction (full-field fig2).
Outcome reference_reproduction(std::map<std::string, RunResult>& finished) {
  const auto ls = load("fig2", Backend::full_field);
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run_scenario(ls.scenario);
  const double elapsed = seconds_since(t0);
  finished["fig2/full-field"] = r;
  const auto& rep = r.series.back().report;
  const double pp = polarization_degree(rep, Channel::plus);
  const double pm = polarization_degree(rep, Channel::minus);
  const double imbalance = std::abs(rep.population_plus - rep.population_minus);
  const bool two_channels = rep.population_plus > 0.1 && rep.population_minus > 0.1;
  const bool ok = two_channels && std::abs(pp - 0.77) <= 0.05 && std::abs(pm - 0.77) <= 0.05 &&
                  imbalance >= 0.02;
  std::string detail = fmt::format(
      "P+ = {:.4f} (poldeg {:.4f}), P- = {:.4f} (poldeg {:.4f}), unassigned {:.2e}, "
      "|P+ - P-| = {:.4f}, runtime {:.0f} s",
      rep.population_plus, pp, rep.population_minus, pm, rep.unassigned, imbalance, elapsed);
  for (const auto& w : r.warnings) detail += "; warning: " + w;
  return verdict(ok, detail);
}

// 9. Design-calculator table.
Outcome design_table() {
  auto in = design_inputs(load("fig2"));
  in.tolerances.dpx = 2.0;
  const auto r = design::full_design_report(in);
  const double di = std::abs(r.intensity1 / 7.6e19 - 1.0);
  const double dy = std::abs(r.geometry.beam_width_um / 0.3 - 1.0);
  const double dp = std::abs(r.momentum_acceptance / 0.031 - 1.0);
  const double energy = r.pulse_energy_total_mj;
  const double no_flip = 2.5 * in.tolerances.dpx / in.photon_energy * r.rabi_bi;
  const bool ok = di <= 0.03 && dy <= 0.05 && dp <= 0.03 && r.momentum_acceptance <= 0.04 &&
                  energy >= 25.0 && energy <= 100.0 && r.no_flip_rabi == no_flip;
  return verdict(ok, fmt::format("I1 = {:.3e} W/cm^2 ({:.1f}%), dy = {:.3f} um ({:.1f}% from 0.3), "
                                 "dpz/pz = {:.4f}, pulse energy {:.1f} mJ, "
                                 "Omega_no-flip = {:.6e} eV (formula {:.6e})",
                                 r.intensity1, 100 * di, r.geometry.beam_width_um, 100 * dy,
                                 r.momentum_acceptance, energy, r.no_flip_rabi, no_flip));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  bool long_run = false;
  std::vector<int> only;
  app.add_flag("--long", long_run, "Include criterion 8 and reference-scale conservation runs");
  app.add_option("--only", only, "Run only these criteria")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);
  if (const char* env = std::getenv("SPINSPLIT_LONG"); env && std::string(env) == "1") {
    long_run = true;
  }

  std::map<std::string, RunResult> finished;
  using Fn = std::function<Outcome()>;
  const std::vector<std::pair<std::string, Fn>> criteria{
      {"unitary algebra exactness", unitary_algebra},
      {"oracle equivalence", oracle_equivalence},
      {"Rabi-frequency regression", rabi_regression},
      {"conservation suite", [&] { return conservation(long_run, finished); }},
      {"free propagation", free_propagation},
      {"backend cross-validation", cross_validation},
      {"ideal spin splitter", ideal_splitter},
      {"reference-parameter reproduction",
       [&] {
         if (!long_run) return Outcome{Outcome::Status::skip, "long run; pass --long"};
         return reference_reproduction(finished);
       }},
      {"design-calculator table", design_table},
  };
  // Criterion 8 feeds its fig2 run into the conservation suite.
  std::vector<int> order{1, 2, 3, 5, 6, 7, 8, 4, 9};
  std::map<int, Outcome> results;
  for (int n : order) {
    if (!only.empty() && std::find(only.begin(), only.end(), n) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[n - 1].second();
    } catch (const std::exception& e) {
      o = {Outcome::Status::fail, std::string("exception: ") + e.what()};
    }
    o.detail += fmt::format(" [{:.1f} s]", seconds_since(t0));
    results[n] = o;
  }
  int failures = 0;
  for (const auto& [n, o] : results) {
    const char* status = o.status == Outcome::Status::pass   ? "PASS"
                         : o.status == Outcome::Status::fail ? "FAIL"
                                                             : "SKIP";
    if (o.status == Outcome::Status::fail) ++failures;
    std::cout << fmt::format("criterion {} ({}): {}  {}\n", n, criteria[n - 1].first, status,
                             o.detail);
  }
  return failures == 0 ? 0 : 1;
}
