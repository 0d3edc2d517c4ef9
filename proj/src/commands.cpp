#include "spinsplit/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "spinsplit/analytic.hpp"
#include "spinsplit/units.hpp"

namespace spinsplit {
namespace {

namespace fs = std::filesystem;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (v == 0.0) v = 0.0;
  return fmt::format("{:.10e}", v);
}

fs::path write_text(const fs::path& dir, const std::string& name, const std::string& text) {
  fs::create_directories(dir);
  const fs::path path = dir / name;
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
  if (!f) throw std::runtime_error("write failed for " + path.string());
  return path;
}

double poldeg_or_nan(const ChannelReport& r, Channel c) {
  return r.population(c) < 1e-6 ? kNaN : polarization_degree(r, c);
}

double entropy_or_nan(const ChannelReport& r) {
  if (r.population_plus + r.population_minus < 1e-12) return kNaN;
  return spin_momentum_entanglement(r);
}

ChannelReport report_from_density(const BraggDensity& rho) {
  ChannelReport r;
  r.population_plus = rho.population(Channel::plus);
  r.population_minus = rho.population(Channel::minus);
  r.bloch_plus = rho.bloch(Channel::plus);
  r.bloch_minus = rho.bloch(Channel::minus);
  r.norm = rho.matrix().trace().real();
  r.unassigned = 0.0;
  return r;
}

Channel initial_channel(const Scenario& s) {
  const double k = s.wavenumber();
  if (!(k > 0.0)) throw std::invalid_argument("the analytic model needs at least one field stage");
  const double p = s.electron.central_momentum;
  if (std::abs(p - 2.0 * k) < k) return Channel::plus;
  if (std::abs(p + 2.0 * k) < k) return Channel::minus;
  throw std::invalid_argument(fmt::format(
      "the analytic model needs the electron momentum near +-2 hbar k = +-{} eV/c (got {})",
      2.0 * k, p));
}

double stage_chi(const FieldStage& st) {
  if (const auto* mono = std::get_if<MonoStandingWave>(&st.wave())) return mono->chi;
  return 0.0;
}

/// Integral of Omega f^p from the stage start to t.
double partial_area(const FieldStage& st, double t) {
  if (t <= st.start()) return 0.0;
  if (t >= st.end()) return st.pulse_area();
  const int p = st.envelope_power();
  const int n = 4096;
  const double a = st.start();
  const double h = (t - a) / n;
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    sum += w * std::pow(st.envelope_at(a + i * h), p);
  }
  return st.rabi_frequency() * sum * h / 3.0;
}

std::vector<StageUnitary> partial_sequence(const Scenario& s, double t) {
  std::vector<StageUnitary> seq;
  for (const auto& st : s.stages) {
    seq.push_back(stage_unitary(st.kind(), partial_area(st, t), stage_chi(st)));
  }
  return seq;
}

double lerp(double a, double b, double w) { return a + (b - a) * w; }

BlochVector lerp(const BlochVector& a, const BlochVector& b, double w) {
  return {lerp(a.x, b.x, w), lerp(a.y, b.y, w), lerp(a.z, b.z, w)};
}

ChannelReport lerp(const ChannelReport& a, const ChannelReport& b, double w) {
  ChannelReport r;
  r.population_plus = lerp(a.population_plus, b.population_plus, w);
  r.population_minus = lerp(a.population_minus, b.population_minus, w);
  r.unassigned = lerp(a.unassigned, b.unassigned, w);
  r.bloch_plus = lerp(a.bloch_plus, b.bloch_plus, w);
  r.bloch_minus = lerp(a.bloch_minus, b.bloch_minus, w);
  r.norm = lerp(a.norm, b.norm, w);
  return r;
}

ChannelReport sample(const std::vector<SeriesRow>& series, double t) {
  if (series.empty()) throw std::invalid_argument("empty series");
  if (t <= series.front().t) return series.front().report;
  if (t >= series.back().t) return series.back().report;
  const auto it = std::lower_bound(series.begin(), series.end(), t,
                                   [](const SeriesRow& r, double v) { return r.t < v; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  return lerp(lo.report, hi.report, (t - lo.t) / (hi.t - lo.t));
}

double max_channel_deviation(const ChannelReport& a, const ChannelReport& ref) {
  return std::max(population_deviation(a.population_plus, ref.population_plus),
                  population_deviation(a.population_minus, ref.population_minus));
}

std::string backend_column(Backend b) {
  std::string n = backend_name(b);
  std::replace(n.begin(), n.end(), '-', '_');
  return n;
}

std::string report_line(const char* key, const ChannelReport& r) {
  return fmt::format(
      "{}: pop_plus = {}, pop_minus = {}, sy_plus = {}, sy_minus = {}, poldeg_plus = {}, "
      "poldeg_minus = {}, entropy = {}\n",
      key, num(r.population_plus), num(r.population_minus), num(r.bloch_plus.y),
      num(r.bloch_minus.y), num(poldeg_or_nan(r, Channel::plus)),
      num(poldeg_or_nan(r, Channel::minus)), num(entropy_or_nan(r)));
}

}  // namespace

double population_deviation(double value, double reference) {
  return std::abs(value - reference) / std::max(reference, 0.01);
}

CommandOutput simulate(const LoadedScenario& ls, std::ostream& log) {
  const Scenario& s = ls.scenario;
  const fs::path dir = ls.outputs.directory;
  fs::create_directories(dir);
  CommandOutput out;
  const bool grid_backend = s.config.backend != Backend::mode_lattice;
  const bool binary = ls.outputs.format == OutputFormat::binary;
  const bool all = ls.outputs.wavefunctions == WavefunctionOutput::all;

  std::optional<SnapshotWriter> writer;
  const fs::path bin_path = dir / "snapshots.bin";
  if (grid_backend && binary && ls.outputs.wavefunctions != WavefunctionOutput::none) {
    writer.emplace(bin_path, metadata_header(ls, "wavefunction snapshots"));
  }
  std::size_t index = 0;
  SnapshotObserver observer;
  if (grid_backend && all) {
    observer = [&](const Snapshot& snap) {
      if (!snap.wavefunction) return;
      if (writer) {
        writer->write(snap.t, *snap.wavefunction);
      } else {
        out.files.push_back(write_text(dir, fmt::format("wavefunction_{:05d}.csv", index),
                                       format_wavefunction_csv(ls, snap.t, *snap.wavefunction)));
      }
      ++index;
    };
  }

  log << fmt::format("simulate {}: backend {}, duration {:.3f} fs\n", s.name,
                     backend_name(s.config.backend), units::to_fs(s.duration));
  const RunResult r = run_scenario(s, observer);

  if (grid_backend && !all && ls.outputs.wavefunctions == WavefunctionOutput::final &&
      r.final_state) {
    if (writer) {
      writer->write(s.duration, *r.final_state);
    } else {
      out.files.push_back(write_text(dir, "wavefunction_final.csv",
                                     format_wavefunction_csv(ls, s.duration, *r.final_state)));
    }
  }
  if (writer) out.files.push_back(bin_path);

  if (r.final_lattice) {
    std::string m = metadata_header(ls, "mode lattice amplitudes");
    m += "member,weight,n,momentum_evc,pop_up,pop_down\n";
    for (std::size_t j = 0; j < r.final_lattice->members.size(); ++j) {
      const auto& mem = r.final_lattice->members[j];
      const int hw = mem.lattice.half_width();
      for (int n = -hw; n <= hw; ++n) {
        const auto i = mem.lattice.index(n);
        m += fmt::format("{},{},{},{},{},{}\n", j, num(mem.weight), n,
                         num(mem.lattice.momentum(n)), num(std::norm(mem.amplitudes[i])),
                         num(std::norm(mem.amplitudes[i + 1])));
      }
    }
    out.files.push_back(write_text(dir, "modes.csv", m));
  }

  out.files.push_back(write_text(dir, "series.csv", format_series(ls, r)));

  std::string summary = metadata_header(ls, "run summary");
  summary += fmt::format("dt_as = {}\nsteps = {}\n", num(units::to_as(r.dt)), r.steps);
  summary += fmt::format("max_norm_drift = {}\nmax_sigma_y_drift = {}\n", num(r.max_norm_drift),
                         num(r.max_sigma_y_drift));
  if (!r.series.empty()) summary += report_line("final", r.series.back().report);
  for (const auto& w : r.warnings) summary += "warning: " + w + "\n";
  out.files.push_back(write_text(dir, "summary.txt", summary));

  out.warnings = r.warnings;
  for (const auto& w : r.warnings) log << "warning: " << w << "\n";
  return out;
}

ChannelReport analytic_report_at(const Scenario& s, double t) {
  const Channel c = initial_channel(s);
  const auto u = compose(partial_sequence(s, t));
  const BraggState in = BraggState::in_channel(c, s.electron.spin.normalized());
  return report_from_density(BraggDensity::pure(BraggState(u * in.amplitudes())));
}

std::string analytic_table(const LoadedScenario& ls) {
  const Scenario& s = ls.scenario;
  const Channel c = initial_channel(s);
  const auto seq = stage_sequence(s.stages);
  std::string out = metadata_header(ls, "analytic Bragg-subspace prediction");
  out += "ensemble,after_stage,label,kind,area,chi,pop_plus,pop_minus,sy_plus,sy_minus,"
         "poldeg_plus,poldeg_minus,entropy\n";

  auto emit = [&](const char* ensemble, std::size_t i, const ChannelReport& r, double entropy) {
    std::string label = "initial", kind = "-";
    double area = 0.0, chi = 0.0;
    if (i > 0) {
      const auto& st = s.stages[i - 1];
      label = st.label();
      kind = st.kind() == StageKind::monochromatic ? "monochromatic" : "bichromatic";
      area = seq[i - 1].area;
      chi = seq[i - 1].chi;
    }
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{}\n", ensemble, i, label, kind,
                       num(area), num(chi), num(r.population_plus), num(r.population_minus),
                       num(r.bloch_plus.y), num(r.bloch_minus.y),
                       num(poldeg_or_nan(r, Channel::plus)),
                       num(poldeg_or_nan(r, Channel::minus)), num(entropy));
  };

  BraggState psi = BraggState::in_channel(c, s.electron.spin.normalized());
  for (std::size_t i = 0; i <= seq.size(); ++i) {
    if (i > 0) psi = seq[i - 1].apply(psi);
    emit("pure", i, report_from_density(BraggDensity::pure(psi)),
         spin_momentum_entanglement(psi));
  }
  BraggDensity rho = BraggDensity::unpolarized(c);
  for (std::size_t i = 0; i <= seq.size(); ++i) {
    if (i > 0) rho = evolve_density(seq[i - 1], rho);
    // The mixed ensemble has no pure-state entanglement entropy.
    emit("unpolarized", i, report_from_density(rho), kNaN);
  }
  return out;
}

std::string analytic_matrix(const LoadedScenario& ls) {
  const auto u = compose(stage_sequence(ls.scenario.stages));
  std::string out = metadata_header(ls, "analytic total evolution matrix");
  out += "# basis: (-2k up, -2k down, +2k up, +2k down)\n";
  out += "row,col,re,im\n";
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      out += fmt::format("{},{},{},{}\n", i, j, num(u(i, j).real()), num(u(i, j).imag()));
    }
  }
  return out;
}

CommandOutput analytic(const LoadedScenario& ls) {
  CommandOutput out;
  const fs::path dir = ls.outputs.directory;
  out.files.push_back(write_text(dir, "analytic.csv", analytic_table(ls)));
  out.files.push_back(write_text(dir, "analytic_matrix.csv", analytic_matrix(ls)));
  return out;
}

design::DesignInputs design_inputs(const LoadedScenario& ls) {
  if (ls.design) return *ls.design;
  design::DesignInputs in;
  for (const auto& st : ls.scenario.stages) {
    if (const auto* bi = std::get_if<BichromaticWave>(&st.wave())) {
      in.photon_energy = bi->photon_energy;
      in.xi1 = design::xi_from_amplitude(bi->amplitude1);
      in.xi2 = design::xi_from_amplitude(bi->amplitude2);
    } else if (const auto* mono = std::get_if<MonoStandingWave>(&st.wave())) {
      in.mono_amplitude = mono->amplitude;
      in.convention = mono->convention;
    }
  }
  return in;
}

CommandOutput design_command(const LoadedScenario& ls) {
  const auto report = design::full_design_report(design_inputs(ls));
  CommandOutput out;
  const fs::path dir = ls.outputs.directory;
  out.files.push_back(write_text(dir, "design.txt",
                                 metadata_header(ls, "design report") +
                                     design::format_report(report)));
  out.files.push_back(write_text(dir, "design.csv",
                                 metadata_header(ls, "design summary") +
                                     design::format_summary_csv(report)));
  out.warnings = report.flags;
  return out;
}

std::vector<ComparisonRow> comparison_rows(const Scenario& s,
                                           const std::vector<RunResult>& runs) {
  if (runs.empty()) throw std::invalid_argument("comparison needs at least one run");
  std::vector<ComparisonRow> rows;
  for (const auto& ref : runs.front().series) {
    ComparisonRow row;
    row.t = ref.t;
    row.analytic = analytic_report_at(s, ref.t);
    for (const auto& r : runs) row.backends.push_back(sample(r.series, ref.t));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_comparison(const LoadedScenario& ls, const std::vector<Backend>& backends,
                              const std::vector<ComparisonRow>& rows) {
  std::string out = metadata_header(ls, "backend comparison");
  out += "# dev_X_vs_Y = max over channels of |P_X - P_Y| / max(P_Y, 0.01)\n";
  std::vector<std::string> names{"analytic"};
  for (auto b : backends) names.push_back(backend_column(b));
  std::string header = "t_fs";
  for (const auto& n : names) {
    header += fmt::format(",{0}_pop_plus,{0}_pop_minus,{0}_poldeg_plus,{0}_poldeg_minus", n);
  }
  for (std::size_t i = 1; i < names.size(); ++i) header += ",dev_" + names[i] + "_vs_analytic";
  for (std::size_t i = 2; i < names.size(); ++i) {
    header += ",dev_" + names[i] + "_vs_" + names[1];
  }
  out += header + "\n";
  for (const auto& row : rows) {
    std::string line = num(units::to_fs(row.t));
    auto cols = [&](const ChannelReport& r) {
      line += fmt::format(",{},{},{},{}", num(r.population_plus), num(r.population_minus),
                          num(poldeg_or_nan(r, Channel::plus)),
                          num(poldeg_or_nan(r, Channel::minus)));
    };
    cols(row.analytic);
    for (const auto& r : row.backends) cols(r);
    for (const auto& r : row.backends) line += "," + num(max_channel_deviation(r, row.analytic));
    for (std::size_t i = 1; i < row.backends.size(); ++i) {
      line += "," + num(max_channel_deviation(row.backends[i], row.backends[0]));
    }
    out += line + "\n";
  }
  return out;
}

CommandOutput compare(const LoadedScenario& ls, const std::vector<Backend>& backends,
                      std::ostream& log) {
  if (backends.empty()) throw std::invalid_argument("compare needs at least one backend");
  initial_channel(ls.scenario);
  std::vector<RunResult> runs;
  CommandOutput out;
  for (auto b : backends) {
    Scenario s = ls.scenario;
    s.config.backend = b;
    if (b != Backend::mode_lattice) s.grid.require_resolves(s.wavenumber());
    log << fmt::format("compare {}: running {}\n", s.name, backend_name(b));
    runs.push_back(run_scenario(s));
    for (const auto& w : runs.back().warnings) {
      out.warnings.push_back(std::string(backend_name(b)) + ": " + w);
      log << "warning: " << backend_name(b) << ": " << w << "\n";
    }
  }
  const auto rows = comparison_rows(ls.scenario, runs);
  const fs::path dir = ls.outputs.directory;
  out.files.push_back(write_text(dir, "compare.csv", format_comparison(ls, backends, rows)));

  std::string summary = metadata_header(ls, "backend comparison summary");
  const auto& last = rows.back();
  summary += report_line("analytic", last.analytic);
  for (std::size_t i = 0; i < backends.size(); ++i) {
    const auto& r = runs[i];
    double worst = 0.0;
    for (const auto& row : rows) {
      worst = std::max(worst, max_channel_deviation(row.backends[i], row.analytic));
    }
    summary += report_line(backend_column(backends[i]).c_str(), last.backends[i]);
    summary += fmt::format(
        "{}: dt_as = {}, steps = {}, max_norm_drift = {}, max_sigma_y_drift = {}\n",
        backend_column(backends[i]), num(units::to_as(r.dt)), r.steps, num(r.max_norm_drift),
        num(r.max_sigma_y_drift));
    // Residual against the two-mode model: field-induced detuning, off-resonant
    // orders and the packet's momentum spread.
    summary += fmt::format("{}: final_dev_vs_analytic = {}, max_dev_vs_analytic = {}\n",
                           backend_column(backends[i]),
                           num(max_channel_deviation(last.backends[i], last.analytic)),
                           num(worst));
    if (i > 0) {
      double cross = 0.0;
      for (const auto& row : rows) {
        cross = std::max(cross, max_channel_deviation(row.backends[i], row.backends[0]));
      }
      summary += fmt::format("{}: max_dev_vs_{} = {}\n", backend_column(backends[i]),
                             backend_column(backends[0]), num(cross));
    }
  }
  out.files.push_back(write_text(dir, "compare_summary.txt", summary));
  return out;
}

void dump_snapshot_file(const fs::path& in, const fs::path& out) {
  const auto text = dump_snapshots(read_snapshots(in));
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  std::ofstream f(out, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + out.string());
  f << text;
}

}  // namespace spinsplit
