#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "spinsplit/analytic.hpp"
#include "spinsplit/commands.hpp"
#include "spinsplit/design.hpp"
#include "spinsplit/units.hpp"

namespace py = pybind11;
using namespace spinsplit;

namespace {

StageKind parse_kind(const std::string& name) {
  if (name == "mono" || name == "monochromatic") return StageKind::monochromatic;
  if (name == "bichromatic") return StageKind::bichromatic;
  throw std::invalid_argument("unknown stage kind: " + name);
}

py::dict channel_dict(const ChannelReport& r) {
  py::dict d;
  d["pop_plus"] = r.population_plus;
  d["pop_minus"] = r.population_minus;
  d["unassigned"] = r.unassigned;
  d["sy_plus"] = r.bloch_plus.y;
  d["sy_minus"] = r.bloch_minus.y;
  d["poldeg_plus"] = polarization_degree(r, Channel::plus);
  d["poldeg_minus"] = polarization_degree(r, Channel::minus);
  return d;
}

py::dict series_dict(const RunResult& r) {
  const auto n = static_cast<py::ssize_t>(r.series.size());
  py::array_t<double> t(n), pp(n), pm(n), sp(n), sm(n), drift(n);
  for (py::ssize_t i = 0; i < n; ++i) {
    const auto& row = r.series[static_cast<std::size_t>(i)];
    t.mutable_at(i) = units::to_fs(row.t);
    pp.mutable_at(i) = row.report.population_plus;
    pm.mutable_at(i) = row.report.population_minus;
    sp.mutable_at(i) = row.report.bloch_plus.y;
    sm.mutable_at(i) = row.report.bloch_minus.y;
    drift.mutable_at(i) = row.norm_drift;
  }
  py::dict d;
  d["t_fs"] = t;
  d["pop_plus"] = pp;
  d["pop_minus"] = pm;
  d["sy_plus"] = sp;
  d["sy_minus"] = sm;
  d["norm_drift"] = drift;
  d["final"] = channel_dict(r.series.back().report);
  d["max_norm_drift"] = r.max_norm_drift;
  d["max_sigma_y_drift"] = r.max_sigma_y_drift;
  d["dt_as"] = units::to_as(r.dt);
  d["warnings"] = r.warnings;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Kapitza-Dirac spin-splitter simulation";
  m.attr("tool_version") = kToolVersion;

  py::register_exception<ScenarioError>(m, "ScenarioError", PyExc_ValueError);

  m.def("stage_unitary",
        [](const std::string& kind, double area, double chi) {
          return stage_unitary(parse_kind(kind), area, chi).matrix;
        },
        py::arg("kind"), py::arg("area"), py::arg("chi") = 0.0,
        "4x4 Bragg-subspace unitary of one stage, basis (-up, -down, +up, +down).");
  m.def("total_evolution", [](double chi) { return total_evolution(chi).matrix; },
        py::arg("chi"), "Three-stage splitter unitary at the given phase.");
  m.def("rabi_frequency_mono", &rabi_frequency_mono, py::arg("amplitude"));
  m.def("rabi_frequency_bi", &rabi_frequency_bi, py::arg("amplitude1"), py::arg("amplitude2"),
        py::arg("photon_energy"));

  m.def(
      "design_report",
      [](double photon_energy, double xi1, double xi2, double kinetic_energy, double dpx) {
        design::DesignInputs in;
        in.photon_energy = photon_energy;
        in.xi1 = xi1;
        in.xi2 = xi2;
        in.kinetic_energy = kinetic_energy;
        in.tolerances.dpx = dpx;
        const auto r = design::full_design_report(in);
        py::dict d;
        d["intensity1"] = r.intensity1;
        d["intensity2"] = r.intensity2;
        d["rabi_bi"] = r.rabi_bi;
        d["time_bi_fs"] = r.time_bi_fs;
        d["beam_width_um"] = r.geometry.beam_width_um;
        d["pulse_energy_total_mj"] = r.pulse_energy_total_mj;
        d["momentum_acceptance"] = r.momentum_acceptance;
        d["no_flip_rabi"] = r.no_flip_rabi;
        d["flags"] = r.flags;
        d["text"] = design::format_report(r);
        return d;
      },
      py::arg("photon_energy") = 200.0, py::arg("xi1") = 0.046, py::arg("xi2") = 0.046,
      py::arg("kinetic_energy") = 30.0, py::arg("dpx") = 0.0);

  m.def(
      "analytic_table",
      [](const std::filesystem::path& path) { return analytic_table(parse_scenario(path)); },
      py::arg("scenario"), "CSV table of Bragg-subspace predictions after every stage.");

  m.def(
      "simulate",
      [](const std::filesystem::path& path, std::optional<std::string> backend) {
        ScenarioOverrides ov;
        if (backend) ov.backend = parse_backend(*backend);
        const auto ls = parse_scenario(path, ov);
        RunResult r;
        {
          py::gil_scoped_release release;
          r = run_scenario(ls.scenario);
        }
        return series_dict(r);
      },
      py::arg("scenario"), py::arg("backend") = py::none(),
      "Propagates a scenario file and returns its channel time series.");
}
