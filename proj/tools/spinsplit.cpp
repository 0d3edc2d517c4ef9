#include <CLI11.hpp>

#include <iostream>

#include "spinsplit/commands.hpp"

namespace {

using namespace spinsplit;

struct CommonFlags {
  std::string scenario;
  std::vector<std::string> backends;
  std::string out;
  double snapshot_every = 0.0;
  std::size_t grid_points = 0;
  double dt = 0.0;
  std::string convention;
  std::string format;

  void attach(CLI::App* app, bool many_backends) {
    app->add_option("--scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);
    auto* b = app->add_option("--backend", backends,
                              many_backends ? "Backends to compare (repeatable)"
                                            : "full-field, effective or mode-lattice");
    if (!many_backends) b->expected(1);
    b->delimiter(',');
    app->add_option("--out", out, "Output directory");
    app->add_option("--snapshot-every", snapshot_every, "Series cadence in fs")
        ->check(CLI::PositiveNumber);
    app->add_option("--grid-points", grid_points, "Grid points")->check(CLI::PositiveNumber);
    app->add_option("--dt", dt, "Timestep in as")->check(CLI::PositiveNumber);
    app->add_option("--convention", convention, "Monochromatic amplitude convention")
        ->check(CLI::IsMember({"standing", "traveling"}));
    app->add_option("--format", format, "Snapshot format")->check(CLI::IsMember({"csv", "binary"}));
  }

  LoadedScenario load() const {
    ScenarioOverrides ov;
    if (backends.size() == 1) ov.backend = parse_backend(backends.front());
    if (!out.empty()) ov.out = out;
    if (snapshot_every > 0.0) ov.snapshot_every_fs = snapshot_every;
    if (grid_points > 0) ov.grid_points = grid_points;
    if (dt > 0.0) ov.dt_as = dt;
    if (!convention.empty()) ov.convention = parse_convention(convention);
    if (!format.empty()) ov.format = parse_format(format);
    return parse_scenario(scenario, ov);
  }
};

void report(const CommandOutput& out) {
  for (const auto& f : out.files) std::cout << f.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spin-splitter simulation tool"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  CommonFlags sim_flags, ana_flags, des_flags, cmp_flags;
  auto* sim = app.add_subcommand("simulate", "Propagate the scenario with one backend");
  sim_flags.attach(sim, false);
  auto* ana = app.add_subcommand("analytic", "Bragg-subspace prediction for the pulse areas");
  ana_flags.attach(ana, false);
  auto* des = app.add_subcommand("design", "Experimental design report");
  des_flags.attach(des, false);
  auto* cmp = app.add_subcommand("compare", "Analytic and numerical backends side by side");
  cmp_flags.attach(cmp, true);

  std::string dump_in, dump_out;
  auto* dump = app.add_subcommand("dump", "Convert a binary snapshot container to text");
  dump->add_option("--in", dump_in, "Binary snapshot file")->required()->check(CLI::ExistingFile);
  dump->add_option("--out", dump_out, "Text output file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      report(simulate(sim_flags.load(), std::cerr));
    } else if (ana->parsed()) {
      report(analytic(ana_flags.load()));
    } else if (des->parsed()) {
      const auto out = design_command(des_flags.load());
      for (const auto& w : out.warnings) std::cerr << "flag: " << w << "\n";
      report(out);
    } else if (cmp->parsed()) {
      std::vector<Backend> backends;
      for (const auto& b : cmp_flags.backends) backends.push_back(parse_backend(b));
      if (backends.empty()) {
        backends = {Backend::effective, Backend::full_field, Backend::mode_lattice};
      }
      auto flags = cmp_flags;
      flags.backends.clear();
      report(compare(flags.load(), backends, std::cerr));
    } else if (dump->parsed()) {
      dump_snapshot_file(dump_in, dump_out);
      std::cout << dump_out << "\n";
    }
  } catch (const ScenarioError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
