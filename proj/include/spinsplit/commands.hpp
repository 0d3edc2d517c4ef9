#pragma once

// Subcommands of the command-line tool. Each one writes its artifacts into the
// scenario's output directory and returns the paths it wrote.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spinsplit/scenario_io.hpp"

namespace spinsplit {

struct CommandOutput {
  std::vector<std::filesystem::path> files;
  std::vector<std::string> warnings;
};

/// Propagates the scenario with its configured backend. Writes series.csv,
/// summary.txt and the requested wavefunction snapshots (or modes.csv for the
/// mode lattice).
CommandOutput simulate(const LoadedScenario& s, std::ostream& log);

/// Bragg-subspace predictions for the scenario's pulse areas: populations
/// and spin content after every stage for the configured initial spin and for
/// the unpolarized ensemble, plus the total 4x4 evolution matrix.
std::string analytic_table(const LoadedScenario& s);
std::string analytic_matrix(const LoadedScenario& s);
CommandOutput analytic(const LoadedScenario& s);

/// Design inputs from the scenario's `design` section, otherwise derived from
/// its stages (photon energy, xi1, xi2, a0 and amplitude convention).
design::DesignInputs design_inputs(const LoadedScenario& s);
CommandOutput design_command(const LoadedScenario& s);

/// Analytic channel populations at time t, using the partial pulse area of
/// every stage up to t. The packet is treated as a plane wave at +-2 hbar k.
ChannelReport analytic_report_at(const Scenario& s, double t);

/// Runs every listed backend and writes compare.csv with the analytic
/// prediction alongside. Backends default to effective, full-field and
/// mode-lattice.
CommandOutput compare(const LoadedScenario& s, const std::vector<Backend>& backends,
                      std::ostream& log);

/// Series of several backends resampled onto the first one's times.
struct ComparisonRow {
  double t = 0.0;
  ChannelReport analytic;
  std::vector<ChannelReport> backends;
};
std::vector<ComparisonRow> comparison_rows(const Scenario& s,
                                           const std::vector<RunResult>& runs);
std::string format_comparison(const LoadedScenario& s, const std::vector<Backend>& backends,
                              const std::vector<ComparisonRow>& rows);

/// |a - b| / max(b, 0.01): deviation of a channel population from a reference.
double population_deviation(double value, double reference);

/// Converts a binary snapshot container into its text form.
void dump_snapshot_file(const std::filesystem::path& in, const std::filesystem::path& out);

}  // namespace spinsplit
