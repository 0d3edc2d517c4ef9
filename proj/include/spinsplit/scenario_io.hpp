#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinsplit/design.hpp"
#include "spinsplit/pauli_solver.hpp"

namespace spinsplit {

inline constexpr const char* kToolVersion = "spinsplit 1.0.0";

/// All schema problems found in a scenario document, each prefixed with its
/// line number.
class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

enum class OutputFormat { csv, binary };
enum class WavefunctionOutput { none, final, all };

struct OutputSpec {
  std::filesystem::path directory = "out";
  OutputFormat format = OutputFormat::csv;
  WavefunctionOutput wavefunctions = WavefunctionOutput::final;
};

struct LoadedScenario {
  Scenario scenario;
  OutputSpec outputs;
  std::optional<design::DesignInputs> design;
  std::string source;  // document text
  std::string sha256;  // hex digest of the document text
};

/// Command-line overrides applied on top of a scenario file.
struct ScenarioOverrides {
  std::optional<Backend> backend;
  std::optional<double> snapshot_every_fs;
  std::optional<std::size_t> grid_points;
  std::optional<double> dt_as;
  std::optional<AmplitudeConvention> convention;
  std::optional<OutputFormat> format;
  std::optional<std::filesystem::path> out;
};

/// Parses and validates a scenario document. Throws ScenarioError.
LoadedScenario parse_scenario_text(const std::string& text, const ScenarioOverrides& ov = {});
LoadedScenario parse_scenario(const std::filesystem::path& path,
                              const ScenarioOverrides& ov = {});

/// Parses "pi/2", "-pi/10", "0.25*pi", "3pi/4" or a plain number.
double parse_angle(const std::string& text);

std::string sha256_hex(const std::string& data);

AmplitudeConvention parse_convention(const std::string& name);
OutputFormat parse_format(const std::string& name);

/// Metadata header lines ("# key: value") shared by every output file.
std::string metadata_header(const LoadedScenario& s, const std::string& content);

/// Time series in the fixed column layout.
std::string format_series(const LoadedScenario& s, const RunResult& r);

/// Wavefunction snapshot as text: z_um, re_up, im_up, re_down, im_down.
std::string format_wavefunction_csv(const LoadedScenario& s, double t,
                                    const SpinorWavefunction& psi);

/// Binary snapshot container: magic "SPSNAP01", a length-prefixed metadata
/// header, then records (double t, double norm, uint64 n, n * 5 doubles).
class SnapshotWriter {
 public:
  SnapshotWriter(const std::filesystem::path& path, const std::string& header);
  void write(double t, const SpinorWavefunction& psi);

 private:
  std::filesystem::path path_;
};

struct SnapshotRecord {
  double t = 0.0;  // internal units
  double norm = 0.0;
  std::vector<double> values;  // n * (z, re_up, im_up, re_down, im_down)
};

struct SnapshotFile {
  std::string header;
  std::vector<SnapshotRecord> records;
};

SnapshotFile read_snapshots(const std::filesystem::path& path);
/// Text dump of a binary container.
std::string dump_snapshots(const SnapshotFile& f);

}  // namespace spinsplit
