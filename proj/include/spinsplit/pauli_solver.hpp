#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spinsplit/analysis.hpp"
#include "spinsplit/fft.hpp"
#include "spinsplit/fields.hpp"
#include "spinsplit/grid.hpp"
#include "spinsplit/mode_lattice.hpp"
#include "spinsplit/spinor.hpp"

namespace spinsplit {

enum class Backend { full_field, effective, mode_lattice };

const char* backend_name(Backend b);
/// Accepts "full-field", "effective", "mode-lattice" (underscores allowed).
Backend parse_backend(const std::string& name);

struct PropagationConfig {
  Backend backend = Backend::full_field;
  double timestep = 0.0;        // 0 selects the default for the backend
  double snapshot_every = 0.0;  // series cadence; 0 selects 1 fs
  int mode_half_width = 8;
  int quadrature_nodes = 1;     // Gauss-Hermite nodes of the packet momentum spread
  LatticeCoupling lattice_coupling = LatticeCoupling::full_field;
};

/// Initial Gaussian packet.
struct PacketSpec {
  double center = 0.0;
  double width = 0.0;             // std of |psi|^2
  double central_momentum = 0.0;
  Spinor spin = spin::up();
};

struct Scenario {
  std::string name;
  PacketSpec electron;
  SpatialGrid grid{1.0, 2};
  std::vector<FieldStage> stages;
  double duration = 0.0;
  PropagationConfig config;

  /// Fundamental wavenumber shared by all stages; 0 without stages.
  double wavenumber() const;
  /// Throws std::invalid_argument naming the violated condition.
  void validate() const;
};

/// Largest timestep allowed for the scenario's backend, and the default used
/// when the config leaves it at 0.
double max_timestep(const Scenario& s);
double default_timestep(const Scenario& s);

/// Options of the split-step propagator beyond the scenario.
struct SplitStepOptions {
  /// Evaluate the fields at `reverse_origin - t` with the sigma_y coupling
  /// negated. Propagating psi* with these fields undoes a forward run:
  /// conj(U^dagger psi) = U_rev psi*.
  bool time_reversed = false;
  double reverse_origin = 0.0;
};

/// Strang-split propagator on a spatial grid for the full-field and effective
/// backends. Consecutive half kinetic steps are fused, so advance(n) costs
/// n + 1 forward/backward transform pairs.
class SplitStepPropagator {
 public:
  SplitStepPropagator(const SpatialGrid& grid, std::vector<FieldStage> stages,
                      Backend backend, double dt, SplitStepOptions options = {});

  double dt() const { return dt_; }
  Backend backend() const { return backend_; }
  const BatchedFft& fft() const { return fft_; }

  /// n steps of length dt starting at time t. Throws std::runtime_error when
  /// the state stops being finite.
  void advance(SpinorWavefunction& psi, double t, std::size_t n) const;

 private:
  struct Coefficients;
  Coefficients coefficients(double t) const;
  void kinetic(std::span<Complex> data, bool half) const;
  void potential(SpinorWavefunction& psi, double t) const;

  SpatialGrid grid_;
  std::vector<FieldStage> stages_;
  Backend backend_;
  double dt_;
  SplitStepOptions options_;
  BatchedFft fft_;
  ComplexBuffer kinetic_half_;
  ComplexBuffer kinetic_full_;
  std::vector<double> cos1_, sin1_, cos2_, sin2_, cos4_, sin4_;
};

/// Single-step entry points; each performs one Strang step of length dt
/// starting at t.
void step_full_field(SpinorWavefunction& psi, std::span<const FieldStage> stages, double t,
                     double dt);
void step_effective(SpinorWavefunction& psi, std::span<const FieldStage> stages, double t,
                    double dt);

struct SeriesRow {
  double t = 0.0;  // internal time units
  ChannelReport report;
  double poldeg_plus = 0.0;   // NaN when the channel is empty
  double poldeg_minus = 0.0;
  double entropy = 0.0;       // NaN when both channels are empty
  double norm_drift = 0.0;    // |norm / norm(0) - 1|
  double sigma_y = 0.0;       // total <sigma_y>
};

struct Snapshot {
  double t = 0.0;
  const SpinorWavefunction* wavefunction = nullptr;  // grid backends
  const LatticeEnsemble* lattice = nullptr;          // mode-lattice backend
};

struct RunResult {
  std::vector<SeriesRow> series;
  std::optional<SpinorWavefunction> final_state;
  std::optional<LatticeEnsemble> final_lattice;
  double max_norm_drift = 0.0;
  double max_sigma_y_drift = 0.0;
  std::vector<std::string> warnings;
  std::size_t steps = 0;
  double dt = 0.0;
};

using SnapshotObserver = std::function<void(const Snapshot&)>;

/// Runs the scenario from t = 0 to its duration, recording a series row at
/// every snapshot time and at the end.
RunResult run_scenario(const Scenario& s, const SnapshotObserver& observer = {});

/// Series row for an arbitrary state; exposed for tools that post-process
/// snapshots.
SeriesRow make_series_row(double t, const ChannelReport& report, double norm,
                          double reference_norm, double sigma_y);

}  // namespace spinsplit
