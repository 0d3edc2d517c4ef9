#include "spinsplit/pauli_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "small_sincos.hpp"
#include "spinsplit/units.hpp"

namespace spinsplit {
namespace {

constexpr double kLatticeStability = 0.3;  // max dt * ||H|| for the stage solver
constexpr double kSmallAngle = kSmallSinCosRange;

double max_rabi(const std::vector<FieldStage>& stages) {
  double w = 0.0;
  for (const auto& st : stages) w = std::max(w, st.rabi_frequency());
  return w;
}

double carrier_period(double k) { return 2.0 * units::pi / (2.0 * k); }

double free_timestep(const Scenario& s) {
  return std::min(units::from_fs(0.5), s.duration > 0.0 ? s.duration : units::from_fs(0.5));
}

double lattice_bound(const Scenario& s) {
  const ModeLattice lat(s.config.mode_half_width, s.wavenumber(),
                        0.5 * s.wavenumber(), s.config.lattice_coupling);
  return lat.hamiltonian_bound(s.stages);
}

bool uses_full_field(const Scenario& s) {
  return s.config.backend == Backend::full_field ||
         (s.config.backend == Backend::mode_lattice &&
          s.config.lattice_coupling == LatticeCoupling::full_field);
}

}  // namespace

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::full_field: return "full-field";
    case Backend::effective: return "effective";
    case Backend::mode_lattice: return "mode-lattice";
  }
  return "?";
}

Backend parse_backend(const std::string& name) {
  std::string n = name;
  std::replace(n.begin(), n.end(), '_', '-');
  if (n == "full-field") return Backend::full_field;
  if (n == "effective") return Backend::effective;
  if (n == "mode-lattice") return Backend::mode_lattice;
  throw std::invalid_argument("unknown backend '" + name +
                              "' (expected full-field, effective or mode-lattice)");
}

double Scenario::wavenumber() const {
  return stages.empty() ? 0.0 : stages.front().wavenumber();
}

void Scenario::validate() const {
  if (!(duration >= 0.0) || !std::isfinite(duration)) {
    throw std::invalid_argument("duration must be non-negative and finite");
  }
  if (!(electron.width > 0.0)) throw std::invalid_argument("electron width must be positive");
  if (std::abs(electron.spin.norm()) == 0.0) throw std::invalid_argument("electron spin is zero");
  if (config.mode_half_width < 4) throw std::invalid_argument("mode-lattice half-width must be >= 4");
  if (config.quadrature_nodes < 1) throw std::invalid_argument("quadrature nodes must be >= 1");
  if (!(config.timestep >= 0.0)) throw std::invalid_argument("timestep must be non-negative");
  if (!(config.snapshot_every >= 0.0)) {
    throw std::invalid_argument("snapshot cadence must be non-negative");
  }
  const double k = wavenumber();
  double previous_start = -std::numeric_limits<double>::infinity();
  for (const auto& st : stages) {
    if (st.wavenumber() != k) {
      throw std::invalid_argument("stage '" + st.label() +
                                  "': all stages must share one photon energy");
    }
    if (st.start() < previous_start) {
      throw std::invalid_argument("stage '" + st.label() +
                                  "': start times must be non-decreasing");
    }
    if (st.start() < 0.0) throw std::invalid_argument("stage '" + st.label() + "' starts before t = 0");
    if (st.end() > duration * (1.0 + 1e-12)) {
      throw std::invalid_argument("stage '" + st.label() + "' ends after the scenario duration");
    }
    previous_start = st.start();
  }
  if (!stages.empty() && config.backend != Backend::mode_lattice) grid.require_resolves(k);
  if (config.backend == Backend::mode_lattice && stages.empty()) {
    throw std::invalid_argument("mode-lattice backend needs at least one stage");
  }
  if (config.timestep > 0.0 && config.timestep > max_timestep(*this) * (1.0 + 1e-12)) {
    throw std::invalid_argument("timestep exceeds the backend limit of " +
                                std::to_string(units::to_as(max_timestep(*this))) + " as");
  }
}

double max_timestep(const Scenario& s) {
  if (s.stages.empty()) return std::max(s.duration, units::from_fs(0.5));
  double limit = uses_full_field(s) ? carrier_period(s.wavenumber()) / 40.0
                                    : 0.01 / max_rabi(s.stages);
  if (s.config.backend == Backend::mode_lattice) {
    limit = std::min(limit, kLatticeStability / lattice_bound(s));
  }
  return limit;
}

double default_timestep(const Scenario& s) {
  if (s.stages.empty()) return free_timestep(s);
  double dt = uses_full_field(s) ? carrier_period(s.wavenumber()) / 64.0
                                 : 0.005 / max_rabi(s.stages);
  if (s.config.backend == Backend::mode_lattice) {
    dt = std::min(dt, kLatticeStability / lattice_bound(s));
  }
  return dt;
}

// Per-time field coefficients. Full field:
//   u(z) = a1 cos kz + b1 sin kz + a2 cos 2kz + b2 sin 2kz.
// Effective:
//   scalar(z) = vc cos 4kz + vs sin 4kz,  spin(z) = ws sin 4kz.
struct SplitStepPropagator::Coefficients {
  double a1 = 0.0, b1 = 0.0, a2 = 0.0, b2 = 0.0;
  double vc = 0.0, vs = 0.0, ws = 0.0;
  bool active = false;
};

SplitStepPropagator::SplitStepPropagator(const SpatialGrid& grid,
                                         std::vector<FieldStage> stages, Backend backend,
                                         double dt, SplitStepOptions options)
    : grid_(grid),
      stages_(std::move(stages)),
      backend_(backend),
      dt_(dt),
      options_(options),
      fft_(grid.points(), 2) {
  if (backend == Backend::mode_lattice) {
    throw std::invalid_argument("split-step propagator supports full-field and effective only");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("timestep must be positive");
  const std::size_t n = grid_.points();
  const double inv_n = 1.0 / static_cast<double>(n);
  kinetic_half_.resize(n);
  kinetic_full_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double p = grid_.momentum(j);
    const double e = p * p / (2.0 * units::electron_rest_energy);
    // The 1/n of the inverse transform is folded into the multipliers.
    kinetic_half_[j] = std::polar(inv_n, -0.5 * e * dt_);
    kinetic_full_[j] = std::polar(inv_n, -e * dt_);
  }
  if (!stages_.empty()) {
    const double k = stages_.front().wavenumber();
    cos1_.resize(n);
    sin1_.resize(n);
    cos2_.resize(n);
    sin2_.resize(n);
    cos4_.resize(n);
    sin4_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double z = grid_.position(j);
      cos1_[j] = std::cos(k * z);
      sin1_[j] = std::sin(k * z);
      cos2_[j] = std::cos(2.0 * k * z);
      sin2_[j] = std::sin(2.0 * k * z);
      cos4_[j] = std::cos(4.0 * k * z);
      sin4_[j] = std::sin(4.0 * k * z);
    }
  }
}

SplitStepPropagator::Coefficients SplitStepPropagator::coefficients(double t) const {
  Coefficients c;
  const double te = options_.time_reversed ? options_.reverse_origin - t : t;
  for (const auto& st : stages_) {
    const double f = st.envelope_at(te);
    if (f == 0.0) continue;
    c.active = true;
    if (backend_ == Backend::full_field) {
      if (const auto* m = std::get_if<MonoStandingWave>(&st.wave())) {
        const double amp = f * m->standing_amplitude() * std::cos(2.0 * m->photon_energy * te);
        c.a2 += amp * std::cos(0.5 * m->chi);
        c.b2 -= amp * std::sin(0.5 * m->chi);
      } else {
        const auto& b = std::get<BichromaticWave>(st.wave());
        const double om = b.photon_energy;
        c.a1 += f * b.amplitude1 * std::cos(om * te);
        c.b1 += f * b.amplitude1 * std::sin(om * te);
        c.a2 += f * b.amplitude2 * std::cos(2.0 * om * te);
        c.b2 -= f * b.amplitude2 * std::sin(2.0 * om * te);
      }
    } else {
      const double v = st.rabi_frequency() * std::pow(f, st.envelope_power());
      if (const auto* m = std::get_if<MonoStandingWave>(&st.wave())) {
        c.vc += v * std::cos(m->chi);
        c.vs -= v * std::sin(m->chi);
      } else {
        c.ws -= v;
      }
    }
  }
  return c;
}

void SplitStepPropagator::kinetic(std::span<Complex> data, bool half) const {
  const auto& mult = half ? kinetic_half_ : kinetic_full_;
  const std::size_t n = grid_.points();
  const double* m = reinterpret_cast<const double*>(mult.data());
  double* up = reinterpret_cast<double*>(data.data());
  double* down = up + 2 * n;
  // Real arithmetic: std::complex products go through the NaN-aware slow path.
  for (std::size_t j = 0; j < n; ++j) {
    const double mr = m[2 * j], mi = m[2 * j + 1];
    const double ur = up[2 * j], ui = up[2 * j + 1];
    const double dr = down[2 * j], di = down[2 * j + 1];
    up[2 * j] = mr * ur - mi * ui;
    up[2 * j + 1] = mr * ui + mi * ur;
    down[2 * j] = mr * dr - mi * di;
    down[2 * j + 1] = mr * di + mi * dr;
  }
}

namespace {

// Applies exp(-i (a + b sigma_y)) = exp(-i a) (cos b - i sin b sigma_y) at
// every point, with the angles produced by `angles(j, a, b)`.
template <bool Fast, class Angles>
void rotate_spinors(double* up, double* down, std::size_t n, Angles angles) {
  for (std::size_t j = 0; j < n; ++j) {
    double a, b;
    angles(j, a, b);
    double sa, ca, sb, cb;
    if constexpr (Fast) {
      small_sincos(a, sa, ca);
      small_sincos(b, sb, cb);
    } else {
      sa = std::sin(a);
      ca = std::cos(a);
      sb = std::sin(b);
      cb = std::cos(b);
    }
    const double ur = up[2 * j], ui = up[2 * j + 1];
    const double dr = down[2 * j], di = down[2 * j + 1];
    const double xr = cb * ur - sb * dr, xi = cb * ui - sb * di;
    const double yr = sb * ur + cb * dr, yi = sb * ui + cb * di;
    up[2 * j] = ca * xr + sa * xi;
    up[2 * j + 1] = ca * xi - sa * xr;
    down[2 * j] = ca * yr + sa * yi;
    down[2 * j + 1] = ca * yi - sa * yr;
  }
}

template <class Angles>
void rotate_spinors(double* up, double* down, std::size_t n, bool fast, Angles angles) {
  if (fast) {
    rotate_spinors<true>(up, down, n, angles);
  } else {
    rotate_spinors<false>(up, down, n, angles);
  }
}

}  // namespace

void SplitStepPropagator::potential(SpinorWavefunction& psi, double t) const {
  const Coefficients c = coefficients(t);
  if (!c.active) return;
  const std::size_t n = grid_.points();
  double* up = reinterpret_cast<double*>(psi.up().data());
  double* down = reinterpret_cast<double*>(psi.down().data());
  const double spin_sign = options_.time_reversed ? -1.0 : 1.0;

  if (backend_ == Backend::full_field) {
    const double k = stages_.front().wavenumber();
    const double scale = dt_ / (2.0 * units::electron_rest_energy);
    const double u_max = std::abs(c.a1) + std::abs(c.b1) + std::abs(c.a2) + std::abs(c.b2);
    const double b_max = k * (std::abs(c.a1) + std::abs(c.b1)) +
                         2.0 * k * (std::abs(c.a2) + std::abs(c.b2));
    const bool fast = u_max * u_max * scale <= kSmallAngle && b_max * scale <= kSmallAngle;
    // Derivative coefficients folded with the step scale.
    const double d1c = k * c.b1 * spin_sign * scale, d1s = -k * c.a1 * spin_sign * scale;
    const double d2c = 2.0 * k * c.b2 * spin_sign * scale;
    const double d2s = -2.0 * k * c.a2 * spin_sign * scale;
    const double* c1 = cos1_.data();
    const double* s1 = sin1_.data();
    const double* c2 = cos2_.data();
    const double* s2 = sin2_.data();
    rotate_spinors(up, down, n, fast, [&](std::size_t j, double& a, double& b) {
      const double u = c.a1 * c1[j] + c.b1 * s1[j] + c.a2 * c2[j] + c.b2 * s2[j];
      a = u * u * scale;
      b = d1c * c1[j] + d1s * s1[j] + d2c * c2[j] + d2s * s2[j];
    });
  } else {
    const bool fast = (std::abs(c.vc) + std::abs(c.vs)) * dt_ <= kSmallAngle &&
                      std::abs(c.ws) * dt_ <= kSmallAngle;
    const double vc = c.vc * dt_, vs = c.vs * dt_, ws = spin_sign * c.ws * dt_;
    const double* c4 = cos4_.data();
    const double* s4 = sin4_.data();
    rotate_spinors(up, down, n, fast, [&](std::size_t j, double& a, double& b) {
      a = vc * c4[j] + vs * s4[j];
      b = ws * s4[j];
    });
  }
}

void SplitStepPropagator::advance(SpinorWavefunction& psi, double t, std::size_t n) const {
  if (n == 0) return;
  if (!(psi.grid() == grid_)) throw std::invalid_argument("wavefunction grid mismatch");
  auto data = psi.data();
  fft_.forward(data);
  kinetic(data, true);
  for (std::size_t i = 0; i < n; ++i) {
    fft_.backward_unscaled(data);
    potential(psi, t + (static_cast<double>(i) + 0.5) * dt_);
    fft_.forward(data);
    kinetic(data, i + 1 == n);
  }
  fft_.backward_unscaled(data);
  const double norm = psi.norm();
  if (!std::isfinite(norm)) {
    throw std::runtime_error("split-step propagation produced a non-finite state near t = " +
                             std::to_string(units::to_fs(t + n * dt_)) + " fs");
  }
}

void step_full_field(SpinorWavefunction& psi, std::span<const FieldStage> stages, double t,
                     double dt) {
  SplitStepPropagator prop(psi.grid(), {stages.begin(), stages.end()}, Backend::full_field, dt);
  prop.advance(psi, t, 1);
}

void step_effective(SpinorWavefunction& psi, std::span<const FieldStage> stages, double t,
                    double dt) {
  SplitStepPropagator prop(psi.grid(), {stages.begin(), stages.end()}, Backend::effective, dt);
  prop.advance(psi, t, 1);
}

SeriesRow make_series_row(double t, const ChannelReport& report, double norm,
                          double reference_norm, double sigma_y) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  SeriesRow row;
  row.t = t;
  row.report = report;
  row.poldeg_plus = report.population_plus >= 1e-6 ? std::abs(report.bloch_plus.y) : nan;
  row.poldeg_minus = report.population_minus >= 1e-6 ? std::abs(report.bloch_minus.y) : nan;
  row.entropy = report.population_plus + report.population_minus > 1e-12
                    ? spin_momentum_entanglement(report)
                    : nan;
  row.norm_drift = std::abs(norm / reference_norm - 1.0);
  row.sigma_y = sigma_y;
  return row;
}

namespace {

struct Schedule {
  std::size_t steps = 0;
  std::size_t stride = 1;
  double dt = 0.0;
};

Schedule schedule(const Scenario& s) {
  Schedule sc;
  const double requested = s.config.timestep > 0.0 ? s.config.timestep : default_timestep(s);
  if (s.duration == 0.0) {
    sc.dt = requested;
    return sc;
  }
  sc.steps = static_cast<std::size_t>(std::ceil(s.duration / requested - 1e-9));
  sc.steps = std::max<std::size_t>(sc.steps, 1);
  sc.dt = s.duration / static_cast<double>(sc.steps);
  const double cadence = s.config.snapshot_every > 0.0 ? s.config.snapshot_every
                                                       : units::from_fs(1.0);
  sc.stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(cadence / sc.dt)));
  return sc;
}

// Fraction of the norm within the top 10% of the momentum grid.
double momentum_edge_fraction(const MomentumAmplitudes& phi) {
  const double cutoff = 0.9 * units::pi / phi.grid().spacing();
  const auto up = phi.up();
  const auto down = phi.down();
  double edge = 0.0, total = 0.0;
  for (std::size_t j = 0; j < up.size(); ++j) {
    const double w = std::norm(up[j]) + std::norm(down[j]);
    total += w;
    if (std::abs(phi.momentum(j)) > cutoff) edge += w;
  }
  return total > 0.0 ? edge / total : 0.0;
}

void record(RunResult& r, SeriesRow row, double sigma_y0) {
  r.max_norm_drift = std::max(r.max_norm_drift, row.norm_drift);
  r.max_sigma_y_drift = std::max(r.max_sigma_y_drift, std::abs(row.sigma_y - sigma_y0));
  r.series.push_back(std::move(row));
}

RunResult run_grid(const Scenario& s, const Schedule& sc, const SnapshotObserver& observer) {
  RunResult r;
  r.dt = sc.dt;
  r.steps = sc.steps;
  const double k = s.wavenumber() > 0.0 ? s.wavenumber() : 0.5 * s.electron.central_momentum;
  SpinorWavefunction psi = gaussian_packet(s.grid, s.electron.center, s.electron.width,
                                           s.electron.central_momentum, s.electron.spin);
  const SplitStepPropagator prop(s.grid, s.stages, s.config.backend, sc.dt);
  const double norm0 = psi.norm();
  const double sy0 = psi.spin_moments().y / norm0;
  bool warned = false;
  auto sample = [&](double t) {
    const double norm = psi.norm();
    const double sy = psi.spin_moments().y / norm;
    const MomentumAmplitudes phi(psi, prop.fft());
    ChannelReport rep;
    if (k > 0.0) rep = channel_report(phi, k, k);
    record(r, make_series_row(t, rep, norm, norm0, sy), sy0);
    if (!warned && momentum_edge_fraction(phi) > 1e-6) {
      warned = true;
      r.warnings.push_back("grid: population above 90% of the momentum cutoff exceeds 1e-6 at t = " +
                           std::to_string(units::to_fs(t)) + " fs; refine the grid");
    }
    if (observer) observer(Snapshot{t, &psi, nullptr});
  };
  sample(0.0);
  std::size_t done = 0;
  while (done < sc.steps) {
    const std::size_t n = std::min(sc.stride, sc.steps - done);
    prop.advance(psi, static_cast<double>(done) * sc.dt, n);
    done += n;
    sample(static_cast<double>(done) * sc.dt);
  }
  r.final_state = std::move(psi);
  return r;
}

RunResult run_lattice(const Scenario& s, const Schedule& sc, const SnapshotObserver& observer) {
  RunResult r;
  r.dt = sc.dt;
  r.steps = sc.steps;
  const double k = s.wavenumber();
  const double sigma_p = 1.0 / (2.0 * s.electron.width);
  LatticeEnsemble ens = LatticeEnsemble::from_packet(
      s.electron.central_momentum, sigma_p, s.electron.spin, s.config.mode_half_width, k,
      s.config.quadrature_nodes, s.config.lattice_coupling);
  const double norm0 = ens.norm();
  const double sy0 = ens.sigma_y_moment() / norm0;
  bool warned = false;
  auto sample = [&](double t) {
    const double norm = ens.norm();
    record(r,
           make_series_row(t, channel_report(ens, k, k), norm, norm0,
                           ens.sigma_y_moment() / norm),
           sy0);
    if (!warned && ens.edge_population() > 1e-6) {
      warned = true;
      r.warnings.push_back("mode lattice: population at |n| = N exceeds 1e-6 at t = " +
                           std::to_string(units::to_fs(t)) + " fs; increase the half-width");
    }
    if (observer) observer(Snapshot{t, nullptr, &ens});
  };
  sample(0.0);
  for (std::size_t i = 0; i < sc.steps; ++i) {
    const double t = static_cast<double>(i) * sc.dt;
    for (auto& m : ens.members) m.lattice.step(m.amplitudes, s.stages, t, sc.dt);
    if ((i + 1) % sc.stride == 0 || i + 1 == sc.steps) {
      if (!std::isfinite(ens.norm())) {
        throw std::runtime_error("mode-lattice propagation produced a non-finite state");
      }
      sample(static_cast<double>(i + 1) * sc.dt);
    }
  }
  r.final_lattice = std::move(ens);
  return r;
}

}  // namespace

RunResult run_scenario(const Scenario& s, const SnapshotObserver& observer) {
  s.validate();
  const Schedule sc = schedule(s);
  if (s.config.backend == Backend::mode_lattice) return run_lattice(s, sc, observer);
  return run_grid(s, sc, observer);
}

}  // namespace spinsplit
