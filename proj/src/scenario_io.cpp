#include "spinsplit/scenario_io.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <cstring>
#include <fmt/format.h>
#include <fstream>
#include <openssl/evp.h>
#include <regex>
#include <set>
#include <sstream>

#include "spinsplit/units.hpp"

namespace spinsplit {
namespace {

std::string join_errors(const std::vector<std::string>& errors) {
  std::string s = "invalid scenario:";
  for (const auto& e : errors) s += "\n  " + e;
  return s;
}

struct UnitScales {
  double time = units::from_fs(1.0);     // internal units per file unit
  double length = units::from_um(1.0);
  double energy = 1.0;
  std::string time_name = "fs";
  std::string length_name = "um";
  std::string energy_name = "eV";
};

// Stage as written in the file; turned into a FieldStage once the amplitude
// convention is final.
struct RawStage {
  std::string label;
  StageKind kind = StageKind::monochromatic;
  double a0 = 0.0, a1 = 0.0, a2 = 0.0;
  double photon_energy = 0.0;
  double chi = 0.0;
  double rise = 0.0, fall = 0.0;
  std::optional<double> plateau;
  std::optional<double> area;
  std::optional<double> start;
  std::optional<AmplitudeConvention> convention;
  int line = 0;
};

class Reader {
 public:
  std::vector<std::string> errors;

  void error(const YAML::Node& n, const std::string& msg) {
    errors.push_back(fmt::format("line {}: {}", n.Mark().line + 1, msg));
  }

  bool is_map(const YAML::Node& n, const std::string& what) {
    if (n.IsMap()) return true;
    error(n, what + " must be a mapping");
    return false;
  }

  void check_keys(const YAML::Node& map, const std::set<std::string>& allowed,
                  const std::string& section) {
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.count(key)) error(kv.first, "unknown key '" + key + "' in " + section);
    }
  }

  std::optional<double> number(const YAML::Node& map, const std::string& key,
                               const std::string& section, bool required) {
    const YAML::Node n = map[key];
    if (!n) {
      if (required) error(map, "missing required field '" + section + "." + key + "'");
      return std::nullopt;
    }
    try {
      if (n.IsScalar()) {
        const auto text = n.as<std::string>();
        if (text.find("pi") != std::string::npos) return parse_angle(text);
        return n.as<double>();
      }
    } catch (const std::exception&) {
    }
    error(n, "field '" + section + "." + key + "' must be a number");
    return std::nullopt;
  }

  std::optional<double> non_negative(const YAML::Node& map, const std::string& key,
                                     const std::string& section, bool required) {
    auto v = number(map, key, section, required);
    if (v && (*v < 0.0 || !std::isfinite(*v))) {
      error(map[key], "field '" + section + "." + key + "' must be non-negative");
      return std::nullopt;
    }
    return v;
  }

  std::optional<double> positive(const YAML::Node& map, const std::string& key,
                                 const std::string& section, bool required) {
    auto v = number(map, key, section, required);
    if (v && !(*v > 0.0 && std::isfinite(*v))) {
      error(map[key], "field '" + section + "." + key + "' must be positive");
      return std::nullopt;
    }
    return v;
  }

  std::optional<std::string> text(const YAML::Node& map, const std::string& key,
                                  const std::string& section, bool required) {
    const YAML::Node n = map[key];
    if (!n) {
      if (required) error(map, "missing required field '" + section + "." + key + "'");
      return std::nullopt;
    }
    if (!n.IsScalar()) {
      error(n, "field '" + section + "." + key + "' must be a string");
      return std::nullopt;
    }
    return n.as<std::string>();
  }

  std::optional<int> integer(const YAML::Node& map, const std::string& key,
                             const std::string& section) {
    const YAML::Node n = map[key];
    if (!n) return std::nullopt;
    try {
      return n.as<int>();
    } catch (const std::exception&) {
      error(n, "field '" + section + "." + key + "' must be an integer");
      return std::nullopt;
    }
  }

  template <class F>
  auto choice(const YAML::Node& map, const std::string& key, const std::string& section, F parse)
      -> std::optional<decltype(parse(std::string{}))> {
    const auto t = text(map, key, section, false);
    if (!t) return std::nullopt;
    try {
      return parse(*t);
    } catch (const std::exception& e) {
      error(map[key], e.what());
      return std::nullopt;
    }
  }
};

UnitScales read_units(Reader& rd, const YAML::Node& n) {
  UnitScales u;
  if (!n) return u;
  if (!rd.is_map(n, "units")) return u;
  rd.check_keys(n, {"time", "length", "energy", "amplitude_convention"}, "units");
  if (auto t = rd.text(n, "time", "units", false)) {
    if (*t == "fs") {
      u.time = units::from_fs(1.0);
    } else if (*t == "as") {
      u.time = units::from_as(1.0);
    } else {
      rd.error(n["time"], "unsupported time unit '" + *t + "' (expected fs or as)");
    }
    u.time_name = *t;
  }
  if (auto l = rd.text(n, "length", "units", false)) {
    if (*l == "um") {
      u.length = units::from_um(1.0);
    } else if (*l == "nm") {
      u.length = units::from_nm(1.0);
    } else {
      rd.error(n["length"], "unsupported length unit '" + *l + "' (expected um or nm)");
    }
    u.length_name = *l;
  }
  if (auto e = rd.text(n, "energy", "units", false)) {
    if (*e == "eV") {
      u.energy = 1.0;
    } else if (*e == "keV") {
      u.energy = 1e3;
    } else {
      rd.error(n["energy"], "unsupported energy unit '" + *e + "' (expected eV or keV)");
    }
    u.energy_name = *e;
  }
  return u;
}

Spinor read_spin(Reader& rd, const YAML::Node& n) {
  if (!n) return spin::up();
  if (n.IsScalar()) {
    const auto s = n.as<std::string>();
    if (s == "up") return spin::up();
    if (s == "down") return spin::down();
    if (s == "plus_y") return spin::plus_y();
    if (s == "minus_y") return spin::minus_y();
    rd.error(n, "unknown spin '" + s + "' (expected up, down, plus_y, minus_y or a list)");
    return spin::up();
  }
  if (n.IsSequence() && n.size() == 4) {
    try {
      Spinor s(Complex(n[0].as<double>(), n[1].as<double>()),
               Complex(n[2].as<double>(), n[3].as<double>()));
      if (s.norm() == 0.0) {
        rd.error(n, "electron.spin must not be zero");
        return spin::up();
      }
      return s.normalized();
    } catch (const std::exception&) {
    }
  }
  rd.error(n, "electron.spin must be a name or [re_up, im_up, re_down, im_down]");
  return spin::up();
}

std::optional<RawStage> read_stage(Reader& rd, const YAML::Node& n, std::size_t index,
                                   const UnitScales& u) {
  const std::string section = fmt::format("stages[{}]", index);
  if (!rd.is_map(n, section)) return std::nullopt;
  RawStage st;
  st.line = n.Mark().line + 1;
  st.label = rd.text(n, "label", section, false).value_or(fmt::format("stage{}", index + 1));
  const auto kind = rd.text(n, "kind", section, true);
  if (!kind) return std::nullopt;
  if (*kind == "monochromatic" || *kind == "mono") {
    st.kind = StageKind::monochromatic;
    rd.check_keys(n, {"label", "kind", "a0", "photon_energy", "chi", "rise", "plateau", "fall",
                      "area", "start", "convention"},
                  section);
    st.a0 = rd.non_negative(n, "a0", section, true).value_or(0.0) * u.energy;
    st.chi = rd.number(n, "chi", section, false).value_or(0.0);
    st.convention = rd.choice(n, "convention", section, parse_convention);
  } else if (*kind == "bichromatic" || *kind == "bi") {
    st.kind = StageKind::bichromatic;
    rd.check_keys(n, {"label", "kind", "a1", "a2", "photon_energy", "rise", "plateau", "fall",
                      "area", "start"},
                  section);
    st.a1 = rd.non_negative(n, "a1", section, true).value_or(0.0) * u.energy;
    st.a2 = rd.non_negative(n, "a2", section, true).value_or(0.0) * u.energy;
  } else {
    rd.error(n["kind"], "unknown stage kind '" + *kind + "' (expected monochromatic or bichromatic)");
    return std::nullopt;
  }
  st.photon_energy = rd.positive(n, "photon_energy", section, true).value_or(1.0) * u.energy;
  st.rise = rd.non_negative(n, "rise", section, false).value_or(0.0) * u.time;
  st.fall = rd.non_negative(n, "fall", section, false).value_or(0.0) * u.time;
  if (auto p = rd.non_negative(n, "plateau", section, false)) st.plateau = *p * u.time;
  if (auto a = rd.non_negative(n, "area", section, false)) st.area = *a;
  if (auto s = rd.non_negative(n, "start", section, false)) st.start = *s * u.time;
  if (st.plateau && st.area) rd.error(n, section + ": give either 'plateau' or 'area', not both");
  if (!st.plateau && !st.area) rd.error(n, section + ": missing 'plateau' or 'area'");
  return st;
}

FieldStage build_stage(const RawStage& r, AmplitudeConvention convention, double start) {
  Envelope env{r.rise, r.plateau.value_or(0.0), r.fall};
  FieldStage::Wave wave;
  if (r.kind == StageKind::monochromatic) {
    wave = MonoStandingWave{r.a0, r.photon_energy, r.chi, r.convention.value_or(convention),
                            env, start};
  } else {
    wave = BichromaticWave{r.a1, r.a2, r.photon_energy, env, start};
  }
  FieldStage stage(r.label, wave);
  if (!r.area) return stage;
  // Solve the plateau from the requested pulse area with the exact edge
  // integrals.
  const double omega = stage.rabi_frequency();
  if (!(omega > 0.0)) throw std::invalid_argument("'area' needs a non-zero amplitude");
  Envelope edges{r.rise, 0.0, r.fall};
  const double plateau = *r.area / omega - edges.power_integral(stage.envelope_power());
  if (plateau < 0.0) {
    throw std::invalid_argument("requested area is smaller than the edges alone provide");
  }
  env.plateau = plateau;
  if (auto* m = std::get_if<MonoStandingWave>(&wave)) {
    m->envelope = env;
  } else {
    std::get<BichromaticWave>(wave).envelope = env;
  }
  return FieldStage(r.label, wave);
}

std::optional<design::DesignInputs> read_design(Reader& rd, const YAML::Node& n,
                                                const UnitScales& u) {
  if (!n) return std::nullopt;
  if (!rd.is_map(n, "design")) return std::nullopt;
  rd.check_keys(n, {"photon_energy", "xi1", "xi2", "a0", "kinetic_energy", "waist_x",
                    "pulse_duration", "dpy_over_py", "dl_over_l", "dpx"},
                "design");
  design::DesignInputs d;
  if (auto v = rd.positive(n, "photon_energy", "design", false)) d.photon_energy = *v * u.energy;
  if (auto v = rd.positive(n, "xi1", "design", false)) d.xi1 = *v;
  if (auto v = rd.positive(n, "xi2", "design", false)) d.xi2 = *v;
  if (auto v = rd.positive(n, "a0", "design", false)) d.mono_amplitude = *v * u.energy;
  if (auto v = rd.positive(n, "kinetic_energy", "design", false)) d.kinetic_energy = *v * u.energy;
  if (auto v = rd.non_negative(n, "waist_x", "design", false)) {
    d.waist_x_um = units::to_um(*v * u.length);
  }
  if (auto v = rd.non_negative(n, "pulse_duration", "design", false)) {
    d.pulse_duration_fs = units::to_fs(*v * u.time);
  }
  if (auto v = rd.non_negative(n, "dpy_over_py", "design", false)) d.tolerances.dpy_over_py = *v;
  if (auto v = rd.non_negative(n, "dl_over_l", "design", false)) d.tolerances.dl_over_l = *v;
  if (auto v = rd.non_negative(n, "dpx", "design", false)) d.tolerances.dpx = *v * u.energy;
  return d;
}

}  // namespace

ScenarioError::ScenarioError(std::vector<std::string> errors)
    : std::runtime_error(join_errors(errors)), errors_(std::move(errors)) {}

double parse_angle(const std::string& text) {
  static const std::regex re(
      R"(^\s*([+-])?\s*(\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)?\s*(\*)?\s*(pi)?\s*(?:/\s*(\d+(?:\.\d*)?))?\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, re) || (!m[2].matched && !m[4].matched)) {
    throw std::invalid_argument("cannot parse angle '" + text + "'");
  }
  if (m[3].matched && !(m[2].matched && m[4].matched)) {
    throw std::invalid_argument("cannot parse angle '" + text + "'");
  }
  double v = m[2].matched ? std::stod(m[2].str()) : 1.0;
  if (m[4].matched) v *= units::pi;
  if (m[5].matched) {
    const double d = std::stod(m[5].str());
    if (d == 0.0) throw std::invalid_argument("division by zero in angle '" + text + "'");
    v /= d;
  }
  if (m[1].matched && m[1].str() == "-") v = -v;
  return v;
}

AmplitudeConvention parse_convention(const std::string& name) {
  if (name == "traveling" || name == "travelling") return AmplitudeConvention::traveling;
  if (name == "standing") return AmplitudeConvention::standing;
  throw std::invalid_argument("unknown amplitude convention '" + name +
                              "' (expected standing or traveling)");
}

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "binary") return OutputFormat::binary;
  throw std::invalid_argument("unknown output format '" + name + "' (expected csv or binary)");
}

namespace {

WavefunctionOutput parse_wavefunctions(const std::string& name) {
  if (name == "none") return WavefunctionOutput::none;
  if (name == "final") return WavefunctionOutput::final;
  if (name == "all") return WavefunctionOutput::all;
  throw std::invalid_argument("unknown wavefunctions choice '" + name +
                              "' (expected none, final or all)");
}

LatticeCoupling parse_coupling(const std::string& name) {
  if (name == "full-field" || name == "full_field") return LatticeCoupling::full_field;
  if (name == "effective") return LatticeCoupling::effective;
  throw std::invalid_argument("unknown lattice coupling '" + name +
                              "' (expected full-field or effective)");
}

}  // namespace

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
  return hex;
}

LoadedScenario parse_scenario_text(const std::string& text, const ScenarioOverrides& ov) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ScenarioError({fmt::format("line {}: {}", e.mark.line + 1, e.msg)});
  }
  Reader rd;
  if (!root.IsMap()) throw ScenarioError({"line 1: scenario document must be a mapping"});
  rd.check_keys(root, {"name", "description", "units", "electron", "stages", "duration",
                       "propagation", "outputs", "design"},
                "scenario");

  LoadedScenario out;
  out.source = text;
  out.sha256 = sha256_hex(text);
  Scenario& s = out.scenario;
  s.name = rd.text(root, "name", "scenario", false).value_or("unnamed");

  const UnitScales u = read_units(rd, root["units"]);
  AmplitudeConvention convention = AmplitudeConvention::traveling;
  if (root["units"] && root["units"].IsMap()) {
    if (auto c = rd.choice(root["units"], "amplitude_convention", "units", parse_convention)) {
      convention = *c;
    }
  }
  if (ov.convention) convention = *ov.convention;

  // electron
  if (const YAML::Node e = root["electron"]; !e) {
    rd.error(root, "missing required section 'electron'");
  } else if (rd.is_map(e, "electron")) {
    rd.check_keys(e, {"center", "width", "momentum", "spin"}, "electron");
    s.electron.center = rd.number(e, "center", "electron", false).value_or(0.0) * u.length;
    s.electron.width = rd.positive(e, "width", "electron", true).value_or(1.0) * u.length;
    s.electron.central_momentum =
        rd.number(e, "momentum", "electron", true).value_or(0.0) * u.energy;
    s.electron.spin = read_spin(rd, e["spin"]);
  }

  // stages
  std::vector<RawStage> raw;
  if (const YAML::Node st = root["stages"]) {
    if (!st.IsSequence() && !st.IsNull()) {
      rd.error(st, "'stages' must be a list");
    } else if (st.IsSequence()) {
      for (std::size_t i = 0; i < st.size(); ++i) {
        if (auto r = read_stage(rd, st[i], i, u)) raw.push_back(*r);
      }
    }
  }

  // propagation
  PropagationConfig& cfg = s.config;
  double grid_length = units::from_um(3.0);
  std::size_t grid_points = 16384;
  double grid_origin = 0.0;
  int grid_line = 1;
  if (const YAML::Node p = root["propagation"]; p && rd.is_map(p, "propagation")) {
    rd.check_keys(p, {"backend", "grid", "dt", "snapshot_every", "mode_half_width",
                      "quadrature_nodes", "lattice_coupling"},
                  "propagation");
    if (auto b = rd.choice(p, "backend", "propagation", parse_backend)) cfg.backend = *b;
    if (auto c = rd.choice(p, "lattice_coupling", "propagation", parse_coupling)) {
      cfg.lattice_coupling = *c;
    }
    if (auto dt = rd.non_negative(p, "dt", "propagation", false)) cfg.timestep = *dt * u.time;
    if (auto se = rd.non_negative(p, "snapshot_every", "propagation", false)) {
      cfg.snapshot_every = *se * u.time;
    }
    if (auto n = rd.integer(p, "mode_half_width", "propagation")) cfg.mode_half_width = *n;
    if (auto n = rd.integer(p, "quadrature_nodes", "propagation")) cfg.quadrature_nodes = *n;
    if (p["grid"]) grid_line = p["grid"].Mark().line + 1;
    if (const YAML::Node g = p["grid"]; g && rd.is_map(g, "propagation.grid")) {
      rd.check_keys(g, {"length", "points", "origin"}, "propagation.grid");
      if (auto l = rd.positive(g, "length", "propagation.grid", false)) grid_length = *l * u.length;
      if (auto o = rd.number(g, "origin", "propagation.grid", false)) grid_origin = *o * u.length;
      if (auto n = rd.integer(g, "points", "propagation.grid")) {
        if (*n <= 0) {
          rd.error(g["points"], "field 'propagation.grid.points' must be positive");
        } else {
          grid_points = static_cast<std::size_t>(*n);
        }
      }
    }
  }

  // outputs
  if (const YAML::Node o = root["outputs"]; o && rd.is_map(o, "outputs")) {
    rd.check_keys(o, {"directory", "format", "wavefunctions"}, "outputs");
    if (auto d = rd.text(o, "directory", "outputs", false)) out.outputs.directory = *d;
    if (auto f = rd.choice(o, "format", "outputs", parse_format)) out.outputs.format = *f;
    if (auto w = rd.choice(o, "wavefunctions", "outputs", parse_wavefunctions)) {
      out.outputs.wavefunctions = *w;
    }
  }
  out.design = read_design(rd, root["design"], u);

  std::optional<double> duration;
  if (root["duration"]) duration = rd.non_negative(root, "duration", "scenario", false);

  if (!rd.errors.empty()) throw ScenarioError(rd.errors);

  // Overrides.
  if (ov.backend) cfg.backend = *ov.backend;
  if (ov.snapshot_every_fs) cfg.snapshot_every = units::from_fs(*ov.snapshot_every_fs);
  if (ov.grid_points) grid_points = *ov.grid_points;
  if (ov.dt_as) cfg.timestep = units::from_as(*ov.dt_as);
  if (ov.format) out.outputs.format = *ov.format;
  if (ov.out) out.outputs.directory = *ov.out;

  try {
    double previous_end = 0.0;
    for (const auto& r : raw) {
      try {
        FieldStage st = build_stage(r, convention, r.start.value_or(previous_end));
        previous_end = st.end();
        s.stages.push_back(std::move(st));
      } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(fmt::format("line {}: stage '{}': {}", r.line, r.label, e.what()));
      }
    }
    if (duration) {
      s.duration = *duration * u.time;
    } else if (!s.stages.empty()) {
      double end = 0.0;
      for (const auto& st : s.stages) end = std::max(end, st.end());
      s.duration = end;
    } else {
      throw std::invalid_argument("missing 'duration' (required without stages)");
    }
    const double k = s.stages.empty() ? 0.0 : s.stages.front().wavenumber();
    try {
      s.grid = SpatialGrid(grid_length, grid_points, grid_origin, k);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(fmt::format("line {}: {}", grid_line, e.what()));
    }
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ScenarioError({e.what()});
  }
  return out;
}

LoadedScenario parse_scenario(const std::filesystem::path& path, const ScenarioOverrides& ov) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError({"cannot open scenario file '" + path.string() + "'"});
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario_text(ss.str(), ov);
}

std::string metadata_header(const LoadedScenario& s, const std::string& content) {
  std::string h;
  h += fmt::format("# tool: {}\n", kToolVersion);
  h += fmt::format("# content: {}\n", content);
  h += fmt::format("# scenario: {}\n", s.scenario.name);
  h += fmt::format("# scenario_sha256: {}\n", s.sha256);
  h += "# units: time=fs length=um energy=eV momentum=eV/c amplitude=um^-1/2\n";
  h += fmt::format("# backend: {}\n", backend_name(s.scenario.config.backend));
  return h;
}

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (v == 0.0) v = 0.0;
  return fmt::format("{:.10e}", v);
}

}  // namespace

std::string format_series(const LoadedScenario& s, const RunResult& r) {
  std::string out = metadata_header(s, "time series");
  out += fmt::format("# dt_as: {}\n", num(units::to_as(r.dt)));
  out += "t_fs,pop_plus,pop_minus,sy_plus,sy_minus,poldeg_plus,poldeg_minus,entropy,norm_drift\n";
  for (const auto& row : r.series) {
    out += fmt::format("{},{},{},{},{},{},{},{},{}\n", num(units::to_fs(row.t)),
                       num(row.report.population_plus), num(row.report.population_minus),
                       num(row.report.bloch_plus.y), num(row.report.bloch_minus.y),
                       num(row.poldeg_plus), num(row.poldeg_minus), num(row.entropy),
                       num(row.norm_drift));
  }
  return out;
}

std::string format_wavefunction_csv(const LoadedScenario& s, double t,
                                    const SpinorWavefunction& psi) {
  std::string out = metadata_header(s, "wavefunction snapshot");
  out += fmt::format("# t_fs: {}\n# norm: {}\n", num(units::to_fs(t)), num(psi.norm()));
  out += "z_um,re_up,im_up,re_down,im_down\n";
  const double scale = 1.0 / std::sqrt(units::um_per_length_unit);
  const auto up = psi.up();
  const auto down = psi.down();
  for (std::size_t j = 0; j < psi.size(); ++j) {
    out += fmt::format("{},{},{},{},{}\n", num(units::to_um(psi.grid().position(j))),
                       num(scale * up[j].real()), num(scale * up[j].imag()),
                       num(scale * down[j].real()), num(scale * down[j].imag()));
  }
  return out;
}

namespace {

constexpr char kMagic[8] = {'S', 'P', 'S', 'N', 'A', 'P', '0', '1'};

template <class T>
void put(std::ofstream& f, const T& v) {
  f.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& f) {
  T v{};
  f.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!f) throw std::runtime_error("truncated snapshot file");
  return v;
}

}  // namespace

SnapshotWriter::SnapshotWriter(const std::filesystem::path& path, const std::string& header)
    : path_(path) {
  std::ofstream f(path_, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path_.string());
  f.write(kMagic, sizeof(kMagic));
  put<std::uint64_t>(f, header.size());
  f.write(header.data(), static_cast<std::streamsize>(header.size()));
}

void SnapshotWriter::write(double t, const SpinorWavefunction& psi) {
  std::ofstream f(path_, std::ios::binary | std::ios::app);
  if (!f) throw std::runtime_error("cannot append to " + path_.string());
  put(f, t);
  put(f, psi.norm());
  put<std::uint64_t>(f, psi.size());
  const double scale = 1.0 / std::sqrt(units::um_per_length_unit);
  const auto up = psi.up();
  const auto down = psi.down();
  std::vector<double> row(5 * psi.size());
  for (std::size_t j = 0; j < psi.size(); ++j) {
    row[5 * j] = units::to_um(psi.grid().position(j));
    row[5 * j + 1] = scale * up[j].real();
    row[5 * j + 2] = scale * up[j].imag();
    row[5 * j + 3] = scale * down[j].real();
    row[5 * j + 4] = scale * down[j].imag();
  }
  f.write(reinterpret_cast<const char*>(row.data()),
          static_cast<std::streamsize>(row.size() * sizeof(double)));
}

SnapshotFile read_snapshots(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  char magic[8];
  f.read(magic, sizeof(magic));
  if (!f || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error(path.string() + " is not a snapshot container");
  }
  SnapshotFile out;
  const auto hlen = get<std::uint64_t>(f);
  out.header.resize(hlen);
  f.read(out.header.data(), static_cast<std::streamsize>(hlen));
  while (f.peek() != std::ifstream::traits_type::eof()) {
    SnapshotRecord r;
    r.t = get<double>(f);
    r.norm = get<double>(f);
    const auto n = get<std::uint64_t>(f);
    r.values.resize(5 * n);
    f.read(reinterpret_cast<char*>(r.values.data()),
           static_cast<std::streamsize>(r.values.size() * sizeof(double)));
    if (!f) throw std::runtime_error("truncated snapshot record in " + path.string());
    out.records.push_back(std::move(r));
  }
  return out;
}

std::string dump_snapshots(const SnapshotFile& f) {
  std::string out = f.header;
  for (const auto& r : f.records) {
    out += fmt::format("# t_fs: {}\n# norm: {}\n", num(units::to_fs(r.t)), num(r.norm));
    out += "z_um,re_up,im_up,re_down,im_down\n";
    for (std::size_t j = 0; j + 4 < r.values.size(); j += 5) {
      out += fmt::format("{},{},{},{},{}\n", num(r.values[j]), num(r.values[j + 1]),
                         num(r.values[j + 2]), num(r.values[j + 3]), num(r.values[j + 4]));
    }
  }
  return out;
}

}  // namespace spinsplit
