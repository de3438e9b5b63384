#include "nediff/io/config.hpp"

#include "nediff/core/errors.hpp"
#include "nediff/core/format.hpp"
#include "nediff/core/overloaded.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace nediff {

namespace {

const std::map<std::string, std::string> &presets() {
  static const std::map<std::string, std::string> table{
      {"fig1", R"(name: fig1
electron:
  energy_ev: 100
  fwhm_x_nm: 60
  fwhm_y_nm: 20
laser:
  wavelength_nm: 2000
  field_v_per_nm: 0.2
  phase_rad: 0
model:
  type: wire
  radius_nm: 10
  response: 0.5
grid:
  nx: 2048
  ny: 1024
  dx_nm: 0.5
  dy_nm: 0.5
engine: both
numeric:
  t_start_fs: -30
  t_end_fs: 30
outputs: [density, heatmap, crosscuts, sidebands, orders, coupling, trace]
)"},
      {"fig2", R"(name: fig2
electron:
  energy_ev: 100
  fwhm_x_nm: 500
  fwhm_y_nm: 20
laser:
  wavelength_nm: 2000
  field_v_per_nm: 0.5
  phase_rad: 0
model:
  type: wire
  radius_nm: 10
  response: 0.5
grid:
  nx: 4096
  ny: 512
  dx_nm: 1
  dy_nm: 0.5
engine: analytic
outputs: [density, heatmap, sidebands]
sweep:
  parameter: energy_ev
  values: {from: 50, to: 10000, count: 48, spacing: log}
)"},
      {"fig3", R"(name: fig3
electron:
  energy_ev: 100
  fwhm_x_nm: 60
  fwhm_y_per_radius: 2
laser:
  wavelength_nm: 2000
  field_v_per_nm: 0.2
  phase_rad: 0
model:
  type: wire
  radius_nm: 10
  response: 0.5
grid:
  nx: 1024
  ny: 1024
  dx_nm: 0.5
  dy_nm: 0.5
engine: analytic
outputs: [density, heatmap, sidebands]
sweep:
  parameter: radius_nm
  values: {from: 4, to: 40, count: 37, spacing: linear}
)"},
      {"fig4-limited", R"(name: fig4-limited
electron:
  energy_ev: 100
  duration_fs: 20
  fwhm_y_nm: 5
laser:
  wavelength_nm: 2000
  field_v_per_nm: 0.2
  phase_rad: 0
model:
  type: gap
  separation_nm: 23
  smoothing_fwhm_nm: 13
  peak_field_v_per_nm: 0.5
grid:
  nx: 2048
  ny: 512
  dx_nm: 0.5
  dy_nm: 0.25
engine: analytic
outputs: [density, heatmap, crosscuts, sidebands]
)"},
      {"fig4-chirped", R"(name: fig4-chirped
electron:
  energy_ev: 100
  bandwidth_ev: 2
  chirp_duration_fs: 20
  fwhm_y_nm: 5
laser:
  wavelength_nm: 2000
  field_v_per_nm: 0.2
  phase_rad: 0
model:
  type: gap
  separation_nm: 23
  smoothing_fwhm_nm: 13
  peak_field_v_per_nm: 0.5
grid:
  nx: 4096
  ny: 512
  dx_nm: 0.25
  dy_nm: 0.25
engine: analytic
outputs: [density, heatmap, crosscuts, sidebands]
)"},
  };
  return table;
}

std::string where(const YAML::Node &node) {
  const YAML::Mark m = node.Mark();
  if (m.is_null()) return "";
  return " (line " + std::to_string(m.line + 1) + ")";
}

[[noreturn]] void fail(const std::string &key, const YAML::Node &node, const std::string &what) {
  throw ConfigError("config key '" + key + "'" + where(node) + ": " + what);
}

void check_keys(const YAML::Node &map, const std::string &section,
                const std::set<std::string> &allowed) {
  if (!map.IsMap()) fail(section, map, "expected a mapping");
  for (const auto &kv : map) {
    const std::string key = kv.first.as<std::string>();
    if (allowed.count(key) == 0) fail(section + "." + key, kv.first, "unknown key");
  }
}

template <typename T>
T scalar(const YAML::Node &node, const std::string &key) {
  if (!node.IsScalar()) fail(key, node, "expected a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception &) {
    fail(key, node, "cannot convert '" + node.Scalar() + "'");
  }
}

double number(const YAML::Node &map, const std::string &section, const std::string &key) {
  const YAML::Node n = map[key];
  if (!n) fail(section + "." + key, map, "missing");
  const double v = scalar<double>(n, section + "." + key);
  if (!std::isfinite(v)) fail(section + "." + key, n, "must be finite");
  return v;
}

std::optional<double> optional_number(const YAML::Node &map, const std::string &section,
                                      const std::string &key) {
  if (!map[key]) return std::nullopt;
  return number(map, section, key);
}

double number_or(const YAML::Node &map, const std::string &section, const std::string &key,
                 double fallback) {
  return optional_number(map, section, key).value_or(fallback);
}

YAML::Node section(const YAML::Node &root, const std::string &name) {
  const YAML::Node n = root[name];
  if (!n) throw ConfigError("config is missing the '" + name + "' section");
  return n;
}

// Overlay `user` onto `base`. Keys that select a variant replace the whole group.
YAML::Node merge(const YAML::Node &base, const YAML::Node &user, const std::string &path) {
  if (!base || !base.IsMap() || !user.IsMap()) return YAML::Clone(user);
  YAML::Node out = YAML::Clone(base);
  if (path == "model" && user["type"] && user["type"].Scalar() != base["type"].Scalar()) {
    return YAML::Clone(user);
  }
  if (path == "electron") {
    const std::vector<std::string> longitudinal{"fwhm_x_nm", "duration_fs", "bandwidth_ev",
                                                "chirp_duration_fs"};
    const std::vector<std::string> transverse{"fwhm_y_nm", "fwhm_y_per_radius"};
    for (const auto *group : {&longitudinal, &transverse}) {
      const bool given = std::any_of(group->begin(), group->end(),
                                     [&](const std::string &k) { return bool(user[k]); });
      if (given) {
        for (const std::string &k : *group) out.remove(k);
      }
    }
  }
  for (const auto &kv : user) {
    const std::string key = kv.first.as<std::string>();
    out[key] = merge(out[key], kv.second, path.empty() ? key : path + "." + key);
  }
  return out;
}

std::vector<double> parse_values(const YAML::Node &node) {
  std::vector<double> values;
  if (node.IsSequence()) {
    for (const auto &v : node) values.push_back(scalar<double>(v, "sweep.values"));
    return values;
  }
  check_keys(node, "sweep.values", {"from", "to", "count", "spacing"});
  const double from = number(node, "sweep.values", "from");
  const double to = number(node, "sweep.values", "to");
  if (!node["count"]) fail("sweep.values.count", node, "missing");
  const long count = scalar<long>(node["count"], "sweep.values.count");
  const std::string spacing =
      node["spacing"] ? scalar<std::string>(node["spacing"], "sweep.values.spacing") : "linear";
  if (count < 2) fail("sweep.values.count", node["count"], "needs at least 2 values");
  if (spacing != "linear" && spacing != "log") {
    fail("sweep.values.spacing", node["spacing"], "expected linear or log");
  }
  if (spacing == "log" && !(from > 0.0 && to > 0.0)) {
    fail("sweep.values", node, "log spacing needs positive bounds");
  }
  for (long k = 0; k < count; ++k) {
    const double f = static_cast<double>(k) / static_cast<double>(count - 1);
    values.push_back(spacing == "log" ? from * std::pow(to / from, f) : from + f * (to - from));
  }
  values.front() = from;
  values.back() = to;
  return values;
}

Point2 center(const YAML::Node &map, const std::string &section) {
  return {number_or(map, section, "center_x_nm", 0.0), number_or(map, section, "center_y_nm", 0.0)};
}

ScenarioConfig from_node(const YAML::Node &root) {
  check_keys(root, "config",
             {"name", "electron", "laser", "model", "grid", "engine", "numeric", "outputs",
              "sweep"});
  ScenarioConfig c;
  if (root["name"]) c.name = scalar<std::string>(root["name"], "name");

  const YAML::Node e = section(root, "electron");
  check_keys(e, "electron",
             {"energy_ev", "fwhm_x_nm", "duration_fs", "bandwidth_ev", "chirp_duration_fs",
              "fwhm_y_nm", "fwhm_y_per_radius", "center_x_nm", "center_y_nm",
              "pre_propagation_fs"});
  c.electron.energy = number(e, "electron", "energy_ev");
  c.electron.fwhm_x = optional_number(e, "electron", "fwhm_x_nm");
  c.electron.duration = optional_number(e, "electron", "duration_fs");
  c.electron.bandwidth = optional_number(e, "electron", "bandwidth_ev");
  c.electron.chirp_duration = optional_number(e, "electron", "chirp_duration_fs");
  c.electron.fwhm_y = optional_number(e, "electron", "fwhm_y_nm");
  c.electron.fwhm_y_per_radius = optional_number(e, "electron", "fwhm_y_per_radius");
  c.electron.center = center(e, "electron");
  c.electron.pre_propagation = number_or(e, "electron", "pre_propagation_fs", 0.0);

  const YAML::Node l = section(root, "laser");
  check_keys(l, "laser", {"wavelength_nm", "field_v_per_nm", "phase_rad"});
  c.laser.wavelength = number(l, "laser", "wavelength_nm");
  c.laser.field_amplitude = number(l, "laser", "field_v_per_nm");
  c.laser.phase = number_or(l, "laser", "phase_rad", 0.0);

  const YAML::Node m = section(root, "model");
  if (!m.IsMap() || !m["type"]) fail("model.type", m, "missing");
  const std::string type = scalar<std::string>(m["type"], "model.type");
  if (type == "wire") {
    check_keys(m, "model", {"type", "radius_nm", "response", "center_x_nm", "center_y_nm"});
    c.model = Wire{number(m, "model", "radius_nm"), number_or(m, "model", "response", 0.5),
                   center(m, "model")};
  } else if (type == "gap") {
    check_keys(m, "model",
               {"type", "separation_nm", "smoothing_fwhm_nm", "peak_field_v_per_nm",
                "center_x_nm", "center_y_nm"});
    c.model = GapResonator{number(m, "model", "separation_nm"),
                           number(m, "model", "smoothing_fwhm_nm"),
                           number(m, "model", "peak_field_v_per_nm"), center(m, "model"),
                           std::nullopt};
  } else if (type == "stripe") {
    check_keys(m, "model", {"type", "coupling_rad", "y_min_nm", "y_max_nm"});
    const UniformStripe unbounded;
    c.model = UniformStripe{number(m, "model", "coupling_rad"),
                            number_or(m, "model", "y_min_nm", unbounded.y_min),
                            number_or(m, "model", "y_max_nm", unbounded.y_max)};
  } else {
    fail("model.type", m["type"], "expected wire, gap or stripe");
  }

  const YAML::Node g = section(root, "grid");
  check_keys(g, "grid", {"nx", "ny", "dx_nm", "dy_nm"});
  for (const char *k : {"nx", "ny"}) {
    if (!g[k]) fail(std::string("grid.") + k, g, "missing");
  }
  c.grid.nx = scalar<long>(g["nx"], "grid.nx");
  c.grid.ny = scalar<long>(g["ny"], "grid.ny");
  c.grid.dx = number(g, "grid", "dx_nm");
  c.grid.dy = number(g, "grid", "dy_nm");

  if (root["engine"]) {
    const std::string name = scalar<std::string>(root["engine"], "engine");
    if (name == "analytic") {
      c.engine = Engine::Analytic;
    } else if (name == "numeric") {
      c.engine = Engine::Numeric;
    } else if (name == "both") {
      c.engine = Engine::Both;
    } else {
      fail("engine", root["engine"], "expected analytic, numeric or both");
    }
  }

  if (const YAML::Node n = root["numeric"]) {
    check_keys(n, "numeric",
               {"t_start_fs", "t_end_fs", "dt_fs", "vector_potential", "snapshot_stride"});
    c.numeric.t_start = number_or(n, "numeric", "t_start_fs", c.numeric.t_start);
    c.numeric.t_end = number_or(n, "numeric", "t_end_fs", c.numeric.t_end);
    c.numeric.dt = number_or(n, "numeric", "dt_fs", 0.0);
    if (n["vector_potential"]) {
      c.numeric.vector_potential = scalar<bool>(n["vector_potential"], "numeric.vector_potential");
    }
    if (n["snapshot_stride"]) {
      c.numeric.snapshot_stride = scalar<long>(n["snapshot_stride"], "numeric.snapshot_stride");
    }
  }

  if (const YAML::Node o = root["outputs"]) {
    if (!o.IsSequence()) fail("outputs", o, "expected a list");
    for (const auto &item : o) {
      const std::string name = scalar<std::string>(item, "outputs");
      const auto &known = known_outputs();
      if (std::find(known.begin(), known.end(), name) == known.end()) {
        fail("outputs", item, "unknown output '" + name + "'");
      }
      c.outputs.push_back(name);
    }
  } else {
    c.outputs = {"density", "sidebands"};
  }

  if (const YAML::Node s = root["sweep"]) {
    check_keys(s, "sweep", {"parameter", "values", "max_order", "dump_densities"});
    SweepConfig sweep;
    if (!s["parameter"]) fail("sweep.parameter", s, "missing");
    const std::string p = scalar<std::string>(s["parameter"], "sweep.parameter");
    if (p == "energy_ev") {
      sweep.parameter = SweepParameter::Energy;
    } else if (p == "radius_nm") {
      sweep.parameter = SweepParameter::Radius;
    } else if (p == "field_v_per_nm") {
      sweep.parameter = SweepParameter::Field;
    } else {
      fail("sweep.parameter", s["parameter"], "expected energy_ev, radius_nm or field_v_per_nm");
    }
    if (!s["values"]) fail("sweep.values", s, "missing");
    sweep.values = parse_values(s["values"]);
    if (s["max_order"]) sweep.max_order = scalar<int>(s["max_order"], "sweep.max_order");
    if (s["dump_densities"]) {
      sweep.dump_densities = scalar<bool>(s["dump_densities"], "sweep.dump_densities");
    }
    c.sweep = sweep;
  }
  validate(c);
  return c;
}

YAML::Node load_text(const std::string &text) {
  try {
    return YAML::Load(text);
  } catch (const YAML::ParserException &e) {
    throw ConfigError(std::string("config is not valid YAML: ") + e.what());
  }
}

void positive(double v, const std::string &key) {
  if (!(v > 0.0)) throw ConfigError("config key '" + key + "' must be positive");
}

std::string num(double v) { return format_double(v); }

}  // namespace

const std::vector<std::string> &preset_names() {
  static const std::vector<std::string> names{"fig1", "fig2", "fig3", "fig4-limited",
                                              "fig4-chirped"};
  return names;
}

std::string preset_text(const std::string &name) {
  const auto it = presets().find(name);
  if (it == presets().end()) throw ConfigError("unknown preset '" + name + "'");
  return it->second;
}

ScenarioConfig preset_config(const std::string &name) { return parse_config(preset_text(name)); }

ScenarioConfig parse_config(const std::string &text) {
  YAML::Node root = load_text(text);
  if (!root.IsMap()) throw ConfigError("config must be a mapping of sections");
  if (const YAML::Node p = root["preset"]) {
    const std::string name = scalar<std::string>(p, "preset");
    YAML::Node user = YAML::Clone(root);
    user.remove("preset");
    YAML::Node base = load_text(preset_text(name));
    root = merge(base, user, "");
  }
  return from_node(root);
}

ScenarioConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

void validate(const ScenarioConfig &c) {
  const ElectronConfig &e = c.electron;
  positive(e.energy, "electron.energy_ev");
  const int longitudinal = int(e.fwhm_x.has_value()) + int(e.duration.has_value()) +
                           int(e.bandwidth.has_value());
  if (longitudinal != 1) {
    throw ConfigError(
        "electron needs exactly one of fwhm_x_nm, duration_fs or bandwidth_ev, got " +
        std::to_string(longitudinal));
  }
  if (e.chirp_duration && !e.bandwidth) {
    throw ConfigError("electron.chirp_duration_fs requires electron.bandwidth_ev");
  }
  if (e.chirp_duration && e.pre_propagation != 0.0) {
    throw ConfigError("electron.chirp_duration_fs and electron.pre_propagation_fs are exclusive");
  }
  if (e.fwhm_y.has_value() == e.fwhm_y_per_radius.has_value()) {
    throw ConfigError("electron needs exactly one of fwhm_y_nm or fwhm_y_per_radius");
  }
  if (e.fwhm_y_per_radius && !std::holds_alternative<Wire>(c.model)) {
    throw ConfigError("electron.fwhm_y_per_radius needs a wire model");
  }
  for (const auto &[v, key] : {std::pair{e.fwhm_x, "electron.fwhm_x_nm"},
                               std::pair{e.duration, "electron.duration_fs"},
                               std::pair{e.bandwidth, "electron.bandwidth_ev"},
                               std::pair{e.chirp_duration, "electron.chirp_duration_fs"},
                               std::pair{e.fwhm_y, "electron.fwhm_y_nm"},
                               std::pair{e.fwhm_y_per_radius, "electron.fwhm_y_per_radius"}}) {
    if (v) positive(*v, key);
  }
  positive(c.laser.wavelength, "laser.wavelength_nm");
  if (!(c.laser.field_amplitude >= 0.0)) {
    throw ConfigError("config key 'laser.field_v_per_nm' must be >= 0");
  }
  validate(c.model);
  if (c.grid.nx < 2 || c.grid.ny < 2) throw ConfigError("grid needs at least 2 points per axis");
  positive(c.grid.dx, "grid.dx_nm");
  positive(c.grid.dy, "grid.dy_nm");
  if (c.numeric.t_end == c.numeric.t_start) {
    throw ConfigError("numeric window t_start_fs .. t_end_fs is empty");
  }
  if (c.numeric.snapshot_stride < 0) throw ConfigError("numeric.snapshot_stride must be >= 0");
  if (c.sweep) {
    if (c.sweep->values.empty()) throw ConfigError("sweep.values is empty");
    for (size_t k = 1; k < c.sweep->values.size(); ++k) {
      if (!(c.sweep->values[k] > c.sweep->values[k - 1])) {
        throw ConfigError("sweep.values must be strictly increasing");
      }
    }
    if (c.sweep->max_order < 0) throw ConfigError("sweep.max_order must be >= 0");
    if (c.sweep->parameter == SweepParameter::Radius && !std::holds_alternative<Wire>(c.model)) {
      throw ConfigError("a radius sweep needs a wire model");
    }
  }
}

std::string serialize_config(const ScenarioConfig &c) {
  std::ostringstream out;
  out << "name: " << YAML::Dump(YAML::Node(c.name)) << "\n";
  const ElectronConfig &e = c.electron;
  out << "electron:\n  energy_ev: " << num(e.energy) << "\n";
  if (e.fwhm_x) out << "  fwhm_x_nm: " << num(*e.fwhm_x) << "\n";
  if (e.duration) out << "  duration_fs: " << num(*e.duration) << "\n";
  if (e.bandwidth) out << "  bandwidth_ev: " << num(*e.bandwidth) << "\n";
  if (e.chirp_duration) out << "  chirp_duration_fs: " << num(*e.chirp_duration) << "\n";
  if (e.fwhm_y) out << "  fwhm_y_nm: " << num(*e.fwhm_y) << "\n";
  if (e.fwhm_y_per_radius) out << "  fwhm_y_per_radius: " << num(*e.fwhm_y_per_radius) << "\n";
  out << "  center_x_nm: " << num(e.center.x) << "\n  center_y_nm: " << num(e.center.y)
      << "\n  pre_propagation_fs: " << num(e.pre_propagation) << "\n";
  out << "laser:\n  wavelength_nm: " << num(c.laser.wavelength)
      << "\n  field_v_per_nm: " << num(c.laser.field_amplitude)
      << "\n  phase_rad: " << num(c.laser.phase) << "\n";
  out << "model:\n";
  std::visit(overloaded{
                 [&](const Wire &w) {
                   out << "  type: wire\n  radius_nm: " << num(w.radius)
                       << "\n  response: " << num(w.response) << "\n  center_x_nm: "
                       << num(w.center.x) << "\n  center_y_nm: " << num(w.center.y) << "\n";
                 },
                 [&](const GapResonator &g) {
                   out << "  type: gap\n  separation_nm: " << num(g.separation)
                       << "\n  smoothing_fwhm_nm: " << num(g.smoothing_fwhm)
                       << "\n  peak_field_v_per_nm: " << num(g.peak_field)
                       << "\n  center_x_nm: " << num(g.center.x)
                       << "\n  center_y_nm: " << num(g.center.y) << "\n";
                 },
                 [&](const UniformStripe &s) {
                   out << "  type: stripe\n  coupling_rad: " << num(s.coupling)
                       << "\n  y_min_nm: " << num(s.y_min) << "\n  y_max_nm: " << num(s.y_max)
                       << "\n";
                 },
             },
             c.model);
  out << "grid:\n  nx: " << c.grid.nx << "\n  ny: " << c.grid.ny << "\n  dx_nm: " << num(c.grid.dx)
      << "\n  dy_nm: " << num(c.grid.dy) << "\n";
  out << "engine: " << engine_name(c.engine) << "\n";
  out << "numeric:\n  t_start_fs: " << num(c.numeric.t_start)
      << "\n  t_end_fs: " << num(c.numeric.t_end) << "\n  dt_fs: " << num(c.numeric.dt)
      << "\n  vector_potential: " << (c.numeric.vector_potential ? "true" : "false")
      << "\n  snapshot_stride: " << c.numeric.snapshot_stride << "\n";
  out << "outputs: [";
  for (size_t k = 0; k < c.outputs.size(); ++k) out << (k ? ", " : "") << c.outputs[k];
  out << "]\n";
  if (c.sweep) {
    out << "sweep:\n  parameter: " << parameter_name(c.sweep->parameter) << "\n  values: [";
    for (size_t k = 0; k < c.sweep->values.size(); ++k) {
      out << (k ? ", " : "") << num(c.sweep->values[k]);
    }
    out << "]\n  max_order: " << c.sweep->max_order
        << "\n  dump_densities: " << (c.sweep->dump_densities ? "true" : "false") << "\n";
  }
  return out.str();
}

double transverse_fwhm(const ScenarioConfig &config) {
  if (config.electron.fwhm_y) return *config.electron.fwhm_y;
  const auto *wire = std::get_if<Wire>(&config.model);
  if (wire == nullptr || !config.electron.fwhm_y_per_radius) {
    throw ConfigError("transverse width needs fwhm_y_nm or a wire with fwhm_y_per_radius");
  }
  return *config.electron.fwhm_y_per_radius * wire->radius;
}

std::string engine_name(Engine engine) {
  switch (engine) {
    case Engine::Analytic:
      return "analytic";
    case Engine::Numeric:
      return "numeric";
    case Engine::Both:
      return "both";
  }
  return "analytic";
}

std::string parameter_name(SweepParameter parameter) {
  switch (parameter) {
    case SweepParameter::Energy:
      return "energy_ev";
    case SweepParameter::Radius:
      return "radius_nm";
    case SweepParameter::Field:
      return "field_v_per_nm";
  }
  return "energy_ev";
}

ScenarioConfig with_parameter(const ScenarioConfig &config, SweepParameter parameter,
                              double value) {
  ScenarioConfig c = config;
  switch (parameter) {
    case SweepParameter::Energy:
      c.electron.energy = value;
      break;
    case SweepParameter::Radius: {
      auto *wire = std::get_if<Wire>(&c.model);
      if (wire == nullptr) throw ConfigError("a radius sweep needs a wire model");
      wire->radius = value;
      break;
    }
    case SweepParameter::Field:
      c.laser.field_amplitude = value;
      break;
  }
  return c;
}

}  // namespace nediff
