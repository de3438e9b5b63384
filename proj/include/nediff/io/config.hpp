#ifndef NEDIFF_IO_CONFIG_HPP
#define NEDIFF_IO_CONFIG_HPP

#include "nediff/nearfield/models.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace nediff {

/// Longitudinal state: exactly one of fwhm_x, duration (bandwidth-limited
/// temporal spread) or bandwidth. With a bandwidth, `chirp_duration` asks for
/// free longitudinal propagation until the temporal spread reaches that value.
struct ElectronConfig {
  double energy = 100.0;  // eV
  std::optional<double> fwhm_x;          // nm
  std::optional<double> duration;        // fs
  std::optional<double> bandwidth;       // eV, FWHM
  std::optional<double> chirp_duration;  // fs
  std::optional<double> fwhm_y;          // nm
  std::optional<double> fwhm_y_per_radius;  // transverse FWHM as a multiple of the wire radius
  Point2 center{};
  double pre_propagation = 0.0;  // fs, free propagation before the interaction

  bool operator==(const ElectronConfig &) const = default;
};

struct GridConfig {
  long nx = 2048;
  long ny = 1024;
  double dx = 0.5;  // nm
  double dy = 0.5;

  bool operator==(const GridConfig &) const = default;
};

enum class Engine { Analytic, Numeric, Both };

struct NumericConfig {
  double t_start = -30.0;  // fs
  double t_end = 30.0;
  double dt = 0.0;  // 0 = automatic
  bool vector_potential = true;
  long snapshot_stride = 0;

  bool operator==(const NumericConfig &) const = default;
};

enum class SweepParameter { Energy, Radius, Field };

struct SweepConfig {
  SweepParameter parameter = SweepParameter::Energy;
  std::vector<double> values;
  int max_order = 6;  // P_n columns reported for |n| <= max_order
  bool dump_densities = false;

  bool operator==(const SweepConfig &) const = default;
};

struct ScenarioConfig {
  std::string name = "custom";
  ElectronConfig electron{};
  LaserParams laser{};
  NearFieldModel model = Wire{};
  GridConfig grid{};
  Engine engine = Engine::Analytic;
  NumericConfig numeric{};
  std::vector<std::string> outputs;
  std::optional<SweepConfig> sweep;

  bool operator==(const ScenarioConfig &) const = default;
};

inline const std::vector<std::string> &known_outputs() {
  static const std::vector<std::string> names{
      "density", "heatmap", "crosscuts", "sidebands", "orders", "coupling", "trace", "wavepacket"};
  return names;
}

/// Parses the YAML scenario schema (see README). A top-level `preset` key
/// starts from that preset and the remaining keys override it field by field.
/// Unknown keys and violated invariants raise ConfigError naming key and line.
ScenarioConfig parse_config(const std::string &text);
ScenarioConfig load_config(const std::filesystem::path &path);

/// Canonical YAML text; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ScenarioConfig &config);

void validate(const ScenarioConfig &config);

const std::vector<std::string> &preset_names();
/// Throws ConfigError for an unknown name.
ScenarioConfig preset_config(const std::string &name);
std::string preset_text(const std::string &name);

/// Transverse FWHM after resolving `fwhm_y_per_radius` against the model.
double transverse_fwhm(const ScenarioConfig &config);

std::string engine_name(Engine engine);
std::string parameter_name(SweepParameter parameter);

/// Copy of `config` with the swept parameter set to `value`.
ScenarioConfig with_parameter(const ScenarioConfig &config, SweepParameter parameter, double value);

}  // namespace nediff

#endif  // NEDIFF_IO_CONFIG_HPP
