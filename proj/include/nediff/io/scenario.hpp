#ifndef NEDIFF_IO_SCENARIO_HPP
#define NEDIFF_IO_SCENARIO_HPP

#include "nediff/analysis/observables.hpp"
#include "nediff/io/config.hpp"
#include "nediff/nearfield/coupling.hpp"
#include "nediff/numeric/split_step.hpp"

#include <filesystem>
#include <optional>

namespace nediff {

Grid2D make_grid(const GridConfig &grid);

/// Model ready for evaluation (gap resonators calibrated).
NearFieldModel resolved_model(const ScenarioConfig &config);

/// Longitudinal density FWHM of the packet before any chirp, from whichever
/// of fwhm_x, duration or bandwidth the config gives.
double initial_fwhm_x(const ScenarioConfig &config);

/// Free longitudinal flight applied to reach `chirp_duration` (0 without chirp).
double chirp_time(const ScenarioConfig &config);

/// Electron state at the interaction time t = 0, after any chirp or
/// pre-propagation.
Wavepacket initial_state(const ScenarioConfig &config);

struct RunOptions {
  std::optional<Engine> engine;          // overrides config.engine
  std::filesystem::path snapshot_dir;    // numeric snapshots when set
  std::optional<long> snapshot_stride;   // overrides config.numeric.snapshot_stride
};

struct ScenarioResult {
  ScenarioConfig config;
  NearFieldModel model;
  double delta_k = 0.0;
  Wavepacket initial;
  MomentumDensity initial_density;
  std::optional<CouplingProfile> profile;
  std::optional<Wavepacket> analytic;
  std::optional<MomentumDensity> analytic_density;
  std::optional<Wavepacket> numeric;
  std::optional<MomentumDensity> numeric_density;
  std::optional<EvolutionTrace> trace;
  std::optional<double> engine_distance;  // relative L2, numeric vs analytic density

  /// Analytic density when available, numeric otherwise.
  const MomentumDensity &density() const;
};

ScenarioResult run_scenario(const ScenarioConfig &config, const RunOptions &options = {});

/// Writes the outputs listed in the config plus config.resolved.yaml and
/// summary.txt. Returns the files written, relative to `directory`.
std::vector<std::string> write_outputs(const ScenarioResult &result,
                                       const std::filesystem::path &directory);

}  // namespace nediff

#endif  // NEDIFF_IO_SCENARIO_HPP
