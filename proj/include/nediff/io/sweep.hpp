#ifndef NEDIFF_IO_SWEEP_HPP
#define NEDIFF_IO_SWEEP_HPP

#include "nediff/io/scenario.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace nediff {

struct SweepPoint {
  double value = 0.0;
  std::optional<SidebandTable> sidebands;
  double depletion = 0.0;
  double max_deflection = 0.0;  // degrees
  double delta_kx = 0.0;        // measured, nm^-1 (NaN when not measurable)
  double delta_ky = 0.0;
  std::string error;  // empty on success

  bool ok() const { return error.empty(); }
};

struct SweepResult {
  SweepParameter parameter = SweepParameter::Energy;
  int max_order = 6;
  std::string config_hash;  // CRC-32 of the canonical template text
  std::vector<SweepPoint> points;

  /// Index of the successful point with the lowest depletion.
  std::optional<std::size_t> depletion_minimum() const;
  /// Interior local minima of the depletion over successful points.
  std::vector<std::size_t> depletion_local_minima() const;
};

struct SweepOptions {
  unsigned threads = 0;  // 0 = hardware concurrency
  std::optional<Engine> engine;
  std::filesystem::path dump_dir;  // per-point densities when set
};

/// Runs the template once per value of its sweep section. Points run
/// concurrently; the result keeps the order of the values. A failing point
/// is recorded and the sweep continues.
SweepResult run_sweep(const ScenarioConfig &config, const SweepOptions &options = {});

/// Metrics for one finished scenario.
SweepPoint sweep_point(double value, const ScenarioResult &result);

std::string config_hash(const ScenarioConfig &config);

void write_sweep_csv(std::ostream &out, const SweepResult &result);
void write_sweep_csv(const std::filesystem::path &path, const SweepResult &result);

}  // namespace nediff

#endif  // NEDIFF_IO_SWEEP_HPP
