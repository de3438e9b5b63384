#ifndef NEDIFF_NUMERIC_SPLIT_STEP_HPP
#define NEDIFF_NUMERIC_SPLIT_STEP_HPP

#include "nediff/core/wavepacket.hpp"
#include "nediff/nearfield/models.hpp"

#include <filesystem>
#include <iosfwd>
#include <vector>

namespace nediff {

struct EvolutionParams {
  double t_start = -30.0;  // fs
  double t_end = 30.0;     // fs
  double dt = 0.0;         // fs; 0 lets choose_steps pick it
  long steps = 0;
  LaserParams laser{};
  NearFieldModel model = Wire{};
  bool vector_potential = true;  // dipole-approximation A_L(t) along y
  long snapshot_stride = 0;      // trace (and snapshot) every n steps; 0 = ends only
  std::filesystem::path snapshot_dir;  // raw-grid dumps at the stride when set
  double edge_tolerance = 1e-6;
};

/// Largest stable dt for the bounds
///   dt max|q Phi0| / hbar <= 0.1 and dt hbar kmax^2 / 2m <= 0.5
/// (kmax = pi / d per axis), times the safety factor 0.5, then shrunk so an
/// integer number of steps spans [t_start, t_end]. An explicit dt is checked
/// against the same bounds. ConfigError if the window is shorter than dt or a
/// bound is violated.
EvolutionParams choose_steps(const EvolutionParams &params, const Grid2D &grid);

struct TraceSample {
  long step;
  double t;
  double norm;
  double mean_x;   // lab frame, nm
  double mean_kx;  // nm^-1, carrier included
  double mean_ky;
  double energy;   // kinetic energy expectation, eV
};

struct EvolutionTrace {
  long stride = 0;
  std::vector<TraceSample> samples;
};

struct EvolutionResult {
  Wavepacket final_state;
  EvolutionTrace trace;
};

/// Strang-split integration of i hbar dg/dt = [(p - qA)^2 / 2m + q Phi0 cos(wt + phi)] g
/// in the frame co-moving with the carrier. `psi0` must sit at params.t_start.
EvolutionResult split_step_evolve(const Wavepacket &psi0, const EvolutionParams &params);

TraceSample measure_state(const Wavepacket &psi, long step);

void write_trace_csv(std::ostream &out, const EvolutionTrace &trace);
void write_trace_csv(const std::filesystem::path &path, const EvolutionTrace &trace);

}  // namespace nediff

#endif  // NEDIFF_NUMERIC_SPLIT_STEP_HPP
