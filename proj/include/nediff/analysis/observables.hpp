#ifndef NEDIFF_ANALYSIS_OBSERVABLES_HPP
#define NEDIFF_ANALYSIS_OBSERVABLES_HPP

#include "nediff/core/wavepacket.hpp"

#include <vector>

namespace nediff {

/// |psi~(kx, ky)|^2 on the centered momentum grid; column i sits at
/// kx = k0 + grid.kx(i), row j at ky = grid.ky(j).
struct MomentumDensity {
  Grid2D grid;
  RealField values;
  double k0 = 0.0;
  double energy = 0.0;

  double kx(Index i) const { return k0 + grid.kx(i); }
  double ky(Index j) const { return grid.ky(j); }
  double total() const { return values.sum() * grid.dk_area(); }
};

MomentumDensity momentum_density(const Wavepacket &psi);

enum class CutAxis { Kx, Ky };

/// Density along one momentum axis at a fixed value of the other.
struct Crosscut {
  CutAxis axis = CutAxis::Kx;
  double fixed = 0.0;
  Eigen::ArrayXd coordinate;
  Eigen::ArrayXd density;
};

/// Kx: along kx at ky = value. Ky: along ky at kx = value (absolute kx,
/// carrier included). Linear interpolation between the two nearest lines;
/// DomainError outside the grid.
Crosscut crosscut(const MomentumDensity &density, CutAxis axis, double value);

/// Density integrated over the other axis (`fixed` is unused).
Crosscut marginal(const MomentumDensity &density, CutAxis axis);

struct SidebandTable {
  double delta_k = 0.0;
  std::vector<int> orders;
  std::vector<double> populations;
  std::vector<double> ky_spread;  // rms ky within the order's bin

  double population(int n) const;
  double total() const;
};

/// Integrates kx bins of width delta_k centred on k0 + n delta_k over all ky.
/// ConfigError if delta_k spans fewer than 6 grid cells.
SidebandTable sideband_populations(const MomentumDensity &density, double delta_k);

/// Local maxima above `threshold` times the global maximum, refined by
/// 3-point quadratic interpolation, in increasing coordinate order.
std::vector<double> find_peaks(const Crosscut &cut, double threshold = 0.01);

/// Median gap between adjacent peaks. DomainError with fewer than two peaks.
double peak_spacing(const Crosscut &cut, double threshold = 0.01);

struct EnergyAxis {
  Eigen::ArrayXd exact;        // hbar^2 (kx^2 - k0^2) / 2m
  Eigen::ArrayXd first_order;  // hbar v0 (kx - k0)
};

EnergyAxis energy_axis(const Eigen::ArrayXd &kx, double k0, double energy);

/// atan(ky / k0) in degrees.
double deflection_angle(double ky, double k0);

/// Density at (k0, 0) relative to the same point of `initial`.
double depletion(const MomentumDensity &final_density, const MomentumDensity &initial);

/// Largest deflection among peaks of the ky marginal above `threshold` of its maximum [deg].
double max_deflection(const MomentumDensity &density, double threshold = 0.01);

/// Deflection at the outermost ky where the ky marginal still reaches
/// `threshold` of its maximum [deg], interpolated between samples.
double deflection_extent(const MomentumDensity &density, double threshold = 0.1);

/// Longitudinal sideband spacing: peak spacing of the kx marginal.
double longitudinal_spacing(const MomentumDensity &density);

/// Transverse spacing: half the median fringe spacing of the ky cut through
/// the first sideband (kx = k0 + delta_k), whose peaks split by 2 delta_ky.
double transverse_spacing(const MomentumDensity &density, double delta_k);

/// FWHM of the kinetic-energy distribution [eV] and its rms spread.
struct EnergySpread {
  double fwhm;
  double rms;
};
EnergySpread energy_spread(const MomentumDensity &density);

double relative_l2_distance(const RealField &a, const RealField &b);

}  // namespace nediff

#endif  // NEDIFF_ANALYSIS_OBSERVABLES_HPP
