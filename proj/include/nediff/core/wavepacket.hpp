#ifndef NEDIFF_CORE_WAVEPACKET_HPP
#define NEDIFF_CORE_WAVEPACKET_HPP

#include "nediff/core/grid.hpp"

namespace nediff {

struct Kinematics {
  double k0;  // nm^-1
  double v0;  // nm/fs
};

/// Nonrelativistic carrier wavenumber and group velocity for kinetic energy E0 [eV].
Kinematics electron_kinematics(double energy);

/// Kinetic energy of a free electron with wavenumber k [eV].
double kinetic_energy(double k);

/// Electron state on a grid.
///
/// The sampled amplitudes are the envelope g in the frame co-moving with the
/// carrier: psi(x, y, t) = g(x - v0 t, y) exp(i k0 x - i E0 t / hbar). The carrier
/// itself is never sampled, so grids only need to resolve the envelope.
struct Wavepacket {
  Grid2D grid;
  ComplexField amplitudes;
  double t = 0.0;       // fs
  double k0 = 0.0;      // nm^-1
  double energy = 0.0;  // eV, consistent with k0

  Wavepacket(Grid2D grid, ComplexField amplitudes, double t, double energy);

  double velocity() const;
  double norm() const;
  Wavepacket with_amplitudes(ComplexField next, double next_t) const;
};

/// Normalized Gaussian envelope. FWHM values refer to the probability density.
Wavepacket gaussian_wavepacket(const Grid2D &grid, double energy, double fwhm_x,
                               double fwhm_y, double center_x = 0.0,
                               double center_y = 0.0);

/// Density FWHM / v0 [fs].
double temporal_spread(double fwhm_x, double energy);
double temporal_spread(const Wavepacket &psi);

/// Density FWHM of the x and y marginals measured on the grid (linear
/// interpolation of the half-maximum crossings).
struct MeasuredWidths {
  double fwhm_x;
  double fwhm_y;
};
MeasuredWidths measure_widths(const Wavepacket &psi);

/// Fraction of the norm inside the outer `band` fraction of the grid on any side.
double edge_weight(const Wavepacket &psi, double band = 0.1);

}  // namespace nediff

#endif  // NEDIFF_CORE_WAVEPACKET_HPP
