#include "nediff/core/wavepacket.hpp"

#include "nediff/core/errors.hpp"
#include "nediff/core/units.hpp"

#include <cmath>
#include <string>

namespace nediff {

Kinematics electron_kinematics(double energy) {
  if (!(energy > 0.0)) {
    throw DomainError("electron energy must be positive, got " + std::to_string(energy));
  }
  const double k0 = std::sqrt(2.0 * units::electron_mass * energy) / units::hbar;
  return {k0, units::hbar * k0 / units::electron_mass};
}

double kinetic_energy(double k) {
  return units::hbar * units::hbar * k * k / (2.0 * units::electron_mass);
}

Wavepacket::Wavepacket(Grid2D grid_, ComplexField amplitudes_, double t_, double energy_)
    : grid(std::move(grid_)), amplitudes(std::move(amplitudes_)), t(t_), energy(energy_) {
  if (amplitudes.rows() != grid.ny() || amplitudes.cols() != grid.nx()) {
    throw ConfigError("amplitude array shape does not match grid");
  }
  if (energy < 0.0) throw DomainError("negative carrier energy");
  k0 = energy > 0.0 ? electron_kinematics(energy).k0 : 0.0;
}

double Wavepacket::velocity() const { return units::hbar * k0 / units::electron_mass; }

double Wavepacket::norm() const {
  return std::sqrt(amplitudes.abs2().sum() * grid.cell_area());
}

Wavepacket Wavepacket::with_amplitudes(ComplexField next, double next_t) const {
  return Wavepacket(grid, std::move(next), next_t, energy);
}

Wavepacket gaussian_wavepacket(const Grid2D &grid, double energy, double fwhm_x,
                               double fwhm_y, double center_x, double center_y) {
  if (!(fwhm_x > 0.0) || !(fwhm_y > 0.0)) {
    throw ConfigError("wavepacket widths must be positive");
  }
  if (grid.extent_x() < 4.0 * fwhm_x || grid.extent_y() < 4.0 * fwhm_y) {
    throw ConfigError("grid extent " + std::to_string(grid.extent_x()) + " x " +
                      std::to_string(grid.extent_y()) +
                      " nm is smaller than 4x the wavepacket FWHM");
  }
  electron_kinematics(energy);

  // Density sigma; the amplitude decays with twice the variance.
  const double sx = fwhm_x / units::fwhm_per_sigma;
  const double sy = fwhm_y / units::fwhm_per_sigma;
  Eigen::ArrayXd gx(grid.nx());
  Eigen::ArrayXd gy(grid.ny());
  for (Index i = 0; i < grid.nx(); ++i) {
    const double u = grid.x(i) - center_x;
    gx(i) = std::exp(-u * u / (4.0 * sx * sx));
  }
  for (Index j = 0; j < grid.ny(); ++j) {
    const double u = grid.y(j) - center_y;
    gy(j) = std::exp(-u * u / (4.0 * sy * sy));
  }
  gx /= std::sqrt(gx.square().sum() * grid.dx());
  gy /= std::sqrt(gy.square().sum() * grid.dy());

  ComplexField amp(grid.ny(), grid.nx());
  amp.real() = (gy.matrix() * gx.matrix().transpose()).array();
  amp.imag().setZero();
  return Wavepacket(grid, std::move(amp), 0.0, energy);
}

double temporal_spread(double fwhm_x, double energy) {
  return fwhm_x / electron_kinematics(energy).v0;
}

double temporal_spread(const Wavepacket &psi) {
  return measure_widths(psi).fwhm_x / psi.velocity();
}

namespace {

double fwhm_of(const Eigen::ArrayXd &profile, double spacing) {
  Index peak = 0;
  const double top = profile.maxCoeff(&peak);
  if (!(top > 0.0)) return 0.0;
  const double half = 0.5 * top;
  Index lo = peak;
  while (lo > 0 && profile(lo - 1) >= half) --lo;
  Index hi = peak;
  while (hi + 1 < profile.size() && profile(hi + 1) >= half) ++hi;
  double left = static_cast<double>(lo);
  if (lo > 0) {
    left -= (profile(lo) - half) / (profile(lo) - profile(lo - 1));
  }
  double right = static_cast<double>(hi);
  if (hi + 1 < profile.size()) {
    right += (profile(hi) - half) / (profile(hi) - profile(hi + 1));
  }
  return (right - left) * spacing;
}

}  // namespace

MeasuredWidths measure_widths(const Wavepacket &psi) {
  const RealField density = psi.amplitudes.abs2();
  const Eigen::ArrayXd mx = density.colwise().sum().transpose();
  const Eigen::ArrayXd my = density.rowwise().sum();
  return {fwhm_of(mx, psi.grid.dx()), fwhm_of(my, psi.grid.dy())};
}

double edge_weight(const Wavepacket &psi, double band) {
  const Index bx = static_cast<Index>(std::ceil(band * static_cast<double>(psi.grid.nx())));
  const Index by = static_cast<Index>(std::ceil(band * static_cast<double>(psi.grid.ny())));
  const RealField density = psi.amplitudes.abs2();
  const double total = density.sum();
  if (!(total > 0.0)) return 0.0;
  const Index nx = psi.grid.nx();
  const Index ny = psi.grid.ny();
  const double inner =
      density.block(by, bx, ny - 2 * by, nx - 2 * bx).sum();
  return (total - inner) / total;
}

}  // namespace nediff
