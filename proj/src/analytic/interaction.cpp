#include "nediff/analytic/interaction.hpp"

#include "nediff/core/errors.hpp"
#include "nediff/core/fourier.hpp"
#include "nediff/core/format.hpp"
#include "nediff/core/units.hpp"

#include <cmath>

namespace nediff {

void require_matching_axis(const CouplingProfile &profile, const Grid2D &grid) {
  if (profile.y.size() != grid.ny() || profile.i1.size() != grid.ny() ||
      profile.i2.size() != grid.ny()) {
    throw ConfigError("coupling profile has " + std::to_string(profile.y.size()) +
                      " samples, grid has " + std::to_string(grid.ny()) + " rows");
  }
  for (Index j = 0; j < grid.ny(); ++j) {
    if (std::abs(profile.y(j) - grid.y(j)) > 1e-9 * grid.dy()) {
      throw ConfigError("coupling profile y-samples do not match the grid at row " +
                        std::to_string(j));
    }
  }
}

PhaseMask build_phase_mask(const CouplingProfile &profile, const Grid2D &grid) {
  require_matching_axis(profile, grid);
  RealField phase(grid.ny(), grid.nx());
  Eigen::ArrayXd c(grid.nx());
  Eigen::ArrayXd s(grid.nx());
  for (Index i = 0; i < grid.nx(); ++i) {
    c(i) = std::cos(profile.delta_k * grid.x(i));
    s(i) = std::sin(profile.delta_k * grid.x(i));
  }
  for (Index j = 0; j < grid.ny(); ++j) {
    phase.row(j) = (profile.i1(j) * c + profile.i2(j) * s).transpose();
  }
  return {grid, std::move(phase), profile.delta_k};
}

Wavepacket apply_interaction(const Wavepacket &psi, const PhaseMask &mask) {
  if (!(psi.grid == mask.grid)) throw ConfigError("phase mask and wavepacket grids differ");
  ComplexField next(psi.grid.ny(), psi.grid.nx());
  for (Index j = 0; j < psi.grid.ny(); ++j) {
    for (Index i = 0; i < psi.grid.nx(); ++i) {
      next(j, i) = psi.amplitudes(j, i) * std::polar(1.0, mask.phase(j, i));
    }
  }
  return psi.with_amplitudes(std::move(next), psi.t);
}

Wavepacket vacuum_propagate(const Wavepacket &psi, double tau, PropagationAxes axes,
                            double edge_tolerance) {
  if (tau == 0.0) return psi;
  MomentumSpectrum spec = to_momentum(psi);
  const double c = units::hbar * tau / (2.0 * units::electron_mass);
  const bool along_x = axes != PropagationAxes::Transverse;
  const bool along_y = axes != PropagationAxes::Longitudinal;
  Eigen::ArrayXcd px = Eigen::ArrayXcd::Ones(psi.grid.nx());
  Eigen::ArrayXcd py = Eigen::ArrayXcd::Ones(psi.grid.ny());
  if (along_x) {
    for (Index i = 0; i < psi.grid.nx(); ++i) {
      const double k = psi.grid.kx(i);
      px(i) = std::polar(1.0, -c * k * k);
    }
  }
  if (along_y) {
    for (Index j = 0; j < psi.grid.ny(); ++j) {
      const double k = psi.grid.ky(j);
      py(j) = std::polar(1.0, -c * k * k);
    }
  }
  for (Index j = 0; j < psi.grid.ny(); ++j) {
    for (Index i = 0; i < psi.grid.nx(); ++i) spec.amplitudes(j, i) *= py(j) * px(i);
  }
  spec.t = psi.t + tau;
  Wavepacket out = from_momentum(spec);
  const double edge = edge_weight(out);
  if (edge > edge_tolerance) {
    throw ConfigError("vacuum propagation by " + format_double(tau) + " fs pushes " +
                      format_double(edge) + " of the norm into the grid border");
  }
  return out;
}

double spreading_time(double fwhm0, double fwhm1) {
  if (!(fwhm0 > 0.0) || !(fwhm1 >= fwhm0)) {
    throw DomainError("spreading time needs 0 < fwhm0 <= fwhm1");
  }
  const double s0 = fwhm0 / units::fwhm_per_sigma;
  const double ratio = fwhm1 / fwhm0;
  return 2.0 * units::electron_mass * s0 * s0 / units::hbar * std::sqrt(ratio * ratio - 1.0);
}

double bandwidth_limited_fwhm(double bandwidth, double energy) {
  if (!(bandwidth > 0.0)) throw DomainError("bandwidth must be positive");
  const double fwhm_k = bandwidth / (units::hbar * electron_kinematics(energy).v0);
  return 4.0 * std::log(2.0) / fwhm_k;
}

}  // namespace nediff
