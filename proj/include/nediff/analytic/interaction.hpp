#ifndef NEDIFF_ANALYTIC_INTERACTION_HPP
#define NEDIFF_ANALYTIC_INTERACTION_HPP

#include "nediff/core/wavepacket.hpp"
#include "nediff/nearfield/coupling.hpp"

namespace nediff {

/// Phase imprinted on the envelope, dphi(x', y) = I1(y) cos(dk x') + I2(y) sin(dk x'),
/// with x' the co-moving coordinate of the grid columns.
struct PhaseMask {
  Grid2D grid;
  RealField phase;
  double delta_k;
};

/// Throws ConfigError unless the profile samples exactly the grid's y-axis.
void require_matching_axis(const CouplingProfile &profile, const Grid2D &grid);

PhaseMask build_phase_mask(const CouplingProfile &profile, const Grid2D &grid);

/// g -> g exp(i dphi). The interaction is taken as complete (full x'' line).
Wavepacket apply_interaction(const Wavepacket &psi, const PhaseMask &mask);

enum class PropagationAxes { Both, Longitudinal, Transverse };

/// Free evolution of the envelope by tau [fs] (negative tau runs backwards):
/// g~ -> g~ exp(-i hbar (kx'^2 + ky^2) tau / 2m), carrier frame, t -> t + tau.
/// Throws ConfigError if more than `edge_tolerance` of the norm ends up in the
/// outer 10% band of the grid.
Wavepacket vacuum_propagate(const Wavepacket &psi, double tau,
                            PropagationAxes axes = PropagationAxes::Both,
                            double edge_tolerance = 1e-6);

/// Free-flight time after which a Gaussian of density FWHM `fwhm0` (flat
/// phase) spreads to `fwhm1` along one axis. DomainError if fwhm1 < fwhm0.
double spreading_time(double fwhm0, double fwhm1);

/// Density FWHM of the bandwidth-limited packet whose kinetic-energy FWHM is
/// `bandwidth` [eV] at energy E0 (first order in the spread).
double bandwidth_limited_fwhm(double bandwidth, double energy);

}  // namespace nediff

#endif  // NEDIFF_ANALYTIC_INTERACTION_HPP
