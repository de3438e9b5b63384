#ifndef NEDIFF_CORE_UNITS_HPP
#define NEDIFF_CORE_UNITS_HPP

#include <numbers>

// Unit system: length nm, time fs, energy eV. Potentials are in volts and
// charges in units of the elementary charge, so q * Phi is directly in eV.
namespace nediff::units {

inline constexpr double pi = std::numbers::pi;

/// Reduced Planck constant [eV fs].
inline constexpr double hbar = 0.6582119569;
/// Speed of light [nm/fs].
inline constexpr double c0 = 299.792458;
/// Electron rest energy m c0^2 [eV].
inline constexpr double electron_rest_energy = 510998.95;
/// Electron mass [eV fs^2 / nm^2].
inline constexpr double electron_mass = electron_rest_energy / (c0 * c0);
/// Electron charge in units of e.
inline constexpr double electron_charge = -1.0;

/// FWHM of a Gaussian density divided by its standard deviation.
inline constexpr double fwhm_per_sigma = 2.3548200450309493;  // 2 sqrt(2 ln 2)

}  // namespace nediff::units

#endif  // NEDIFF_CORE_UNITS_HPP
