#ifndef NEDIFF_ANALYTIC_ORDERS_HPP
#define NEDIFF_ANALYTIC_ORDERS_HPP

#include "nediff/core/wavepacket.hpp"
#include "nediff/nearfield/coupling.hpp"

#include <complex>
#include <filesystem>
#include <string>
#include <vector>

namespace nediff {

/// Transverse amplitudes of each photon order n for a separable initial envelope.
struct OrderDecomposition {
  std::vector<int> orders;                 // -n_max .. n_max
  std::vector<Eigen::ArrayXcd> amplitudes; // a_n(y)
  std::vector<Eigen::ArrayXcd> spectra;    // a~_n(ky), centered transform of a_n
  Eigen::ArrayXd y;
  Eigen::ArrayXd ky;
  double delta_k = 0.0;
  int series_depth = -1;  // -1 for the exact Bessel resummation
  double tail_weight = 0.0;

  /// Index of order n in the vectors above.
  std::size_t index(int n) const;
  /// Integral of |a_n|^2 dy.
  double population(int n) const;
};

/// J_n(x) for any integer n and real x.
double bessel_j(int n, double x);

/// Exact order amplitude i^n J_n(I1) (Jacobi-Anger coefficient of exp(i I1 cos)).
std::complex<double> order_coefficient(double i1, int n);

/// Normalized initial transverse profile g_perp(y) with integral |g_perp|^2 dy
/// equal to the squared wavepacket norm. ConfigError if psi is not separable.
Eigen::ArrayXcd transverse_profile(const Wavepacket &psi, double tolerance = 1e-9);

/// a_n(y) = i^n J_n(I1(y)) g_perp(y). n_max <= 0 selects the smallest n_max
/// whose omitted weight is below 1e-8 (capped at 24). DomainError when I2 is
/// not identically zero.
OrderDecomposition order_amplitudes_exact(const Wavepacket &psi, const CouplingProfile &profile,
                                          int n_max = 0);

/// Partial sum over l = |n| .. l_max of (i I1 / 2)^(2l - |n|) / ((l - |n|)! l!),
/// which converges to i^|n| J_|n|(I1). DomainError if l_max < |n|.
std::complex<double> order_series_taylor(double i1, int n, int l_max);

/// The same partial sum with the coefficients i^(2l) / (2^(2l) (l - |n|)! l!)
/// written in the proportional form; equals (i/2)^|n| times order_series_taylor.
std::complex<double> order_series_taylor_printed(double i1, int n, int l_max);

/// Lowest-order amplitude of order n >= 0: a~_n = T[(i I1 / 2)^n / n! g_perp],
/// i.e. the n-fold convolution of the initial transverse spectrum with I1~.
Eigen::ArrayXcd weak_field_order(const Wavepacket &psi, const CouplingProfile &profile, int n);

/// One CSV per order (ky_per_nm, density, phase_rad) plus a manifest.
void write_orders(const std::filesystem::path &directory, const OrderDecomposition &orders,
                  const std::string &provenance);

}  // namespace nediff

#endif  // NEDIFF_ANALYTIC_ORDERS_HPP
