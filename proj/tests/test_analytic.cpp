#include <doctest.h>

#include "nediff/analytic/interaction.hpp"
#include "nediff/analytic/orders.hpp"
#include "nediff/core/errors.hpp"
#include "nediff/core/fourier.hpp"
#include "nediff/core/units.hpp"
#include "nediff/nearfield/coupling.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace nediff;

namespace {

CouplingProfile constant_profile(const Grid2D &grid, double i1, double i2, double dk) {
  CouplingProfile p;
  p.y = grid.y_axis();
  p.i1 = Eigen::ArrayXd::Constant(grid.ny(), i1);
  p.i2 = Eigen::ArrayXd::Constant(grid.ny(), i2);
  p.delta_k = dk;
  return p;
}

struct Fig1 {
  Grid2D grid{2048, 1024, 0.25, 0.25};
  Wavepacket psi = gaussian_wavepacket(grid, 100.0, 60.0, 20.0);
  CouplingProfile profile = coupling_profile(Wire{10.0, 0.5, {}}, LaserParams{2000.0, 0.2, 0.0},
                                             electron_kinematics(100.0).v0, grid.y_axis());
};

const Fig1 &fig1() {
  static const Fig1 f;
  return f;
}

CouplingProfile scaled(const CouplingProfile &p, double s) {
  CouplingProfile q = p;
  q.i1 *= s;
  q.i2 *= s;
  return q;
}

// Power series of J_n, independent of the library's recurrence.
double bessel_series(int n, double x) {
  double sum = 0.0;
  for (int m = 0; m < 60; ++m) {
    sum += std::pow(-1.0, m) * std::pow(x / 2.0, 2 * m + n) /
           (std::tgamma(m + 1.0) * std::tgamma(m + n + 1.0));
  }
  return sum;
}

}  // namespace

TEST_CASE("bessel helper and Jacobi-Anger coefficients") {
  CHECK(bessel_j(0, 1.0) == doctest::Approx(0.7651976866).epsilon(1e-9));
  CHECK(bessel_j(1, 1.0) == doctest::Approx(0.4400505857).epsilon(1e-9));
  for (int n = -5; n <= 5; ++n) {
    for (double x : {-3.7, -0.4, 0.0, 0.9, 4.2}) {
      const double ref = std::pow(-1.0, n < 0 ? -n : 0) * bessel_series(std::abs(n), std::abs(x)) *
                         (x < 0 && std::abs(n) % 2 == 1 ? -1.0 : 1.0);
      CHECK(bessel_j(n, x) == doctest::Approx(ref).epsilon(1e-10));
    }
  }
  // exp(i A cos t) = sum i^n J_n(A) exp(i n t).
  const double a = 1.7;
  const double t = 0.8;
  std::complex<double> sum = 0.0;
  for (int n = -30; n <= 30; ++n) sum += order_coefficient(a, n) * std::polar(1.0, n * t);
  CHECK(std::abs(sum - std::polar(1.0, a * std::cos(t))) < 1e-13);
}

TEST_CASE("phase mask construction") {
  const Grid2D grid(256, 64, 0.5, 0.5);
  const double dk = 0.159;
  const PhaseMask zero = build_phase_mask(constant_profile(grid, 0.0, 0.0, dk), grid);
  CHECK(zero.phase.abs().maxCoeff() == 0.0);

  CouplingProfile p = constant_profile(grid, 0.0, 0.0, dk);
  for (Index j = 0; j < grid.ny(); ++j) {
    p.i1(j) = std::tanh(grid.y(j) / 5.0);
    p.i2(j) = 0.3 * std::tanh(grid.y(j) / 5.0);
  }
  const PhaseMask m = build_phase_mask(p, grid);
  for (Index j = 0; j < grid.ny(); j += 7) {
    for (Index i = 0; i < grid.nx(); i += 11) {
      const double x = grid.x(i);
      CHECK(m.phase(j, i) ==
            doctest::Approx(p.i1(j) * std::cos(dk * x) + p.i2(j) * std::sin(dk * x)).epsilon(1e-12));
      const double period = 2.0 * units::pi / dk;
      const double shifted = p.i1(j) * std::cos(dk * (x + period)) + p.i2(j) * std::sin(dk * (x + period));
      CHECK(std::abs(shifted - m.phase(j, i)) < 1e-12);
    }
  }
  // Odd wire profile gives an odd mask (row j <-> row ny - j).
  const PhaseMask w = build_phase_mask(
      coupling_profile(Wire{10.0, 0.5, {}}, LaserParams{}, 5.93, grid.y_axis()), grid);
  for (Index j = 1; j < grid.ny() / 2; ++j) {
    CHECK((w.phase.row(grid.ny() / 2 + j) + w.phase.row(grid.ny() / 2 - j)).abs().maxCoeff() < 1e-9);
  }

  CouplingProfile bad = p;
  bad.y(2) += 0.01;
  CHECK_THROWS_AS(build_phase_mask(bad, grid), ConfigError);
  CHECK_THROWS_AS(build_phase_mask(p, Grid2D(256, 32, 0.5, 0.5)), ConfigError);
}

TEST_CASE("apply interaction preserves the norm") {
  const Grid2D grid(512, 128, 0.5, 0.5);
  const Wavepacket psi = gaussian_wavepacket(grid, 100.0, 40.0, 10.0);
  const Wavepacket same = apply_interaction(psi, build_phase_mask(constant_profile(grid, 0.0, 0.0, 0.159), grid));
  CHECK((same.amplitudes - psi.amplitudes).abs().maxCoeff() == 0.0);
  const Wavepacket out = apply_interaction(psi, build_phase_mask(constant_profile(grid, 2.3, -0.7, 0.159), grid));
  CHECK(std::abs(out.norm() - psi.norm()) < 1e-12);
  CHECK(out.k0 == psi.k0);
  CHECK(out.t == psi.t);
}

TEST_CASE("uniform stripe order populations are Bessel squares") {
  const Grid2D grid(1024, 32, 0.5, 0.5);
  const Wavepacket psi = gaussian_wavepacket(grid, 100.0, 100.0, 3.0);
  for (double i1 : {0.5, 1.0, 2.0}) {
    const CouplingProfile p = coupling_profile(UniformStripe{i1, -1e9, 1e9}, LaserParams{}, 5.93,
                                               grid.y_axis());
    const OrderDecomposition d = order_amplitudes_exact(psi, p);
    for (int n = -4; n <= 4; ++n) {
      CHECK(d.population(n) == doctest::Approx(std::pow(bessel_series(std::abs(n), i1), 2)).epsilon(1e-10));
    }
    double sum = 0.0;
    for (int n : d.orders) sum += d.population(n);
    CHECK(std::abs(sum - 1.0) < 1e-8);
    CHECK(d.tail_weight < 1e-8);
  }
  const CouplingProfile one = coupling_profile(UniformStripe{1.0, -1e9, 1e9}, LaserParams{}, 5.93, grid.y_axis());
  const OrderDecomposition d = order_amplitudes_exact(psi, one);
  CHECK(d.population(0) == doctest::Approx(0.5855).epsilon(1e-3));
  CHECK(d.population(1) == doctest::Approx(0.1936).epsilon(1e-3));
  CHECK(d.population(-1) == doctest::Approx(0.1936).epsilon(1e-3));

  const OrderDecomposition none = order_amplitudes_exact(psi, constant_profile(grid, 0.0, 0.0, 0.159));
  CHECK(none.orders.size() == 1);
  CHECK((none.amplitudes[0] - transverse_profile(psi)).abs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(order_amplitudes_exact(psi, constant_profile(grid, 1.0, 0.1, 0.159)), DomainError);
}

TEST_CASE("order decomposition of the wire: completeness and parity") {
  const Fig1 &f = fig1();
  const OrderDecomposition d = order_amplitudes_exact(f.psi, f.profile);
  double sum = 0.0;
  for (int n : d.orders) sum += d.population(n);
  CHECK(std::abs(sum - 1.0) < 1e-6);
  CHECK(d.orders.back() <= 24);
  const Index c = f.grid.ny() / 2;
  for (int n : d.orders) {
    const Eigen::ArrayXcd &a = d.amplitudes[d.index(n)];
    const double sign = (std::abs(n) % 2 == 0) ? 1.0 : -1.0;
    for (Index j = 1; j < c; ++j) CHECK(std::abs(a(c + j) - sign * a(c - j)) <= 1e-9);
    if (std::abs(n) % 2 == 1) {
      CHECK(std::abs(a(c)) == 0.0);
      CHECK(std::abs(d.spectra[d.index(n)](c)) <= 1e-9 * d.spectra[d.index(n)].abs().maxCoeff());
    }
    const Eigen::ArrayXd mag = d.spectra[d.index(n)].abs();
    for (Index j = 1; j < c; ++j) CHECK(std::abs(mag(c + j) - mag(c - j)) <= 1e-9 * mag.maxCoeff() + 1e-15);
  }
}

TEST_CASE("Taylor series of the order amplitudes") {
  double worst = 0.0;
  for (int n = -6; n <= 6; ++n) {
    for (double i1 = -5.0; i1 <= 5.0; i1 += 0.25) {
      worst = std::max(worst, std::abs(order_series_taylor(i1, n, 30) - order_coefficient(i1, n)));
    }
  }
  CHECK(worst <= 1e-10);
  CHECK(order_series_taylor(0.0, 0, 0) == std::complex<double>(1.0, 0.0));
  // l_max = |n| is the single-path term (i I1 / 2)^|n| / |n|!.
  for (int n : {0, 1, 2, 3, -2}) {
    const int m = std::abs(n);
    const std::complex<double> expect = std::pow(std::complex<double>(0.0, 0.35), m) / std::tgamma(m + 1.0);
    CHECK(std::abs(order_series_taylor(0.7, n, m) - expect) < 1e-15);
  }
  // The proportional form differs by the constant (i/2)^|n| per order.
  for (int n : {0, 1, 2, 5}) {
    for (int l = std::abs(n); l < 12; ++l) {
      const std::complex<double> ratio = std::pow(std::complex<double>(0.0, 0.5), std::abs(n));
      CHECK(std::abs(order_series_taylor_printed(1.3, n, l) - ratio * order_series_taylor(1.3, n, l)) < 1e-14);
    }
  }
  CHECK_THROWS_AS(order_series_taylor(1.0, 3, 2), DomainError);
}

TEST_CASE("weak-field order equals the convolution with the coupling transform") {
  const Grid2D grid(64, 128, 0.5, 0.5);
  const Wavepacket psi = gaussian_wavepacket(grid, 100.0, 8.0, 10.0);
  const CouplingProfile p = coupling_profile(Wire{5.0, 0.5, {}}, LaserParams{2000.0, 0.05, 0.0},
                                             electron_kinematics(100.0).v0, grid.y_axis());
  const Eigen::ArrayXcd g = transverse_profile(psi);
  const Eigen::ArrayXcd gk = forward_transform_1d(g, grid.dy());
  const Eigen::ArrayXcd ik = forward_transform_1d(p.i1.cast<std::complex<double>>(), grid.dy());
  const Index n = grid.ny();
  const double dk = grid.dky();
  Eigen::ArrayXcd conv = Eigen::ArrayXcd::Zero(n);
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) {
      const Index c = ((a - b + n / 2) % n + n) % n;
      conv(a) += gk(c) * ik(b);
    }
  }
  conv *= dk / std::sqrt(2.0 * units::pi);
  const Eigen::ArrayXcd w1 = weak_field_order(psi, p, 1);
  CHECK((w1 - std::complex<double>(0.0, 0.5) * conv).abs().maxCoeff() <= 1e-12 * conv.abs().maxCoeff());
  CHECK((weak_field_order(psi, p, 0) - gk).abs().maxCoeff() <= 1e-14);
  CHECK_THROWS_AS(weak_field_order(psi, p, -1), DomainError);
}

TEST_CASE("weak-field limit approaches the exact order-1 amplitude") {
  const Fig1 &f = fig1();
  double prev = 1e300;
  double last = 0.0;
  for (double s : {1.0, 0.5, 0.25, 0.125}) {
    const CouplingProfile p = scaled(f.profile, s);
    const OrderDecomposition d = order_amplitudes_exact(f.psi, p, 2);
    const Eigen::ArrayXcd exact = d.spectra[d.index(1)];
    const Eigen::ArrayXcd weak = weak_field_order(f.psi, p, 1);
    const double gap = std::sqrt((weak - exact).abs2().sum() / exact.abs2().sum());
    MESSAGE("field scale " << s << " relative gap " << gap);
    CHECK(gap < prev);
    prev = gap;
    last = gap;
  }
  CHECK(last < 0.01);
}

TEST_CASE("vacuum propagation") {
  const Grid2D grid(1024, 256, 0.5, 0.5);
  const Wavepacket psi = gaussian_wavepacket(grid, 100.0, 20.0, 10.0);
  const Wavepacket same = vacuum_propagate(psi, 0.0);
  CHECK((same.amplitudes - psi.amplitudes).abs().maxCoeff() == 0.0);

  const double tau = 400.0;
  const Wavepacket out = vacuum_propagate(psi, tau);
  CHECK(std::abs(out.norm() - psi.norm()) < 1e-12);
  CHECK(out.t == tau);
  // Density sigma grows as sigma0 sqrt(1 + (hbar t / (2 m sigma0^2))^2).
  const double c = units::hbar / (2.0 * units::electron_mass);
  const MeasuredWidths w = measure_widths(out);
  for (auto [w0, measured, d] : {std::tuple{20.0, w.fwhm_x, grid.dx()}, std::tuple{10.0, w.fwhm_y, grid.dy()}}) {
    const double s0 = w0 / units::fwhm_per_sigma;
    const double s = s0 * std::sqrt(1.0 + std::pow(c * tau / (s0 * s0), 2));
    CHECK(std::abs(measured - s * units::fwhm_per_sigma) <= d);
  }
  const Wavepacket longitudinal = vacuum_propagate(psi, tau, PropagationAxes::Longitudinal);
  CHECK(std::abs(measure_widths(longitudinal).fwhm_y - 10.0) <= grid.dy());
  CHECK(measure_widths(longitudinal).fwhm_x == doctest::Approx(w.fwhm_x));

  const Wavepacket back = vacuum_propagate(out, -tau);
  CHECK((back.amplitudes - psi.amplitudes).abs().maxCoeff() < 1e-12);

  CHECK_THROWS_AS(vacuum_propagate(psi, 20000.0), ConfigError);
}

TEST_CASE("chirped 2 eV packet reaches 20 fs after about 2 ps") {
  const double e0 = 100.0;
  const Kinematics kin = electron_kinematics(e0);
  // Bandwidth-limited density FWHMs satisfy fwhm_x fwhm_k = 4 ln 2.
  const double fwhm_k = 2.0 / (units::hbar * kin.v0);
  const double fwhm_x0 = 4.0 * std::log(2.0) / fwhm_k;
  const Grid2D grid(4096, 64, 0.25, 0.5);
  const Wavepacket psi = gaussian_wavepacket(grid, e0, fwhm_x0, 5.0);
  const double target = 20.0 * kin.v0;
  const double s0 = fwhm_x0 / units::fwhm_per_sigma;
  const double s1 = target / units::fwhm_per_sigma;
  const double tau = 2.0 * units::electron_mass * s0 * s0 / units::hbar * std::sqrt(s1 * s1 / (s0 * s0) - 1.0);
  CHECK(tau == doctest::Approx(2000.0).epsilon(0.05));
  const Wavepacket out = vacuum_propagate(psi, tau, PropagationAxes::Longitudinal);
  CHECK(temporal_spread(out) == doctest::Approx(20.0).epsilon(0.01));
  CHECK(std::abs(measure_widths(out).fwhm_y - 5.0) <= grid.dy());
}

TEST_CASE("order CSV export") {
  const Grid2D grid(64, 16, 0.5, 0.5);
  const Wavepacket psi = gaussian_wavepacket(grid, 100.0, 8.0, 2.0);
  const OrderDecomposition d = order_amplitudes_exact(psi, constant_profile(grid, 0.5, 0.0, 0.159), 2);
  const auto dir = std::filesystem::temp_directory_path() / "nediff_orders_test";
  std::filesystem::remove_all(dir);
  write_orders(dir, d, "stripe");
  CHECK(std::filesystem::exists(dir / "order_-2.csv"));
  CHECK(std::filesystem::exists(dir / "order_2.csv"));
  std::ifstream manifest(dir / "orders_manifest.txt");
  std::string first;
  std::getline(manifest, first);
  CHECK(first == "orders -2 -1 0 1 2");
  std::filesystem::remove_all(dir);
}
