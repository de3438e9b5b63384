#include "nediff/analytic/orders.hpp"

#include "nediff/analytic/interaction.hpp"
#include "nediff/core/errors.hpp"
#include "nediff/core/format.hpp"
#include "nediff/core/fourier.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace nediff {

namespace {

constexpr double kTailTarget = 1e-8;
constexpr int kMaxOrder = 24;

std::ofstream open_for_writing(const std::filesystem::path &path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

std::size_t OrderDecomposition::index(int n) const {
  for (std::size_t k = 0; k < orders.size(); ++k) {
    if (orders[k] == n) return k;
  }
  throw std::out_of_range("order " + std::to_string(n) + " not in decomposition");
}

double OrderDecomposition::population(int n) const {
  for (std::size_t k = 0; k < orders.size(); ++k) {
    if (orders[k] == n) {
      const double dy = y.size() > 1 ? y(1) - y(0) : 1.0;
      return amplitudes[k].abs2().sum() * dy;
    }
  }
  return 0.0;
}

double bessel_j(int n, double x) {
  const int m = std::abs(n);
  double value = std::cyl_bessel_j(static_cast<double>(m), std::abs(x));
  // J_{-m} = (-1)^m J_m and J_m(-x) = (-1)^m J_m(x).
  if (m % 2 == 1 && (n < 0) != (x < 0)) value = -value;
  return value;
}

std::complex<double> order_coefficient(double i1, int n) {
  static const std::complex<double> powers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return powers[((n % 4) + 4) % 4] * bessel_j(n, i1);
}

Eigen::ArrayXcd transverse_profile(const Wavepacket &psi, double tolerance) {
  const ComplexField &g = psi.amplitudes;
  Index pj = 0;
  Index pi = 0;
  const double peak2 = g.abs2().maxCoeff(&pj, &pi);
  if (!(peak2 > 0.0)) throw ConfigError("wavepacket is identically zero");
  const Eigen::ArrayXcd column = g.col(pi);
  const Eigen::ArrayXcd row = g.row(pj).transpose();
  const Complex pivot = g(pj, pi);
  double worst = 0.0;
  for (Index j = 0; j < g.rows(); ++j) {
    for (Index i = 0; i < g.cols(); ++i) {
      worst = std::max(worst, std::abs(g(j, i) - column(j) * row(i) / pivot));
    }
  }
  if (worst > tolerance * std::sqrt(peak2)) {
    throw ConfigError("initial envelope is not separable in x and y (residual " +
                      format_double(worst / std::sqrt(peak2)) + ")");
  }
  const double col_norm = std::sqrt(column.abs2().sum() * psi.grid.dy());
  return column * (psi.norm() / col_norm);
}

OrderDecomposition order_amplitudes_exact(const Wavepacket &psi, const CouplingProfile &profile,
                                          int n_max) {
  require_matching_axis(profile, psi.grid);
  if (profile.i2.abs().maxCoeff() > 1e-9) {
    throw DomainError(
        "exact order resummation needs I2 = 0; use apply_interaction for this profile");
  }
  const Eigen::ArrayXcd gperp = transverse_profile(psi);
  const double dy = psi.grid.dy();
  const double total = gperp.abs2().sum() * dy;

  auto amplitude = [&](int n) {
    Eigen::ArrayXcd a(gperp.size());
    for (Index j = 0; j < a.size(); ++j) a(j) = order_coefficient(profile.i1(j), n) * gperp(j);
    return a;
  };

  int top = n_max;
  if (top <= 0) {
    double kept = amplitude(0).abs2().sum() * dy;
    top = 0;
    while (total - kept >= kTailTarget * total && top < kMaxOrder) {
      ++top;
      kept += 2.0 * amplitude(top).abs2().sum() * dy;
    }
  }

  OrderDecomposition out;
  out.y = profile.y;
  out.ky = momentum_axis(psi.grid.ny(), dy);
  out.delta_k = profile.delta_k;
  double kept = 0.0;
  for (int n = -top; n <= top; ++n) {
    out.orders.push_back(n);
    out.amplitudes.push_back(amplitude(n));
    kept += out.amplitudes.back().abs2().sum() * dy;
    out.spectra.push_back(forward_transform_1d(out.amplitudes.back(), dy, psi.grid.y0()));
  }
  out.tail_weight = std::max(0.0, total - kept);
  return out;
}

namespace {

std::complex<double> taylor_sum(double i1, int n, int l_max, std::complex<double> first) {
  const int m = std::abs(n);
  if (l_max < m) {
    throw DomainError("series depth " + std::to_string(l_max) + " is below |n| = " +
                      std::to_string(m));
  }
  const std::complex<double> z(0.0, 0.5 * i1);
  std::complex<double> term = first;
  std::complex<double> sum = term;
  for (int l = m + 1; l <= l_max; ++l) {
    term *= z * z / static_cast<double>((l - m) * l);
    sum += term;
  }
  return sum;
}

std::complex<double> leading_term(std::complex<double> base, double i1, int m) {
  std::complex<double> t = 1.0;
  for (int k = 1; k <= m; ++k) t *= base * i1 / static_cast<double>(k);
  return t;
}

}  // namespace

std::complex<double> order_series_taylor(double i1, int n, int l_max) {
  const int m = std::abs(n);
  return taylor_sum(i1, n, l_max, leading_term({0.0, 0.5}, i1, m));
}

std::complex<double> order_series_taylor_printed(double i1, int n, int l_max) {
  const int m = std::abs(n);
  // l = m term: i^(2m) / (2^(2m) m!) I1^m.
  std::complex<double> first = leading_term(1.0, i1, m);
  for (int k = 0; k < m; ++k) first *= std::complex<double>(0.0, 0.5) * std::complex<double>(0.0, 0.5);
  return taylor_sum(i1, n, l_max, first);
}

Eigen::ArrayXcd weak_field_order(const Wavepacket &psi, const CouplingProfile &profile, int n) {
  if (n < 0) throw DomainError("weak_field_order expects n >= 0");
  require_matching_axis(profile, psi.grid);
  const Eigen::ArrayXcd gperp = transverse_profile(psi);
  Eigen::ArrayXcd a(gperp.size());
  for (Index j = 0; j < a.size(); ++j) {
    a(j) = leading_term({0.0, 0.5}, profile.i1(j), n) * gperp(j);
  }
  return forward_transform_1d(a, psi.grid.dy(), psi.grid.y0());
}

void write_orders(const std::filesystem::path &directory, const OrderDecomposition &orders,
                  const std::string &provenance) {
  std::filesystem::create_directories(directory);
  for (std::size_t k = 0; k < orders.orders.size(); ++k) {
    std::ofstream out =
        open_for_writing(directory / ("order_" + std::to_string(orders.orders[k]) + ".csv"));
    out << "# n=" << orders.orders[k] << " delta_k_per_nm=" << format_double(orders.delta_k)
        << '\n';
    out << "ky_per_nm,density,phase_rad\n";
    for (Index j = 0; j < orders.ky.size(); ++j) {
      const std::complex<double> v = orders.spectra[k](j);
      out << format_double(orders.ky(j)) << ',' << format_double(std::norm(v)) << ','
          << format_double(std::arg(v)) << '\n';
    }
  }
  std::ofstream manifest = open_for_writing(directory / "orders_manifest.txt");
  manifest << "orders";
  for (int n : orders.orders) manifest << ' ' << n;
  manifest << "\ndelta_k_per_nm " << format_double(orders.delta_k) << "\nseries_depth "
           << orders.series_depth << "\ntail_weight " << format_double(orders.tail_weight)
           << "\nprovenance " << provenance << '\n';
}

}  // namespace nediff
