#include "nediff/analysis/observables.hpp"

#include "nediff/core/errors.hpp"
#include "nediff/core/format.hpp"
#include "nediff/core/fourier.hpp"
#include "nediff/core/units.hpp"

#include <algorithm>
#include <cmath>

namespace nediff {

namespace {

// Fractional index of `value` on an axis starting at `first` with spacing `step`.
double fractional_index(double value, double first, double step) {
  return (value - first) / step;
}

// Half-maximum crossings around the global maximum, linearly interpolated.
std::pair<double, double> half_max_bounds(const Eigen::ArrayXd &coord, const Eigen::ArrayXd &v) {
  Index peak = 0;
  const double top = v.maxCoeff(&peak);
  const double half = 0.5 * top;
  Index lo = peak;
  while (lo > 0 && v(lo - 1) >= half) --lo;
  Index hi = peak;
  while (hi + 1 < v.size() && v(hi + 1) >= half) ++hi;
  if (lo == 0 || hi + 1 == v.size()) {
    throw DomainError("distribution does not fall to half maximum inside the grid");
  }
  auto cross = [&](Index a, Index b) {
    return coord(a) + (half - v(a)) / (v(b) - v(a)) * (coord(b) - coord(a));
  };
  return {cross(lo - 1, lo), cross(hi, hi + 1)};
}

}  // namespace

MomentumDensity momentum_density(const Wavepacket &psi) {
  const MomentumSpectrum spec = to_momentum(psi);
  return {spec.grid, spec.amplitudes.abs2(), spec.k0, spec.energy};
}

Crosscut crosscut(const MomentumDensity &density, CutAxis axis, double value) {
  const Grid2D &g = density.grid;
  const bool along_kx = axis == CutAxis::Kx;
  const Index lines = along_kx ? g.ny() : g.nx();
  const double first = along_kx ? density.ky(0) : density.kx(0);
  const double step = along_kx ? g.dky() : g.dkx();
  const double f = fractional_index(value, first, step);
  if (!(f >= -1e-9 && f <= static_cast<double>(lines - 1) + 1e-9)) {
    throw DomainError("crosscut position " + format_double(value) + " lies outside the grid");
  }
  const Index a = std::clamp<Index>(static_cast<Index>(std::floor(f)), 0, lines - 2);
  const double w = std::clamp(f - static_cast<double>(a), 0.0, 1.0);
  Crosscut cut;
  cut.axis = axis;
  cut.fixed = value;
  if (along_kx) {
    cut.coordinate.resize(g.nx());
    for (Index i = 0; i < g.nx(); ++i) cut.coordinate(i) = density.kx(i);
    cut.density = ((1.0 - w) * density.values.row(a) + w * density.values.row(a + 1)).transpose();
  } else {
    cut.coordinate = g.ky_axis();
    cut.density = (1.0 - w) * density.values.col(a) + w * density.values.col(a + 1);
  }
  return cut;
}

Crosscut marginal(const MomentumDensity &density, CutAxis axis) {
  const Grid2D &g = density.grid;
  Crosscut cut;
  cut.axis = axis;
  if (axis == CutAxis::Kx) {
    cut.coordinate.resize(g.nx());
    for (Index i = 0; i < g.nx(); ++i) cut.coordinate(i) = density.kx(i);
    cut.density = density.values.colwise().sum().transpose() * g.dky();
  } else {
    cut.coordinate = g.ky_axis();
    cut.density = density.values.rowwise().sum() * g.dkx();
  }
  return cut;
}

double SidebandTable::population(int n) const {
  const auto it = std::find(orders.begin(), orders.end(), n);
  return it == orders.end() ? 0.0 : populations[static_cast<size_t>(it - orders.begin())];
}

double SidebandTable::total() const {
  double sum = 0.0;
  for (double p : populations) sum += p;
  return sum;
}

SidebandTable sideband_populations(const MomentumDensity &density, double delta_k) {
  const Grid2D &g = density.grid;
  if (!(delta_k >= 6.0 * g.dkx())) {
    throw ConfigError("sideband spacing " + format_double(delta_k) +
                      " is resolved by fewer than 6 momentum cells (dkx = " +
                      format_double(g.dkx()) + ")");
  }
  const Eigen::ArrayXd column = density.values.colwise().sum().transpose();
  const Eigen::ArrayXd ky = g.ky_axis();
  const Eigen::ArrayXd column_ky2 =
      (density.values.colwise() * ky.square()).colwise().sum().transpose();
  // Order of each column: nearest multiple of delta_k.
  std::vector<int> order_of(static_cast<size_t>(g.nx()));
  int lo = 0;
  int hi = 0;
  for (Index i = 0; i < g.nx(); ++i) {
    const int n = static_cast<int>(std::floor(g.kx(i) / delta_k + 0.5));
    order_of[static_cast<size_t>(i)] = n;
    lo = std::min(lo, n);
    hi = std::max(hi, n);
  }
  SidebandTable table;
  table.delta_k = delta_k;
  const size_t count = static_cast<size_t>(hi - lo + 1);
  std::vector<double> mass(count, 0.0);
  std::vector<double> second(count, 0.0);
  for (Index i = 0; i < g.nx(); ++i) {
    const size_t slot = static_cast<size_t>(order_of[static_cast<size_t>(i)] - lo);
    mass[slot] += column(i);
    second[slot] += column_ky2(i);
  }
  for (size_t k = 0; k < count; ++k) {
    table.orders.push_back(lo + static_cast<int>(k));
    table.populations.push_back(mass[k] * g.dk_area());
    table.ky_spread.push_back(mass[k] > 0.0 ? std::sqrt(second[k] / mass[k]) : 0.0);
  }
  return table;
}

std::vector<double> find_peaks(const Crosscut &cut, double threshold) {
  const Eigen::ArrayXd &v = cut.density;
  const Index n = v.size();
  std::vector<double> peaks;
  if (n < 3) return peaks;
  const double floor = threshold * v.maxCoeff();
  const double step = cut.coordinate(1) - cut.coordinate(0);
  for (Index i = 1; i + 1 < n; ++i) {
    if (!(v(i) > floor && v(i) > v(i - 1) && v(i) >= v(i + 1))) continue;
    const double curvature = v(i - 1) - 2.0 * v(i) + v(i + 1);
    const double shift = curvature < 0.0 ? 0.5 * (v(i - 1) - v(i + 1)) / curvature : 0.0;
    peaks.push_back(cut.coordinate(i) + shift * step);
  }
  return peaks;
}

double peak_spacing(const Crosscut &cut, double threshold) {
  const std::vector<double> peaks = find_peaks(cut, threshold);
  if (peaks.size() < 2) {
    throw DomainError("peak spacing needs at least two peaks above threshold, found " +
                      std::to_string(peaks.size()));
  }
  std::vector<double> gaps;
  for (size_t k = 1; k < peaks.size(); ++k) gaps.push_back(peaks[k] - peaks[k - 1]);
  std::sort(gaps.begin(), gaps.end());
  const size_t m = gaps.size() / 2;
  return gaps.size() % 2 == 1 ? gaps[m] : 0.5 * (gaps[m - 1] + gaps[m]);
}

EnergyAxis energy_axis(const Eigen::ArrayXd &kx, double k0, double energy) {
  const double v0 = electron_kinematics(energy).v0;
  const double c = units::hbar * units::hbar / (2.0 * units::electron_mass);
  return {c * (kx.square() - k0 * k0), units::hbar * v0 * (kx - k0)};
}

double deflection_angle(double ky, double k0) {
  if (!(k0 > 0.0)) throw DomainError("deflection angle needs k0 > 0");
  return std::atan(ky / k0) * 180.0 / units::pi;
}

double depletion(const MomentumDensity &final_density, const MomentumDensity &initial) {
  const Index i = final_density.grid.nx() / 2;
  const Index j = final_density.grid.ny() / 2;
  if (!(final_density.grid == initial.grid)) {
    throw ConfigError("depletion needs densities on the same grid");
  }
  return final_density.values(j, i) / initial.values(j, i);
}

double max_deflection(const MomentumDensity &density, double threshold) {
  double widest = 0.0;
  for (double k : find_peaks(marginal(density, CutAxis::Ky), threshold)) {
    widest = std::max(widest, std::abs(k));
  }
  return deflection_angle(widest, density.k0);
}

double deflection_extent(const MomentumDensity &density, double threshold) {
  const Crosscut m = marginal(density, CutAxis::Ky);
  const Index n = m.density.size();
  const double level = threshold * m.density.maxCoeff();
  if (!(level > 0.0)) return 0.0;
  double widest = 0.0;
  for (Index j = 0; j < n; ++j) {
    if (m.density(j) < level) continue;
    double k = m.coordinate(j);
    const Index out = k < 0.0 ? j - 1 : j + 1;
    if (out >= 0 && out < n && m.density(out) < level) {
      const double f = (m.density(j) - level) / (m.density(j) - m.density(out));
      k += f * (m.coordinate(out) - m.coordinate(j));
    }
    widest = std::max(widest, std::abs(k));
  }
  return deflection_angle(widest, density.k0);
}

double longitudinal_spacing(const MomentumDensity &density) {
  return peak_spacing(marginal(density, CutAxis::Kx));
}

double transverse_spacing(const MomentumDensity &density, double delta_k) {
  return 0.5 * peak_spacing(crosscut(density, CutAxis::Ky, density.k0 + delta_k));
}

EnergySpread energy_spread(const MomentumDensity &density) {
  const Grid2D &g = density.grid;
  const double c = units::hbar * units::hbar / (2.0 * units::electron_mass);
  const Crosscut mx = marginal(density, CutAxis::Kx);
  const auto [lo, hi] = half_max_bounds(mx.coordinate, mx.density);
  const double fwhm = c * (hi * hi - lo * lo);
  double mass = 0.0;
  double e1 = 0.0;
  double e2 = 0.0;
  for (Index j = 0; j < g.ny(); ++j) {
    const double ky2 = density.ky(j) * density.ky(j);
    for (Index i = 0; i < g.nx(); ++i) {
      const double e = c * (density.kx(i) * density.kx(i) + ky2);
      const double w = density.values(j, i);
      mass += w;
      e1 += w * e;
      e2 += w * e * e;
    }
  }
  e1 /= mass;
  return {fwhm, std::sqrt(std::max(0.0, e2 / mass - e1 * e1))};
}

double relative_l2_distance(const RealField &a, const RealField &b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ConfigError("L2 distance needs fields of the same shape");
  }
  return std::sqrt((a - b).square().sum() / b.square().sum());
}

}  // namespace nediff
