#include "nediff/nearfield/coupling.hpp"

#include "nediff/core/errors.hpp"
#include "nediff/core/format.hpp"
#include "nediff/core/fourier.hpp"
#include "nediff/core/units.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <limits>
#include <ostream>
#include <vector>

namespace nediff {

namespace {

using Complex = std::complex<double>;
using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

// Integral of f(x) exp(i k x) over [a, b], bisecting until the Kronrod-Gauss
// difference is below tol (or at rounding level).
struct Estimate {
  Complex value = 0.0;
  double error = 0.0;
};

template <class F>
Complex adaptive_panel(const F &f, double k, double a, double b, double tol, int depth,
                       int max_depth, double &error) {
  auto g = [&](double x) { return f(x) * std::polar(1.0, k * x); };
  double err = 0.0;
  double l1 = 0.0;
  const Complex value = GK::integrate(g, a, b, 0, 0.0, &err, &l1);
  const double rounding = 64.0 * std::numeric_limits<double>::epsilon() * l1;
  if (err <= std::max(tol, rounding)) {
    error += err;
    return value;
  }
  if (depth >= max_depth) {
    throw NumericalError("coupling quadrature did not converge on [" + format_double(a) +
                             ", " + format_double(b) + "]",
                         err);
  }
  const double mid = 0.5 * (a + b);
  return adaptive_panel(f, k, a, mid, 0.5 * tol, depth + 1, max_depth, error) +
         adaptive_panel(f, k, mid, b, 0.5 * tol, depth + 1, max_depth, error);
}

using OouraCos = boost::math::quadrature::ooura_fourier_cos<long double>;
using OouraSin = boost::math::quadrature::ooura_fourier_sin<long double>;

// The rules adapt their starting level across calls, so each evaluation works
// on a copy of an unused prototype to keep results independent of call order.
const OouraCos &ooura_cos_prototype() {
  thread_local const OouraCos rule(1e-13L, 8);
  return rule;
}

const OouraSin &ooura_sin_prototype() {
  thread_local const OouraSin rule(1e-13L, 8);
  return rule;
}

// Integral of f(x) exp(i k x) over [b, inf) (direction +1) or (-inf, b]
// (direction -1).
template <class F>
Complex semi_infinite(const F &f, double k, double b, int direction, double tol,
                      double &error) {
  const long double kl = k;
  auto shifted = [&](long double u) {
    return static_cast<long double>(f(b + direction * static_cast<double>(u)));
  };
  OouraCos cos_rule = ooura_cos_prototype();
  OouraSin sin_rule = ooura_sin_prototype();
  const auto c = cos_rule.integrate(shifted, kl);
  const auto s = sin_rule.integrate(shifted, kl);
  auto abs_error = [](const std::pair<long double, long double> &r) {
    if (r.first == 0.0L) return 0.0;
    if (std::isnan(r.second)) return std::numeric_limits<double>::infinity();
    return static_cast<double>(std::abs(r.first) * r.second);
  };
  const double err = abs_error(c) + abs_error(s);
  if (!(err <= std::max(tol, 1e-13 * static_cast<double>(std::abs(c.first) + std::abs(s.first))))) {
    throw NumericalError("coupling tail integral did not converge (error " +
                             format_double(err) + ", tolerance " + format_double(tol) + ")",
                         err);
  }
  error += err;
  const Complex u(static_cast<double>(c.first),
                  direction * static_cast<double>(s.first));
  return std::polar(1.0, k * b) * u;
}

std::vector<double> breakpoints(const NearFieldModel &model, double y, double lo, double hi) {
  std::vector<double> pts{lo, hi};
  if (const auto *w = std::get_if<Wire>(&model)) {
    const double v = y - w->center.y;
    if (std::abs(v) < w->radius) {
      const double chord = std::sqrt(w->radius * w->radius - v * v);
      for (double p : {w->center.x - chord, w->center.x + chord}) {
        if (p > lo && p < hi) pts.push_back(p);
      }
    }
  }
  std::sort(pts.begin(), pts.end());
  return pts;
}

double model_center_x(const NearFieldModel &model) {
  if (const auto *w = std::get_if<Wire>(&model)) return w->center.x;
  if (const auto *g = std::get_if<GapResonator>(&model)) return g->center.x;
  return 0.0;
}

// Full-line integral of Phi0(x, y) exp(i k x) to absolute tolerance tol.
Estimate fourier_component(const NearFieldModel &model, const LaserParams &laser, double k,
                           double y, double half_width, double tol, int max_depth) {
  auto f = [&](double x) { return potential(model, laser, x, y); };
  const double cx = model_center_x(model);
  const double lo = cx - half_width;
  const double hi = cx + half_width;
  const double panel = units::pi / (4.0 * k);
  const std::vector<double> pts = breakpoints(model, y, lo, hi);

  const double inner_tol = 0.5 * tol;
  Estimate out;
  for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
    const double a = pts[s];
    const double b = pts[s + 1];
    const int n = std::max(1, static_cast<int>(std::ceil((b - a) / panel)));
    const double h = (b - a) / n;
    for (int i = 0; i < n; ++i) {
      const double pa = a + i * h;
      const double pb = (i + 1 == n) ? b : pa + h;
      out.value += adaptive_panel(f, k, pa, pb, inner_tol * (pb - pa) / (hi - lo), 0,
                                  max_depth, out.error);
    }
  }
  out.value += semi_infinite(f, k, hi, +1, 0.25 * tol, out.error);
  out.value += semi_infinite(f, k, lo, -1, 0.25 * tol, out.error);
  return out;
}

}  // namespace

CouplingValues coupling_integrals(const NearFieldModel &model, const LaserParams &laser,
                                  double v0, double y, const CouplingOptions &options) {
  if (!(v0 > 0.0)) throw DomainError("electron velocity must be positive");
  validate(model);
  if (const auto *stripe = std::get_if<UniformStripe>(&model)) {
    const bool inside = y >= stripe->y_min && y <= stripe->y_max;
    return {inside ? stripe->coupling : 0.0, 0.0};
  }
  const double k = laser.omega() / v0;
  const double prefactor = -units::electron_charge / (units::hbar * v0);
  const double half_width = options.inner_bound > 0.0
                                ? options.inner_bound
                                : std::max(40.0 * structure_scale(model), 10.0 / k);

  // Absolute tolerance first; tighten to the relative target only when the
  // achieved error estimate misses it.
  double achieved = 0.0;
  auto evaluate = [&](double tol_rad) {
    const Estimate c = fourier_component(model, laser, k, y, half_width, tol_rad / prefactor,
                                         options.max_depth);
    achieved = prefactor * c.error;
    // cos(kx + phi) and sin(kx + phi) components.
    const Complex rotated = c.value * std::polar(1.0, laser.phase);
    return CouplingValues{prefactor * rotated.real(), prefactor * rotated.imag()};
  };

  CouplingValues v = evaluate(options.abs_tolerance);
  const double target = options.rel_tolerance * std::max(std::abs(v.i1), std::abs(v.i2));
  if (achieved > target && target < options.abs_tolerance && target > 0.0) {
    v = evaluate(target);
  }
  return v;
}

CouplingProfile coupling_profile(const NearFieldModel &model, const LaserParams &laser,
                                 double v0, const Eigen::ArrayXd &y,
                                 const CouplingOptions &options) {
  CouplingProfile p;
  p.y = y;
  p.i1.resize(y.size());
  p.i2.resize(y.size());
  p.delta_k = laser.omega() / v0;
  for (Index j = 0; j < y.size(); ++j) {
    const CouplingValues v = coupling_integrals(model, laser, v0, y(j), options);
    p.i1(j) = v.i1;
    p.i2(j) = v.i2;
  }
  p.provenance = describe(model) + "; " + describe(laser) +
                 "; v0_nm_per_fs=" + format_double(v0) +
                 "; delta_k_per_nm=" + format_double(p.delta_k);
  return p;
}

double profile_spacing(const CouplingProfile &profile) {
  const Index n = profile.y.size();
  if (n < 2) throw ConfigError("coupling profile needs at least two samples");
  const double d = (profile.y(n - 1) - profile.y(0)) / static_cast<double>(n - 1);
  for (Index j = 1; j < n; ++j) {
    if (std::abs(profile.y(j) - profile.y(j - 1) - d) > 1e-9 * std::abs(d)) {
      throw ConfigError("coupling profile is not sampled on a uniform grid");
    }
  }
  return d;
}

Eigen::ArrayXcd profile_transform(const CouplingProfile &profile) {
  const double d = profile_spacing(profile);
  const Index n = profile.y.size();
  if (n % 2 != 0) throw ConfigError("profile transform needs an even sample count");
  return forward_transform_1d(profile.i1.cast<Complex>(), d, profile.y(n / 2));
}

void write_profile_csv(std::ostream &out, const CouplingProfile &profile) {
  out << "# " << profile.provenance << '\n';
  out << "y_nm,I1_rad,I2_rad\n";
  for (Index j = 0; j < profile.y.size(); ++j) {
    out << format_double(profile.y(j)) << ',' << format_double(profile.i1(j)) << ','
        << format_double(profile.i2(j)) << '\n';
  }
}

void write_profile_csv(const std::filesystem::path &path, const CouplingProfile &profile) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  write_profile_csv(out, profile);
}

}  // namespace nediff
