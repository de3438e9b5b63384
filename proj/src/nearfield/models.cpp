#include "nediff/nearfield/models.hpp"

#include "nediff/core/overloaded.hpp"

#include "nediff/core/errors.hpp"
#include "nediff/core/format.hpp"
#include "nediff/core/units.hpp"

#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <sstream>

namespace nediff {

double LaserParams::omega() const { return 2.0 * units::pi * units::c0 / wavelength; }

Wire Wire::from_permittivity(double radius, std::complex<double> eps, Point2 center) {
  if (eps == std::complex<double>(-1.0, 0.0)) {
    throw DomainError("permittivity -1 is a pole of the wire response");
  }
  return Wire{radius, std::abs((eps - 1.0) / (eps + 1.0)), center};
}

namespace {

double sigma_of(const GapResonator &gap) { return gap.smoothing_fwhm / units::fwhm_per_sigma; }

// Smoothed dipole kernel G(q) = (1 - exp(-q / 2 s^2)) / q and its derivative.
struct Kernel {
  double g;
  double dg;
};

Kernel smoothed_kernel(double q, double sigma) {
  const double c = 1.0 / (2.0 * sigma * sigma);
  const double a = q * c;
  if (a < 1e-4) {
    return {c * (1.0 - a / 2.0 + a * a / 6.0), c * c * (-0.5 + a / 3.0 - a * a / 8.0)};
  }
  const double h = -std::expm1(-a);
  const double dh = c * std::exp(-a);
  return {h / q, (dh * q - h) / (q * q)};
}

double unit_gap_potential(const GapResonator &gap, double x, double y) {
  const double sigma = sigma_of(gap);
  double phi = 0.0;
  for (double side : {-0.5, 0.5}) {
    const double u = y - gap.center.y - side * gap.separation;
    const double v = x - gap.center.x;
    phi += u * smoothed_kernel(u * u + v * v, sigma).g;
  }
  return phi;
}

FieldVector unit_gap_field(const GapResonator &gap, double x, double y) {
  const double sigma = sigma_of(gap);
  FieldVector e{0.0, 0.0};
  for (double side : {-0.5, 0.5}) {
    const double u = y - gap.center.y - side * gap.separation;
    const double v = x - gap.center.x;
    const Kernel k = smoothed_kernel(u * u + v * v, sigma);
    e.ey -= k.g + 2.0 * u * u * k.dg;
    e.ex -= 2.0 * u * v * k.dg;
  }
  return e;
}

double require_moment(const GapResonator &gap) {
  if (!gap.moment) {
    throw StateError("gap resonator used before calibrate_gap_amplitude");
  }
  return *gap.moment;
}

}  // namespace

void validate(const NearFieldModel &model) {
  std::visit(overloaded{
                 [](const Wire &w) {
                   if (!(w.radius > 0.0)) throw ConfigError("wire radius must be positive");
                   if (!(w.response >= 0.0)) throw ConfigError("wire response must be >= 0");
                 },
                 [](const GapResonator &g) {
                   if (!(g.separation >= 0.0)) throw ConfigError("gap separation must be >= 0");
                   if (!(g.smoothing_fwhm > 0.0)) throw ConfigError("gap smoothing must be positive");
                   if (!(g.peak_field > 0.0)) throw ConfigError("gap peak field must be positive");
                 },
                 [](const UniformStripe &s) {
                   if (!(s.y_max > s.y_min)) throw ConfigError("stripe needs y_max > y_min");
                 },
             },
             model);
}

std::string describe(const NearFieldModel &model) {
  std::ostringstream out;
  std::visit(overloaded{
                 [&](const Wire &w) {
                   out << "wire radius_nm=" << format_double(w.radius)
                       << " response=" << format_double(w.response)
                       << " center_nm=(" << format_double(w.center.x) << ","
                       << format_double(w.center.y) << ")";
                 },
                 [&](const GapResonator &g) {
                   out << "gap separation_nm=" << format_double(g.separation)
                       << " smoothing_fwhm_nm=" << format_double(g.smoothing_fwhm)
                       << " peak_field_v_per_nm=" << format_double(g.peak_field)
                       << " center_nm=(" << format_double(g.center.x) << ","
                       << format_double(g.center.y) << ")";
                   if (g.moment) out << " moment=" << format_double(*g.moment);
                 },
                 [&](const UniformStripe &s) {
                   out << "stripe coupling_rad=" << format_double(s.coupling)
                       << " y_nm=[" << format_double(s.y_min) << ","
                       << format_double(s.y_max) << "]";
                 },
             },
             model);
  return out.str();
}

std::string describe(const LaserParams &laser) {
  return "laser wavelength_nm=" + format_double(laser.wavelength) +
         " field_v_per_nm=" + format_double(laser.field_amplitude) +
         " phase_rad=" + format_double(laser.phase);
}

double wire_potential(const Wire &wire, double field_amplitude, double x, double y) {
  const double u = x - wire.center.x;
  const double v = y - wire.center.y;
  const double r2 = u * u + v * v;
  const double r2_wire = wire.radius * wire.radius;
  const double inside = field_amplitude * v * wire.response;
  return r2 < r2_wire ? inside : inside * r2_wire / r2;
}

double retardation_phase(std::complex<double> eps) {
  if (eps == std::complex<double>(-1.0, 0.0)) {
    throw DomainError("retardation phase has a pole at eps = -1");
  }
  return std::arg((eps - 1.0) / (eps + 1.0));
}

double gap_resonator_potential(const GapResonator &gap, double x, double y) {
  return require_moment(gap) * unit_gap_potential(gap, x, y);
}

FieldVector gap_resonator_field(const GapResonator &gap, double x, double y) {
  const double p = require_moment(gap);
  const FieldVector e = unit_gap_field(gap, x, y);
  return {p * e.ex, p * e.ey};
}

GapResonator calibrate_gap_amplitude(const GapResonator &gap) {
  if (!(gap.separation > 0.0)) {
    throw DomainError("gap resonator needs a nonzero dipole separation");
  }
  validate(gap);
  const double half = 0.5 * gap.separation;
  auto field = [&](double y) {
    return std::abs(unit_gap_field(gap, gap.center.x, gap.center.y + y).ey);
  };
  // Coarse scan then Brent refinement of the best bracket.
  const int samples = 2000;
  const double step = 2.0 * half / samples;
  int best = 0;
  double best_value = -1.0;
  for (int i = 0; i <= samples; ++i) {
    const double value = field(-half + i * step);
    if (value > best_value) {
      best_value = value;
      best = i;
    }
  }
  const double lo = std::max(-half, -half + (best - 1) * step);
  const double hi = std::min(half, -half + (best + 1) * step);
  const auto refined = boost::math::tools::brent_find_minima(
      [&](double y) { return -field(y); }, lo, hi, 50);
  const double peak = std::max(best_value, -refined.second);
  GapResonator out = gap;
  out.moment = gap.peak_field / peak;
  return out;
}

double potential(const NearFieldModel &model, const LaserParams &laser, double x, double y) {
  return std::visit(
      overloaded{
          [&](const Wire &w) { return wire_potential(w, laser.field_amplitude, x, y); },
          [&](const GapResonator &g) { return gap_resonator_potential(g, x, y); },
          [](const UniformStripe &) -> double {
            throw StateError("the uniform stripe model has no scalar potential");
          },
      },
      model);
}

void sample_potential(const NearFieldModel &model, const LaserParams &laser,
                      const Eigen::ArrayXd &x, const Eigen::ArrayXd &y,
                      Eigen::Ref<Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic,
                                              Eigen::RowMajor>> out,
                      bool x_major) {
  const Eigen::Index rows = x_major ? x.size() : y.size();
  const Eigen::Index cols = x_major ? y.size() : x.size();
  if (out.rows() != rows || out.cols() != cols) {
    throw ConfigError("potential buffer shape does not match the sample axes");
  }
  auto fill = [&](auto &&value) {
    if (x_major) {
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        for (Eigen::Index j = 0; j < y.size(); ++j) out(i, j) = value(i, j);
      }
    } else {
      for (Eigen::Index j = 0; j < y.size(); ++j) {
        for (Eigen::Index i = 0; i < x.size(); ++i) out(j, i) = value(i, j);
      }
    }
  };
  std::visit(
      overloaded{
          [&](const Wire &w) {
            const double r2_wire = w.radius * w.radius;
            const Eigen::ArrayXd u2 = (x - w.center.x).square();
            const Eigen::ArrayXd v = y - w.center.y;
            const double amplitude = laser.field_amplitude * w.response;
            fill([&](Eigen::Index i, Eigen::Index j) {
              const double r2 = u2(i) + v(j) * v(j);
              const double inside = amplitude * v(j);
              return r2 < r2_wire ? inside : inside * r2_wire / r2;
            });
          },
          [&](const GapResonator &g) {
            const double p = require_moment(g);
            const double sigma = sigma_of(g);
            const Eigen::ArrayXd v2 = (x - g.center.x).square();
            const Eigen::ArrayXd ua = y - g.center.y + 0.5 * g.separation;
            const Eigen::ArrayXd ub = y - g.center.y - 0.5 * g.separation;
            fill([&](Eigen::Index i, Eigen::Index j) {
              return p * (ua(j) * smoothed_kernel(ua(j) * ua(j) + v2(i), sigma).g +
                          ub(j) * smoothed_kernel(ub(j) * ub(j) + v2(i), sigma).g);
            });
          },
          [](const UniformStripe &) {
            throw StateError("the uniform stripe model has no scalar potential");
          },
      },
      model);
}

double max_abs_potential(const NearFieldModel &model, const LaserParams &laser) {
  if (const auto *w = std::get_if<Wire>(&model)) {
    return std::abs(laser.field_amplitude) * w->response * w->radius;
  }
  if (std::holds_alternative<UniformStripe>(model)) {
    throw StateError("the uniform stripe model has no scalar potential");
  }
  const auto &g = std::get<GapResonator>(model);
  const double half = 5.0 * structure_scale(model);
  const Eigen::ArrayXd x = Eigen::ArrayXd::LinSpaced(401, g.center.x - half, g.center.x + half);
  const Eigen::ArrayXd y = Eigen::ArrayXd::LinSpaced(401, g.center.y - half, g.center.y + half);
  Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> out(401, 401);
  sample_potential(model, laser, x, y, out);
  return out.abs().maxCoeff();
}

double structure_scale(const NearFieldModel &model) {
  return std::visit(overloaded{
                        [](const Wire &w) { return w.radius; },
                        [](const GapResonator &g) {
                          return std::max(g.separation, g.smoothing_fwhm);
                        },
                        [](const UniformStripe &) { return 0.0; },
                    },
                    model);
}

}  // namespace nediff
