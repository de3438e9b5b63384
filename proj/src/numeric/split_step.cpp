#include "nediff/numeric/split_step.hpp"

#include "nediff/core/errors.hpp"
#include "nediff/core/format.hpp"
#include "nediff/core/fourier.hpp"
#include "nediff/core/raw_grid.hpp"
#include "nediff/core/units.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <string>

namespace nediff {

namespace {

constexpr double kSafety = 0.5;
constexpr double kPotentialPhase = 0.1;
constexpr double kKineticPhase = 0.5;

double kinetic_rate(const Grid2D &grid) {
  const double kmax = units::pi / std::min(grid.dx(), grid.dy());
  return units::hbar * kmax * kmax / (2.0 * units::electron_mass);
}

double potential_rate(const EvolutionParams &p) {
  return max_abs_potential(p.model, p.laser) / units::hbar;
}

// Native FFT frequency of index m for n samples.
double native_k(Index m, Index n, double dk) {
  return static_cast<double>(m < n / 2 ? m : m - n) * dk;
}

// Integral of A_y(t) = -(E_L / w) sin(w t) over [ta, tb].
double vector_potential_integral(const LaserParams &laser, double ta, double tb) {
  const double w = laser.omega();
  return laser.field_amplitude / (w * w) * (std::cos(w * tb) - std::cos(w * ta));
}

// exp(i theta) for the small per-step potential phases (|theta| <= 0.1 by the
// step bound); the truncation error is below 1e-20 there.
inline void rotate(Complex &z, double theta) {
  const double t2 = theta * theta;
  const double c =
      1.0 - t2 / 2.0 * (1.0 - t2 / 12.0 * (1.0 - t2 / 30.0 * (1.0 - t2 / 56.0 * (1.0 - t2 / 90.0))));
  const double s =
      theta *
      (1.0 - t2 / 6.0 * (1.0 - t2 / 20.0 * (1.0 - t2 / 42.0 * (1.0 - t2 / 72.0 * (1.0 - t2 / 110.0)))));
  z = Complex(z.real() * c - z.imag() * s, z.real() * s + z.imag() * c);
}

void transpose(const ComplexField &from, ComplexField &to) {
  constexpr Index tile = 32;
  const Index rows = from.rows();
  const Index cols = from.cols();
  for (Index j0 = 0; j0 < rows; j0 += tile) {
    for (Index i0 = 0; i0 < cols; i0 += tile) {
      const Index j1 = std::min(j0 + tile, rows);
      const Index i1 = std::min(i0 + tile, cols);
      for (Index i = i0; i < i1; ++i) {
        for (Index j = j0; j < j1; ++j) to(i, j) = from(j, i);
      }
    }
  }
}

// The state alternates between two layouts: rows along y (x contiguous) and
// rows along x (y contiguous). Each kinetic step transforms the contiguous
// axis, transposes, then transforms the other one, so only row transforms run.
class Stepper {
 public:
  Stepper(const Wavepacket &psi0, const EvolutionParams &p)
      : grid_(psi0.grid),
        p_(p),
        v0_(psi0.velocity()),
        y_major_(psi0.amplitudes),
        x_major_(grid_.nx(), grid_.ny()),
        potential_(grid_.ny(), grid_.nx()),
        potential_t_(grid_.nx(), grid_.ny()),
        fx_(FftPlan::rows(y_major_.data(), grid_.ny(), grid_.nx(), FftDirection::Forward)),
        bx_(FftPlan::rows(y_major_.data(), grid_.ny(), grid_.nx(), FftDirection::Backward)),
        fy_(FftPlan::rows(x_major_.data(), grid_.nx(), grid_.ny(), FftDirection::Forward)),
        by_(FftPlan::rows(x_major_.data(), grid_.nx(), grid_.ny(), FftDirection::Backward)),
        x_(grid_.x_axis()),
        y_(grid_.y_axis()),
        kx_(grid_.nx()),
        ky_(grid_.ny()),
        px_(grid_.nx()),
        py_(grid_.ny()) {
    for (Index i = 0; i < grid_.nx(); ++i) kx_(i) = native_k(i, grid_.nx(), grid_.dkx());
    for (Index j = 0; j < grid_.ny(); ++j) ky_(j) = native_k(j, grid_.ny(), grid_.dky());
  }

  // Kinetic (and vector-potential) propagation over [ta, tb]; flips the layout.
  void kinetic(double ta, double tb) {
    const double c = units::hbar * (tb - ta) / (2.0 * units::electron_mass);
    const double a_int =
        p_.vector_potential ? vector_potential_integral(p_.laser, ta, tb) : 0.0;
    const double a_coef = units::electron_charge / units::electron_mass * a_int;
    const double inv_nx = 1.0 / static_cast<double>(grid_.nx());
    const double inv_ny = 1.0 / static_cast<double>(grid_.ny());
    for (Index i = 0; i < grid_.nx(); ++i) px_(i) = inv_nx * std::polar(1.0, -c * kx_(i) * kx_(i));
    for (Index j = 0; j < grid_.ny(); ++j) {
      py_(j) = inv_ny * std::polar(1.0, -c * ky_(j) * ky_(j) + a_coef * ky_(j));
    }
    if (!transposed_) {
      along_x();
      transpose(y_major_, x_major_);
      along_y();
    } else {
      along_y();
      transpose(x_major_, y_major_);
      along_x();
    }
    transposed_ = !transposed_;
  }

  // Scalar-potential kick exp(-i q Phi dt / hbar) with Phi taken at time t.
  void potential(double t, double dt) {
    const double scale = -units::electron_charge *
                         std::cos(p_.laser.omega() * t + p_.laser.phase) * dt / units::hbar;
    RealField &pot = transposed_ ? potential_t_ : potential_;
    ComplexField &buffer = transposed_ ? x_major_ : y_major_;
    sample_potential(p_.model, p_.laser, x_ + v0_ * t, y_, pot, transposed_);
    Complex *z = buffer.data();
    const double *v = pot.data();
    const Index n = buffer.size();
    for (Index k = 0; k < n; ++k) rotate(z[k], scale * v[k]);
  }

  Wavepacket state(double t, double energy) {
    if (transposed_) {
      ComplexField out(grid_.ny(), grid_.nx());
      transpose(x_major_, out);
      return Wavepacket(grid_, std::move(out), t, energy);
    }
    return Wavepacket(grid_, y_major_, t, energy);
  }

 private:
  void along_x() {
    fx_.execute();
    for (Index j = 0; j < grid_.ny(); ++j) y_major_.row(j) *= px_.transpose();
    bx_.execute();
  }

  void along_y() {
    fy_.execute();
    for (Index i = 0; i < grid_.nx(); ++i) x_major_.row(i) *= py_.transpose();
    by_.execute();
  }

  Grid2D grid_;
  EvolutionParams p_;
  double v0_;
  bool transposed_ = false;
  ComplexField y_major_;
  ComplexField x_major_;
  RealField potential_;
  RealField potential_t_;
  FftPlan fx_;
  FftPlan bx_;
  FftPlan fy_;
  FftPlan by_;
  Eigen::ArrayXd x_;
  Eigen::ArrayXd y_;
  Eigen::ArrayXd kx_;
  Eigen::ArrayXd ky_;
  Eigen::ArrayXcd px_;
  Eigen::ArrayXcd py_;
};

}  // namespace

EvolutionParams choose_steps(const EvolutionParams &params, const Grid2D &grid) {
  EvolutionParams p = params;
  const double window = p.t_end - p.t_start;
  const double kin = kinetic_rate(grid);
  const double pot = potential_rate(p);
  double limit = kKineticPhase / kin;
  if (pot > 0.0) limit = std::min(limit, kPotentialPhase / pot);
  if (p.dt != 0.0) {
    if (std::abs(p.dt) > limit * (1.0 + 1e-12)) {
      throw ConfigError("time step " + format_double(p.dt) + " fs exceeds the stability bound " +
                        format_double(limit) + " fs");
    }
    const double n = window / p.dt;
    if (!(n >= 1.0 - 1e-9) || std::abs(n - std::round(n)) > 1e-6) {
      throw ConfigError("time step " + format_double(p.dt) +
                        " fs does not divide the interaction window");
    }
    p.steps = std::lround(n);
    p.dt = window / static_cast<double>(p.steps);
    return p;
  }
  const double dt_max = kSafety * limit;
  if (std::abs(window) < dt_max) {
    throw ConfigError("interaction window " + format_double(window) +
                      " fs is shorter than one time step (" + format_double(dt_max) + " fs)");
  }
  p.steps = static_cast<long>(std::ceil(std::abs(window) / dt_max - 1e-12));
  p.dt = window / static_cast<double>(p.steps);
  return p;
}

TraceSample measure_state(const Wavepacket &psi, long step) {
  const Grid2D &g = psi.grid;
  const RealField rho = psi.amplitudes.abs2();
  const double total = rho.sum();
  const double norm2 = total * g.cell_area();
  const Eigen::ArrayXd mx = rho.colwise().sum().transpose();
  double mean_x = 0.0;
  for (Index i = 0; i < g.nx(); ++i) mean_x += mx(i) * g.x(i);
  mean_x = mean_x / total + psi.velocity() * psi.t;

  const MomentumSpectrum spec = to_momentum(psi);
  const RealField sigma = spec.amplitudes.abs2();
  const double stotal = sigma.sum();
  const Eigen::ArrayXd sx = sigma.colwise().sum().transpose();
  const Eigen::ArrayXd sy = sigma.rowwise().sum();
  double kx = 0.0;
  double kx2 = 0.0;
  double ky = 0.0;
  double ky2 = 0.0;
  for (Index i = 0; i < g.nx(); ++i) {
    const double k = spec.kx(i);
    kx += sx(i) * k;
    kx2 += sx(i) * k * k;
  }
  for (Index j = 0; j < g.ny(); ++j) {
    const double k = spec.ky(j);
    ky += sy(j) * k;
    ky2 += sy(j) * k * k;
  }
  const double energy =
      units::hbar * units::hbar * (kx2 + ky2) / stotal / (2.0 * units::electron_mass);
  return {step, psi.t, std::sqrt(norm2), mean_x, kx / stotal, ky / stotal, energy};
}

EvolutionResult split_step_evolve(const Wavepacket &psi0, const EvolutionParams &params) {
  if (std::holds_alternative<UniformStripe>(params.model)) {
    throw ConfigError("the numeric engine needs a model with a scalar potential");
  }
  validate(params.model);
  const EvolutionParams p = choose_steps(params, psi0.grid);
  if (std::abs(psi0.t - p.t_start) > 1e-9 * std::max(1.0, std::abs(p.t_start))) {
    throw ConfigError("initial state time " + format_double(psi0.t) +
                      " fs does not match t_start " + format_double(p.t_start) + " fs");
  }
  if (!p.snapshot_dir.empty()) std::filesystem::create_directories(p.snapshot_dir);

  Stepper stepper(psi0, p);
  EvolutionTrace trace;
  trace.stride = p.snapshot_stride;
  auto time_of = [&](long s) {
    return s == p.steps ? p.t_end : p.t_start + static_cast<double>(s) * p.dt;
  };
  auto sync = [&](long s) {
    Wavepacket psi = stepper.state(time_of(s), psi0.energy);
    const TraceSample sample = measure_state(psi, s);
    trace.samples.push_back(sample);
    if (!std::isfinite(sample.norm)) {
      throw NumericalError("non-finite wavefunction at step " + std::to_string(s) + " (t = " +
                           format_double(sample.t) + " fs)");
    }
    const double edge = edge_weight(psi);
    if (edge > p.edge_tolerance) {
      throw ConfigError("wavepacket reached the grid border at t = " + format_double(sample.t) +
                        " fs (edge weight " + format_double(edge) + ")");
    }
    if (!p.snapshot_dir.empty() && p.snapshot_stride > 0) {
      write_raw_grid(p.snapshot_dir / ("snapshot_" + std::to_string(s) + ".grid"), psi);
    }
    return psi;
  };
  auto is_sync = [&](long s) {
    return s == p.steps || (p.snapshot_stride > 0 && s % p.snapshot_stride == 0);
  };

  sync(0);
  const double half = 0.5 * p.dt;
  stepper.kinetic(time_of(0), time_of(0) + half);
  for (long s = 0; s < p.steps; ++s) {
    const double mid = time_of(s) + half;
    stepper.potential(mid, p.dt);
    if (is_sync(s + 1)) {
      stepper.kinetic(mid, time_of(s + 1));
      sync(s + 1);
      if (s + 1 < p.steps) stepper.kinetic(time_of(s + 1), time_of(s + 1) + half);
    } else {
      stepper.kinetic(mid, mid + p.dt);
    }
  }
  return {stepper.state(p.t_end, psi0.energy), std::move(trace)};
}

void write_trace_csv(std::ostream &out, const EvolutionTrace &trace) {
  out << "t_fs,norm,mean_x_nm,mean_kx_per_nm,mean_ky_per_nm,energy_ev\n";
  for (const TraceSample &s : trace.samples) {
    out << format_double(s.t) << ',' << format_double(s.norm) << ',' << format_double(s.mean_x)
        << ',' << format_double(s.mean_kx) << ',' << format_double(s.mean_ky) << ','
        << format_double(s.energy) << '\n';
  }
}

void write_trace_csv(const std::filesystem::path &path, const EvolutionTrace &trace) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  write_trace_csv(out, trace);
}

}  // namespace nediff
