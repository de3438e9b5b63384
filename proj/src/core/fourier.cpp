#include "nediff/core/fourier.hpp"

#include "nediff/core/errors.hpp"
#include "nediff/core/units.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

namespace nediff {

namespace {

std::mutex &planner_mutex() {
  static std::mutex m;
  return m;
}

// Sign that turns a plain DFT into one with both indices centered at n/2.
double centering_sign(Index n) { return (n / 2) % 2 == 0 ? 1.0 : -1.0; }

double checker(Index i) { return (i % 2 == 0) ? 1.0 : -1.0; }

// Per-axis factors of the centered physical transform. `pre` multiplies the
// input samples and `post` the DFT output. Forward (sign = -1) maps position
// samples to momentum and carries the origin phase exp(-i k origin) on the
// output; backward carries exp(+i k origin) on the input.
struct AxisFactors {
  Eigen::ArrayXcd pre;
  Eigen::ArrayXcd post;
};

AxisFactors axis_factors(Index n, double spacing, double origin, int sign, double scale) {
  const double dk = 2.0 * units::pi / (static_cast<double>(n) * spacing);
  const double s = centering_sign(n);
  AxisFactors f{Eigen::ArrayXcd(n), Eigen::ArrayXcd(n)};
  for (Index i = 0; i < n; ++i) {
    const double k = static_cast<double>(i - n / 2) * dk;
    const Complex origin_phase = std::polar(1.0, sign * k * origin);
    if (sign < 0) {
      f.pre(i) = checker(i);
      f.post(i) = scale * s * checker(i) * origin_phase;
    } else {
      f.pre(i) = checker(i) * origin_phase;
      f.post(i) = scale * s * checker(i);
    }
  }
  return f;
}

ComplexField transform_2d(const ComplexField &in, const Grid2D &grid, int sign) {
  const Index ny = grid.ny();
  const Index nx = grid.nx();
  const double scale = sign < 0 ? grid.cell_area() / (2.0 * units::pi)
                                : grid.dk_area() / (2.0 * units::pi);
  const AxisFactors fx = axis_factors(nx, grid.dx(), grid.x0(), sign, scale);
  const AxisFactors fy = axis_factors(ny, grid.dy(), grid.y0(), sign, 1.0);

  ComplexField buf(ny, nx);
  for (Index j = 0; j < ny; ++j) {
    for (Index i = 0; i < nx; ++i) buf(j, i) = in(j, i) * (fx.pre(i) * fy.pre(j));
  }
  FftPlan plan(buf.data(), ny, nx, sign < 0 ? FftDirection::Forward : FftDirection::Backward);
  plan.execute();
  for (Index j = 0; j < ny; ++j) {
    for (Index i = 0; i < nx; ++i) buf(j, i) *= fx.post(i) * fy.post(j);
  }
  return buf;
}

Eigen::ArrayXcd transform_1d(const Eigen::ArrayXcd &in, double spacing, double origin,
                             int sign) {
  const Index n = in.size();
  const double dk = 2.0 * units::pi / (static_cast<double>(n) * spacing);
  const double scale = (sign < 0 ? spacing : dk) / std::sqrt(2.0 * units::pi);
  const AxisFactors f = axis_factors(n, spacing, origin, sign, scale);
  Eigen::ArrayXcd buf = in * f.pre;
  FftPlan plan(buf.data(), n, sign < 0 ? FftDirection::Forward : FftDirection::Backward);
  plan.execute();
  buf *= f.post;
  return buf;
}

}  // namespace

FftPlan::FftPlan(Complex *data, Index ny, Index nx, FftDirection direction) {
  auto *p = reinterpret_cast<fftw_complex *>(data);
  std::lock_guard<std::mutex> lock(planner_mutex());
  plan_ = fftw_plan_dft_2d(static_cast<int>(ny), static_cast<int>(nx), p, p,
                           direction == FftDirection::Forward ? FFTW_FORWARD : FFTW_BACKWARD,
                           FFTW_ESTIMATE);
  if (plan_ == nullptr) throw NumericalError("FFTW failed to create a 2D plan");
}

FftPlan::FftPlan(Complex *data, Index n, FftDirection direction) {
  auto *p = reinterpret_cast<fftw_complex *>(data);
  std::lock_guard<std::mutex> lock(planner_mutex());
  plan_ = fftw_plan_dft_1d(static_cast<int>(n), p, p,
                           direction == FftDirection::Forward ? FFTW_FORWARD : FFTW_BACKWARD,
                           FFTW_ESTIMATE);
  if (plan_ == nullptr) throw NumericalError("FFTW failed to create a 1D plan");
}

FftPlan FftPlan::rows(Complex *data, Index rows, Index length, FftDirection direction) {
  auto *p = reinterpret_cast<fftw_complex *>(data);
  const int n[1] = {static_cast<int>(length)};
  FftPlan plan;
  std::lock_guard<std::mutex> lock(planner_mutex());
  plan.plan_ = fftw_plan_many_dft(1, n, static_cast<int>(rows), p, nullptr, 1, n[0], p, nullptr,
                                  1, n[0],
                                  direction == FftDirection::Forward ? FFTW_FORWARD : FFTW_BACKWARD,
                                  FFTW_ESTIMATE);
  if (plan.plan_ == nullptr) throw NumericalError("FFTW failed to create a batched plan");
  return plan;
}

FftPlan::~FftPlan() {
  if (plan_ != nullptr) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  }
}

FftPlan::FftPlan(FftPlan &&other) noexcept : plan_(other.plan_) { other.plan_ = nullptr; }

FftPlan &FftPlan::operator=(FftPlan &&other) noexcept {
  std::swap(plan_, other.plan_);
  return *this;
}

void FftPlan::execute() const { fftw_execute(static_cast<fftw_plan>(plan_)); }

double MomentumSpectrum::norm() const {
  return std::sqrt(amplitudes.abs2().sum() * grid.dk_area());
}

ComplexField forward_transform(const ComplexField &field, const Grid2D &grid) {
  return transform_2d(field, grid, -1);
}

ComplexField inverse_transform(const ComplexField &spectrum, const Grid2D &grid) {
  return transform_2d(spectrum, grid, +1);
}

MomentumSpectrum to_momentum(const Wavepacket &psi) {
  return {psi.grid, forward_transform(psi.amplitudes, psi.grid), psi.t, psi.k0, psi.energy};
}

Wavepacket from_momentum(const MomentumSpectrum &spectrum) {
  return Wavepacket(spectrum.grid, inverse_transform(spectrum.amplitudes, spectrum.grid),
                    spectrum.t, spectrum.energy);
}

Eigen::ArrayXcd forward_transform_1d(const Eigen::ArrayXcd &samples, double spacing,
                                     double origin) {
  return transform_1d(samples, spacing, origin, -1);
}

Eigen::ArrayXcd inverse_transform_1d(const Eigen::ArrayXcd &spectrum, double spacing,
                                     double origin) {
  return transform_1d(spectrum, spacing, origin, +1);
}

Eigen::ArrayXd momentum_axis(Index n, double spacing) {
  const double dk = 2.0 * units::pi / (static_cast<double>(n) * spacing);
  Eigen::ArrayXd k(n);
  for (Index i = 0; i < n; ++i) k(i) = static_cast<double>(i - n / 2) * dk;
  return k;
}

}  // namespace nediff
