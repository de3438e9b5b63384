#ifndef NEDIFF_CORE_FOURIER_HPP
#define NEDIFF_CORE_FOURIER_HPP

#include "nediff/core/grid.hpp"
#include "nediff/core/wavepacket.hpp"

#include <memory>

namespace nediff {

enum class FftDirection { Forward, Backward };

/// In-place FFTW plan bound to one buffer. Planning uses FFTW_ESTIMATE so
/// results are bit-reproducible run to run. Planner calls are serialized.
class FftPlan {
 public:
  FftPlan(Complex *data, Index ny, Index nx, FftDirection direction);
  FftPlan(Complex *data, Index n, FftDirection direction);
  /// Batch of `rows` contiguous 1D transforms of length `length` each.
  static FftPlan rows(Complex *data, Index rows, Index length, FftDirection direction);
  ~FftPlan();

  FftPlan(const FftPlan &) = delete;
  FftPlan &operator=(const FftPlan &) = delete;
  FftPlan(FftPlan &&other) noexcept;
  FftPlan &operator=(FftPlan &&other) noexcept;

  /// Unnormalized transform of the bound buffer.
  void execute() const;

 private:
  FftPlan() = default;
  void *plan_ = nullptr;
};

/// Momentum amplitudes on the centered k-grid of `grid`. Column i sits at
/// k_x = k0 + grid.kx(i); row j at k_y = grid.ky(j).
///
/// Normalization follows the continuous transform
///   psi~(k) = (1 / 2 pi) sum psi(r) exp(-i k.r) dx dy,
/// equivalently a unitary DFT rescaled by sqrt(dx dy / dkx dky), so that
/// sum |psi~|^2 dkx dky = sum |psi|^2 dx dy.
struct MomentumSpectrum {
  Grid2D grid;
  ComplexField amplitudes;
  double t = 0.0;
  double k0 = 0.0;
  double energy = 0.0;

  double norm() const;
  double kx(Index i) const { return k0 + grid.kx(i); }
  double ky(Index j) const { return grid.ky(j); }
};

MomentumSpectrum to_momentum(const Wavepacket &psi);
Wavepacket from_momentum(const MomentumSpectrum &spectrum);

/// Centered transform of a field sampled on `grid` (no carrier bookkeeping).
ComplexField forward_transform(const ComplexField &field, const Grid2D &grid);
ComplexField inverse_transform(const ComplexField &spectrum, const Grid2D &grid);

/// 1D versions over a uniform axis with n points, spacing d and origin at index n/2.
Eigen::ArrayXcd forward_transform_1d(const Eigen::ArrayXcd &samples, double spacing,
                                     double origin = 0.0);
Eigen::ArrayXcd inverse_transform_1d(const Eigen::ArrayXcd &spectrum, double spacing,
                                     double origin = 0.0);

/// Centered momentum axis for n samples of spacing d.
Eigen::ArrayXd momentum_axis(Index n, double spacing);

}  // namespace nediff

#endif  // NEDIFF_CORE_FOURIER_HPP
