#ifndef NEDIFF_CORE_GRID_HPP
#define NEDIFF_CORE_GRID_HPP

#include <Eigen/Dense>

#include <complex>

namespace nediff {

using Index = Eigen::Index;
using Complex = std::complex<double>;

/// Dense 2D field stored row-major with rows along y and columns along x, so
/// element (j, i) sits at (x_i, y_j) and memory runs over x fastest.
template <typename Scalar>
using Field = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using ComplexField = Field<Complex>;
using RealField = Field<double>;

/// Uniform cell-centered grid. Index n/2 sits at the grid origin (x0, y0), and
/// the momentum axis is centered the same way: k_i = (i - n/2) * 2 pi / (n d).
class Grid2D {
 public:
  Grid2D(Index nx, Index ny, double dx, double dy, double x0 = 0.0, double y0 = 0.0);

  Index nx() const { return nx_; }
  Index ny() const { return ny_; }
  Index size() const { return nx_ * ny_; }
  double dx() const { return dx_; }
  double dy() const { return dy_; }
  double x0() const { return x0_; }
  double y0() const { return y0_; }

  double extent_x() const { return static_cast<double>(nx_) * dx_; }
  double extent_y() const { return static_cast<double>(ny_) * dy_; }
  double cell_area() const { return dx_ * dy_; }

  double x(Index i) const { return x0_ + static_cast<double>(i - nx_ / 2) * dx_; }
  double y(Index j) const { return y0_ + static_cast<double>(j - ny_ / 2) * dy_; }

  double dkx() const;
  double dky() const;
  /// Momentum coordinates relative to the carrier.
  double kx(Index i) const { return static_cast<double>(i - nx_ / 2) * dkx(); }
  double ky(Index j) const { return static_cast<double>(j - ny_ / 2) * dky(); }
  double dk_area() const { return dkx() * dky(); }

  Eigen::ArrayXd x_axis() const;
  Eigen::ArrayXd y_axis() const;
  Eigen::ArrayXd kx_axis() const;
  Eigen::ArrayXd ky_axis() const;

  bool operator==(const Grid2D &other) const = default;

 private:
  Index nx_;
  Index ny_;
  double dx_;
  double dy_;
  double x0_;
  double y0_;
};

bool is_power_of_two(Index n);

}  // namespace nediff

#endif  // NEDIFF_CORE_GRID_HPP
