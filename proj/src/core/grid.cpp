#include "nediff/core/grid.hpp"

#include "nediff/core/errors.hpp"
#include "nediff/core/units.hpp"

#include <string>

namespace nediff {

bool is_power_of_two(Index n) { return n > 0 && (n & (n - 1)) == 0; }

Grid2D::Grid2D(Index nx, Index ny, double dx, double dy, double x0, double y0)
    : nx_(nx), ny_(ny), dx_(dx), dy_(dy), x0_(x0), y0_(y0) {
  if (!is_power_of_two(nx) || !is_power_of_two(ny) || nx < 2 || ny < 2) {
    throw ConfigError("grid dimensions must be powers of two >= 2, got " +
                      std::to_string(nx) + "x" + std::to_string(ny));
  }
  if (!(dx > 0.0) || !(dy > 0.0)) {
    throw ConfigError("grid spacings must be positive");
  }
}

double Grid2D::dkx() const { return 2.0 * units::pi / extent_x(); }
double Grid2D::dky() const { return 2.0 * units::pi / extent_y(); }

Eigen::ArrayXd Grid2D::x_axis() const {
  Eigen::ArrayXd a(nx_);
  for (Index i = 0; i < nx_; ++i) a(i) = x(i);
  return a;
}

Eigen::ArrayXd Grid2D::y_axis() const {
  Eigen::ArrayXd a(ny_);
  for (Index j = 0; j < ny_; ++j) a(j) = y(j);
  return a;
}

Eigen::ArrayXd Grid2D::kx_axis() const {
  Eigen::ArrayXd a(nx_);
  for (Index i = 0; i < nx_; ++i) a(i) = kx(i);
  return a;
}

Eigen::ArrayXd Grid2D::ky_axis() const {
  Eigen::ArrayXd a(ny_);
  for (Index j = 0; j < ny_; ++j) a(j) = ky(j);
  return a;
}

}  // namespace nediff
