#ifndef NEDIFF_NEARFIELD_COUPLING_HPP
#define NEDIFF_NEARFIELD_COUPLING_HPP

#include "nediff/nearfield/models.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <iosfwd>
#include <string>

namespace nediff {

struct CouplingOptions {
  double abs_tolerance = 1e-10;  // rad
  double rel_tolerance = 1e-10;
  /// Half-width X of the panel-integrated interval; beyond it the tails
  /// [X, inf) are done with a Fourier-integral rule. 0 selects
  /// max(40 * structure scale, 10 / dk).
  double inner_bound = 0.0;
  int max_depth = 30;
};

struct CouplingValues {
  double i1;
  double i2;
};

/// I1, I2 at one transverse position for an electron of velocity v0 [nm/fs].
CouplingValues coupling_integrals(const NearFieldModel &model, const LaserParams &laser,
                                  double v0, double y, const CouplingOptions &options = {});

struct CouplingProfile {
  Eigen::ArrayXd y;
  Eigen::ArrayXd i1;
  Eigen::ArrayXd i2;
  double delta_k = 0.0;  // omega / v0
  std::string provenance;
};

CouplingProfile coupling_profile(const NearFieldModel &model, const LaserParams &laser,
                                 double v0, const Eigen::ArrayXd &y,
                                 const CouplingOptions &options = {});

/// Centered transform of I1(y) on the profile's (uniform, even-length) y-grid.
Eigen::ArrayXcd profile_transform(const CouplingProfile &profile);

/// Uniform spacing of the profile y-axis; ConfigError if it is not uniform.
double profile_spacing(const CouplingProfile &profile);

void write_profile_csv(std::ostream &out, const CouplingProfile &profile);
void write_profile_csv(const std::filesystem::path &path, const CouplingProfile &profile);

}  // namespace nediff

#endif  // NEDIFF_NEARFIELD_COUPLING_HPP
