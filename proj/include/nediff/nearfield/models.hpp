#ifndef NEDIFF_NEARFIELD_MODELS_HPP
#define NEDIFF_NEARFIELD_MODELS_HPP

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <string>
#include <variant>

namespace nediff {

/// Monochromatic y-polarized excitation.
struct LaserParams {
  double wavelength = 2000.0;     // nm
  double field_amplitude = 0.2;   // E_L, V/nm
  double phase = 0.0;             // phi_NF, rad

  /// 2 pi c0 / lambda [rad/fs].
  double omega() const;
  bool operator==(const LaserParams &) const = default;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point2 &) const = default;
};

/// Thin dielectric wire along z. `response` is |(eps - 1)/(eps + 1)|.
struct Wire {
  double radius = 10.0;
  double response = 0.5;
  Point2 center{};

  static Wire from_permittivity(double radius, std::complex<double> eps, Point2 center = {});
  bool operator==(const Wire &) const = default;
};

/// Pair of y-oriented 2D dipoles at center +- (0, s/2), each smoothed by an
/// isotropic Gaussian of FWHM w. The common moment is fixed by calibration so
/// that the peak |E_y| inside the gap equals `peak_field`.
struct GapResonator {
  double separation = 23.0;
  double smoothing_fwhm = 13.0;
  double peak_field = 0.5;
  Point2 center{};
  std::optional<double> moment;  // V nm, set by calibrate_gap_amplitude

  bool operator==(const GapResonator &) const = default;
};

/// Synthetic model: I1 = coupling on y_min <= y <= y_max and zero elsewhere,
/// I2 = 0. It has no potential and is usable with the analytic engine only.
struct UniformStripe {
  double coupling = 1.0;  // rad
  double y_min = -1e300;
  double y_max = 1e300;

  bool operator==(const UniformStripe &) const = default;
};

using NearFieldModel = std::variant<Wire, GapResonator, UniformStripe>;

/// Throws ConfigError on nonphysical geometry.
void validate(const NearFieldModel &model);
std::string describe(const NearFieldModel &model);
std::string describe(const LaserParams &laser);

/// Quasi-static wire potential Phi0 [V].
double wire_potential(const Wire &wire, double field_amplitude, double x, double y);

/// arg((eps - 1) / (eps + 1)).
double retardation_phase(std::complex<double> eps);

double gap_resonator_potential(const GapResonator &gap, double x, double y);

struct FieldVector {
  double ex;
  double ey;
};
/// -grad Phi0 of the calibrated resonator [V/nm].
FieldVector gap_resonator_field(const GapResonator &gap, double x, double y);

/// Returns a copy with the dipole moment set so the in-gap peak |E_y| on the
/// symmetry axis equals peak_field.
GapResonator calibrate_gap_amplitude(const GapResonator &gap);

/// Phi0(x, y) of any model with a potential (Wire uses laser.field_amplitude).
double potential(const NearFieldModel &model, const LaserParams &laser, double x, double y);

/// Phi0 on the tensor grid (x_i, y_j): out(j, i) = Phi0(x(i), y(j)), or
/// out(i, j) with `x_major`.
void sample_potential(const NearFieldModel &model, const LaserParams &laser,
                      const Eigen::ArrayXd &x, const Eigen::ArrayXd &y,
                      Eigen::Ref<Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic,
                                              Eigen::RowMajor>> out,
                      bool x_major = false);

/// Largest |Phi0| [V] the model reaches (closed form for the wire, a dense scan
/// around the structure otherwise).
double max_abs_potential(const NearFieldModel &model, const LaserParams &laser);

/// Length scale of the structure (wire radius, gap separation or smoothing).
double structure_scale(const NearFieldModel &model);

}  // namespace nediff

#endif  // NEDIFF_NEARFIELD_MODELS_HPP
