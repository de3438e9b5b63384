#include <doctest.h>

#include "nediff/core/errors.hpp"
#include "nediff/core/fourier.hpp"
#include "nediff/core/units.hpp"
#include "nediff/core/wavepacket.hpp"
#include "nediff/nearfield/coupling.hpp"
#include "nediff/nearfield/models.hpp"

#include <cmath>
#include <sstream>

using namespace nediff;

namespace {

LaserParams fig1_laser() { return LaserParams{2000.0, 0.2, 0.0}; }

// Closed form of the exterior-wire coupling integral, from
// int cos(k x) / (x^2 + y^2) dx = (pi / |y|) exp(-k |y|).
double wire_oracle(double field, double beta, double radius, double v0, double omega,
                   double y) {
  const double e_charge = 1.0;
  const double dk = omega / v0;
  const double amp = e_charge * field * beta * radius * radius * units::pi /
                     (units::hbar * v0);
  return (y > 0 ? 1.0 : -1.0) * amp * std::exp(-dk * std::abs(y));
}

double dphi_dy(const NearFieldModel &m, const LaserParams &l, double x, double y, double h) {
  return (potential(m, l, x, y + h) - potential(m, l, x, y - h)) / (2.0 * h);
}

}  // namespace

TEST_CASE("laser angular frequency") {
  const LaserParams l = fig1_laser();
  CHECK(l.omega() * l.wavelength == doctest::Approx(2.0 * units::pi * units::c0).epsilon(1e-12));
  CHECK(l.omega() == doctest::Approx(0.94182).epsilon(1e-4));
}

TEST_CASE("wire potential symmetries and surface enhancement") {
  const Wire w{10.0, 0.5, {}};
  for (double x : {-30.0, -5.0, 0.0, 3.0, 17.0}) {
    CHECK(wire_potential(w, 0.2, x, 0.0) == 0.0);
    for (double y : {-12.0, -4.0, 2.5, 9.9, 25.0}) {
      CHECK(wire_potential(w, 0.2, x, y) == wire_potential(w, 0.2, -x, y));
      CHECK(wire_potential(w, 0.2, x, y) == -wire_potential(w, 0.2, x, -y));
    }
  }
  // Continuity at r = R.
  CHECK(wire_potential(w, 0.2, 6.0, 8.0 - 1e-12) ==
        doctest::Approx(wire_potential(w, 0.2, 6.0, 8.0 + 1e-12)).epsilon(1e-10));

  // Induced field just outside the pole, -dPhi/dy = E_L beta; total 1 + beta.
  const LaserParams l{2000.0, 1.0, 0.0};
  const NearFieldModel m = w;
  const double h = 1e-5;
  const double induced = -dphi_dy(m, l, 0.0, 10.0 + 2 * h, h);
  CHECK(induced == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(1.0 + induced == doctest::Approx(1.5).epsilon(1e-4));
}

TEST_CASE("wire from permittivity and retardation phase") {
  const Wire w = Wire::from_permittivity(10.0, {3.0, 0.0});
  CHECK(w.response == doctest::Approx(0.5));
  CHECK(retardation_phase({3.0, 0.0}) == 0.0);
  CHECK(retardation_phase({1.0, 0.0}) == 0.0);
  const std::complex<double> i(0.0, 1.0);
  CHECK(retardation_phase(i) == doctest::Approx(std::arg((i - 1.0) / (i + 1.0))));
  CHECK(retardation_phase(i) == doctest::Approx(units::pi / 2.0));
  CHECK_THROWS_AS(retardation_phase({-1.0, 0.0}), DomainError);
  CHECK_THROWS_AS(Wire::from_permittivity(10.0, {-1.0, 0.0}), DomainError);
}

TEST_CASE("gap resonator calibration and symmetry") {
  const GapResonator raw{23.0, 13.0, 0.5, {}, std::nullopt};
  CHECK_THROWS_AS(gap_resonator_potential(raw, 1.0, 1.0), StateError);
  CHECK_THROWS_AS(calibrate_gap_amplitude(GapResonator{0.0, 13.0, 0.5, {}, std::nullopt}),
                  DomainError);

  const GapResonator gap = calibrate_gap_amplitude(raw);
  REQUIRE(gap.moment.has_value());
  for (double x : {-40.0, 0.0, 7.0}) {
    CHECK(gap_resonator_potential(gap, x, 0.0) == 0.0);
    for (double y : {-30.0, -3.0, 5.0, 11.5}) {
      CHECK(gap_resonator_potential(gap, x, y) == gap_resonator_potential(gap, -x, y));
      CHECK(gap_resonator_potential(gap, x, y) == -gap_resonator_potential(gap, x, -y));
    }
  }

  // Peak in-gap |E_y| from finite differences of the potential, on a fine scan.
  const NearFieldModel m = gap;
  const LaserParams l{};
  double peak = 0.0;
  for (int i = 0; i <= 23000; ++i) {
    const double y = -11.5 + 0.001 * i;
    peak = std::max(peak, std::abs(dphi_dy(m, l, 0.0, y, 1e-5)));
  }
  CHECK(peak == doctest::Approx(0.5).epsilon(1e-6));
  // Analytic field against finite differences.
  const FieldVector e = gap_resonator_field(gap, 3.0, 4.0);
  CHECK(e.ey == doctest::Approx(-dphi_dy(m, l, 3.0, 4.0, 1e-5)).epsilon(1e-7));
  const double dx = (gap_resonator_potential(gap, 3.0 + 1e-5, 4.0) -
                     gap_resonator_potential(gap, 3.0 - 1e-5, 4.0)) / 2e-5;
  CHECK(e.ex == doctest::Approx(-dx).epsilon(1e-7));

  // Linearity in the requested peak field.
  GapResonator doubled_raw = raw;
  doubled_raw.peak_field = 1.0;
  const GapResonator doubled = calibrate_gap_amplitude(doubled_raw);
  for (double y : {-20.0, 1.0, 9.0}) {
    CHECK(gap_resonator_potential(doubled, 2.0, y) ==
          doctest::Approx(2.0 * gap_resonator_potential(gap, 2.0, y)).epsilon(1e-12));
  }
  CHECK(0.5 / 20.0 < 0.03);

  // Far field: monotone decay on a ray, approaching the bare pair 2 p / y.
  double prev = std::abs(gap_resonator_potential(gap, 0.0, 3.0 * 23.0));
  for (double y = 3.0 * 23.0 + 1.0; y < 2000.0; y += 7.0) {
    const double v = std::abs(gap_resonator_potential(gap, 0.0, y));
    CHECK(v < prev);
    prev = v;
  }
  const double far = 1000.0;
  const double pair = *gap.moment * (1.0 / (far - 11.5) + 1.0 / (far + 11.5));
  CHECK(gap_resonator_potential(gap, 0.0, far) == doctest::Approx(pair).epsilon(1e-12));
}

TEST_CASE("wire coupling integrals against the closed form") {
  const Wire w{10.0, 0.5, {}};
  const LaserParams l = fig1_laser();
  const Kinematics kin = electron_kinematics(100.0);
  CHECK(l.omega() / kin.v0 == doctest::Approx(0.159).epsilon(2e-3));

  const CouplingValues zero = coupling_integrals(w, l, kin.v0, 0.0);
  CHECK(zero.i1 == 0.0);
  CHECK(zero.i2 == 0.0);

  double worst = 0.0;
  for (double ay = 10.5; ay <= 100.0; ay += 0.5) {
    for (double sign : {-1.0, 1.0}) {
      const double y = sign * ay;
      const CouplingValues v = coupling_integrals(w, l, kin.v0, y);
      const double expect = wire_oracle(0.2, 0.5, 10.0, kin.v0, l.omega(), y);
      worst = std::max(worst, std::abs(v.i1 - expect) / std::abs(expect));
      CHECK(std::abs(v.i2) <= 1e-10);
    }
  }
  MESSAGE("worst relative error " << worst);
  CHECK(worst <= 1e-8);
}

TEST_CASE("coupling profile: antisymmetry, linearity, interior") {
  const Wire w{10.0, 0.5, {}};
  const LaserParams l = fig1_laser();
  const double v0 = electron_kinematics(100.0).v0;
  Eigen::ArrayXd y(256);
  for (Index j = 0; j < y.size(); ++j) y(j) = (static_cast<double>(j) - 128.0) * 0.25;
  const CouplingProfile p = coupling_profile(w, l, v0, y);
  CHECK(p.delta_k == l.omega() / v0);
  double odd = 0.0;
  for (Index j = 1; j < 128; ++j) odd = std::max(odd, std::abs(p.i1(128 + j) + p.i1(128 - j)));
  CHECK(odd <= 1e-9);
  CHECK(p.i1(128) == 0.0);
  CHECK(p.i2.abs().maxCoeff() <= 1e-10);

  // |I1| maximum at |y| of order R, exponential decay beyond.
  Index peak = 0;
  p.i1.abs().maxCoeff(&peak);
  CHECK(std::abs(y(peak)) >= 5.0);
  CHECK(std::abs(y(peak)) <= 15.0);

  LaserParams doubled = l;
  doubled.field_amplitude = 0.4;
  for (double yy : {-7.0, 3.0, 15.0}) {
    CHECK(coupling_integrals(w, doubled, v0, yy).i1 ==
          doctest::Approx(2.0 * coupling_integrals(w, l, v0, yy).i1).epsilon(1e-9));
  }
}

TEST_CASE("coupling with a retardation phase rotates I1 into I2") {
  const Wire w{10.0, 0.5, {}};
  LaserParams l = fig1_laser();
  const double v0 = electron_kinematics(100.0).v0;
  const double base = coupling_integrals(w, l, v0, 20.0).i1;
  l.phase = 0.3;
  const CouplingValues v = coupling_integrals(w, l, v0, 20.0);
  CHECK(v.i1 == doctest::Approx(base * std::cos(0.3)).epsilon(1e-9));
  CHECK(v.i2 == doctest::Approx(base * std::sin(0.3)).epsilon(1e-9));
}

TEST_CASE("gap coupling is odd in y") {
  const GapResonator gap = calibrate_gap_amplitude(GapResonator{});
  const LaserParams l{2000.0, 0.025, 0.0};
  const double v0 = electron_kinematics(100.0).v0;
  for (double y : {1.0, 6.0, 15.0, 40.0}) {
    const CouplingValues a = coupling_integrals(gap, l, v0, y);
    const CouplingValues b = coupling_integrals(gap, l, v0, -y);
    CHECK(a.i1 == doctest::Approx(-b.i1).epsilon(1e-9));
    CHECK(std::abs(a.i2) <= 1e-10);
  }
}

TEST_CASE("uniform stripe coupling") {
  const UniformStripe s{1.0, -5.0, 5.0};
  const LaserParams l = fig1_laser();
  CHECK(coupling_integrals(s, l, 5.9, 0.0).i1 == 1.0);
  CHECK(coupling_integrals(s, l, 5.9, 6.0).i1 == 0.0);
  CHECK_THROWS_AS(potential(s, l, 0.0, 0.0), StateError);
}

TEST_CASE("profile transform") {
  const Wire w{10.0, 0.5, {}};
  const LaserParams l = fig1_laser();
  const double v0 = electron_kinematics(100.0).v0;
  Eigen::ArrayXd y(512);
  for (Index j = 0; j < y.size(); ++j) y(j) = (static_cast<double>(j) - 256.0) * 0.5;
  const CouplingProfile p = coupling_profile(w, l, v0, y);
  const Eigen::ArrayXcd t = profile_transform(p);
  CHECK(std::abs(t(256)) <= 1e-9 * t.abs().maxCoeff());
  CHECK(t.real().abs().maxCoeff() <= 1e-9 * t.abs().maxCoeff());
  for (Index j = 1; j < 256; ++j) {
    CHECK(std::abs(t(256 + j) + t(256 - j)) <= 1e-9 * t.abs().maxCoeff());
  }
  const double dk = 2.0 * units::pi / (512 * 0.5);
  CHECK((t.abs2().sum() * dk) == doctest::Approx(p.i1.square().sum() * 0.5).epsilon(1e-9));

  // Two symmetric lobes.
  Index peak = 0;
  t.abs().maxCoeff(&peak);
  CHECK(peak != 256);
  CHECK(std::abs(t(512 - peak)) == doctest::Approx(std::abs(t(peak))).epsilon(1e-9));

  CouplingProfile bent = p;
  bent.y(3) += 0.1;
  CHECK_THROWS_AS(profile_transform(bent), ConfigError);
}

TEST_CASE("profile CSV") {
  CouplingProfile p;
  p.y = Eigen::ArrayXd::LinSpaced(3, -1.0, 1.0);
  p.i1 = Eigen::ArrayXd::Constant(3, 0.1);
  p.i2 = Eigen::ArrayXd::Zero(3);
  p.provenance = "wire";
  std::ostringstream out;
  write_profile_csv(out, p);
  CHECK(out.str() == "# wire\ny_nm,I1_rad,I2_rad\n-1,0.10000000000000001,0\n0,0.10000000000000001,0\n1,0.10000000000000001,0\n");
}
