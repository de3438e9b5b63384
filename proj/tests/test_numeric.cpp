#include <doctest.h>

#include "nediff/analytic/interaction.hpp"
#include "nediff/core/errors.hpp"
#include "nediff/core/fourier.hpp"
#include "nediff/core/units.hpp"
#include "nediff/numeric/split_step.hpp"

#include <cmath>
#include <sstream>

using namespace nediff;

namespace {

const Grid2D kGrid(512, 256, 0.5, 0.5);
const Grid2D kSmallGrid(256, 256, 0.5, 0.5);

Wavepacket start_state(double t_start, const Grid2D &grid = kGrid) {
  return vacuum_propagate(gaussian_wavepacket(grid, 100.0, 20.0, 20.0), t_start);
}

EvolutionParams wire_params(double t_start, double t_end) {
  EvolutionParams p;
  p.t_start = t_start;
  p.t_end = t_end;
  p.model = Wire{10.0, 0.5, {}};
  p.laser = LaserParams{2000.0, 0.2, 0.3};
  return p;
}

RealField momentum_density(const Wavepacket &psi) {
  return to_momentum(psi).amplitudes.abs2();
}

double relative_l2(const RealField &a, const RealField &b) {
  return std::sqrt((a - b).square().sum() / b.square().sum());
}

double mean_y(const Wavepacket &psi) {
  const Eigen::ArrayXd my = psi.amplitudes.abs2().rowwise().sum();
  return (my * psi.grid.y_axis()).sum() / my.sum();
}

}  // namespace

TEST_CASE("free evolution reproduces the vacuum propagator") {
  EvolutionParams p = wire_params(-15.0, 15.0);
  p.model = Wire{10.0, 0.0, {}};
  p.laser.field_amplitude = 0.0;
  const Wavepacket psi0 = start_state(p.t_start);
  const EvolutionResult r = split_step_evolve(psi0, p);
  const Wavepacket ref = vacuum_propagate(psi0, p.t_end - p.t_start);
  CHECK(r.final_state.t == p.t_end);
  const double dk_norm = std::sqrt(kGrid.dk_area());
  const ComplexField diff =
      to_momentum(r.final_state).amplitudes - to_momentum(ref).amplitudes;
  CHECK(diff.abs().maxCoeff() * dk_norm <= 1e-10);
}

TEST_CASE("vector potential displaces the packet by the classical drift") {
  EvolutionParams p = wire_params(0.0, 0.0);
  const double w = p.laser.omega();
  p.t_end = units::pi / w;
  p.model = Wire{10.0, 0.0, {}};
  const Wavepacket psi0 = gaussian_wavepacket(kGrid, 100.0, 20.0, 20.0);
  const EvolutionResult r = split_step_evolve(psi0, p);
  // dy = -(q/m) int A dt with A = -(E_L / w) sin(w t)
  const double a_int = p.laser.field_amplitude / (w * w) * (std::cos(w * p.t_end) - 1.0);
  const double expected = -units::electron_charge / units::electron_mass * a_int;
  CHECK(std::abs(expected) > 0.05);
  CHECK(std::abs(mean_y(r.final_state) - mean_y(psi0) - expected) < 1e-9);
  CHECK(std::abs(r.trace.samples.back().mean_ky - r.trace.samples.front().mean_ky) < 1e-12);
}

TEST_CASE("wire evolution: norm, trace and time reversal") {
  EvolutionParams p = wire_params(-12.0, 12.0);
  p.snapshot_stride = 100;
  const Wavepacket psi0 = start_state(p.t_start);
  const EvolutionResult fwd = split_step_evolve(psi0, p);
  const EvolutionParams chosen = choose_steps(p, kGrid);
  REQUIRE(fwd.trace.samples.size() == static_cast<size_t>(chosen.steps / 100 + 1 +
                                                            (chosen.steps % 100 ? 1 : 0)));
  for (const TraceSample &s : fwd.trace.samples) CHECK(std::abs(s.norm - 1.0) <= 1e-9);
  CHECK(fwd.trace.samples.front().t == p.t_start);
  CHECK(fwd.trace.samples.back().t == p.t_end);
  // Lab centroid follows the group velocity.
  const double v0 = psi0.velocity();
  const TraceSample &a = fwd.trace.samples.front();
  const TraceSample &b = fwd.trace.samples.back();
  CHECK(std::abs((b.mean_x - a.mean_x) / (b.t - a.t) - v0) < 1e-3 * v0);
  CHECK(a.mean_kx == doctest::Approx(psi0.k0).epsilon(1e-9));
  CHECK(a.energy == doctest::Approx(100.0).epsilon(1e-3));

  // The interaction changes the transverse momentum distribution.
  CHECK(relative_l2(momentum_density(fwd.final_state), momentum_density(psi0)) > 1e-2);

  EvolutionParams back = p;
  std::swap(back.t_start, back.t_end);
  back.snapshot_stride = 0;
  const EvolutionResult rev = split_step_evolve(fwd.final_state, back);
  CHECK(rev.final_state.t == p.t_start);
  CHECK((rev.final_state.amplitudes - psi0.amplitudes).abs().maxCoeff() <= 1e-8);
}

TEST_CASE("split-step converges at second order in dt") {
  EvolutionParams p = wire_params(-4.0, 4.0);
  const Wavepacket psi0 = start_state(p.t_start, kSmallGrid);
  const double base = choose_steps(p, kSmallGrid).dt;
  auto run = [&](double dt) {
    EvolutionParams q = p;
    q.dt = dt;
    return split_step_evolve(psi0, q).final_state.amplitudes;
  };
  // One decade of dt above the dt/4 reference of the finest step.
  const double finest = base / 10.0;
  const ComplexField ref = run(finest / 4.0);
  const double ref_norm = std::sqrt(ref.abs2().sum());
  std::vector<double> errs;
  for (double dt : {base, base / 2.0, base / 5.0, finest}) {
    const ComplexField g = run(dt);
    errs.push_back(std::sqrt((g - ref).abs2().sum()) / ref_norm);
  }
  const std::vector<double> dts{base, base / 2.0, base / 5.0, finest};
  for (size_t n = 0; n < errs.size(); ++n) {
    // error / dt^2 constant within a factor 2 once the reference error is removed
    const double c = errs[n] / (dts[n] * dts[n] - finest * finest / 16.0);
    const double c0 = errs[0] / (dts[0] * dts[0] - finest * finest / 16.0);
    CHECK(c / c0 > 0.5);
    CHECK(c / c0 < 2.0);
  }

}

TEST_CASE("halving the chosen step barely moves the momentum density") {
  const EvolutionParams p = wire_params(-12.0, 12.0);
  const Wavepacket psi0 = start_state(p.t_start);
  EvolutionParams half = p;
  half.dt = choose_steps(p, kGrid).dt / 2.0;
  const RealField coarse = momentum_density(split_step_evolve(psi0, p).final_state);
  const RealField fine = momentum_density(split_step_evolve(psi0, half).final_state);
  CHECK(relative_l2(coarse, fine) < 1e-6);
}

TEST_CASE("step selection") {
  const EvolutionParams p = wire_params(-30.0, 30.0);
  const EvolutionParams c = choose_steps(p, kGrid);
  const double kmax = units::pi / 0.5;
  const double kin = units::hbar * kmax * kmax / (2.0 * units::electron_mass);
  const double pot = 0.2 * 0.5 * 10.0 / units::hbar;
  CHECK(std::abs(c.dt) * pot <= 0.05 + 1e-15);
  CHECK(std::abs(c.dt) * kin <= 0.25 + 1e-15);
  CHECK(c.dt * static_cast<double>(c.steps) == doctest::Approx(60.0));
  CHECK(std::abs(c.dt) > 0.5 * 0.05 / pot * (1.0 - 1.0 / static_cast<double>(c.steps)));

  EvolutionParams weaker = p;
  weaker.laser.field_amplitude *= 0.5;
  CHECK(choose_steps(weaker, kGrid).dt >= c.dt);

  EvolutionParams reversed = p;
  std::swap(reversed.t_start, reversed.t_end);
  const EvolutionParams r = choose_steps(reversed, kGrid);
  CHECK(r.dt == doctest::Approx(-c.dt));
  CHECK(r.steps == c.steps);

  EvolutionParams tiny = p;
  tiny.t_end = tiny.t_start + 0.5 * c.dt;
  CHECK_THROWS_AS(choose_steps(tiny, kGrid), ConfigError);

  EvolutionParams explicit_dt = p;
  explicit_dt.dt = 0.5;
  CHECK_THROWS_AS(choose_steps(explicit_dt, kGrid), ConfigError);
  explicit_dt.dt = 0.07;
  CHECK_THROWS_AS(choose_steps(explicit_dt, kGrid), ConfigError);
  explicit_dt.dt = 0.01;
  CHECK(choose_steps(explicit_dt, kGrid).steps == 6000);

  EvolutionParams stripe = p;
  stripe.model = UniformStripe{0.5, -5.0, 5.0};
  CHECK_THROWS_AS(split_step_evolve(start_state(p.t_start), stripe), ConfigError);
}

TEST_CASE("evolution errors") {
  EvolutionParams p = wire_params(-12.0, 12.0);
  CHECK_THROWS_AS(split_step_evolve(start_state(0.0), p), ConfigError);

  const Grid2D small(128, 64, 0.5, 0.5);
  EvolutionParams far = p;
  far.t_start = -100.0;
  far.t_end = 100.0;
  far.laser.field_amplitude = 0.0;
  CHECK_THROWS_AS(
      split_step_evolve(gaussian_wavepacket(small, 100.0, 10.0, 10.0).with_amplitudes(
                            gaussian_wavepacket(small, 100.0, 10.0, 10.0).amplitudes, -100.0),
                        far),
      ConfigError);
}

TEST_CASE("trace CSV") {
  EvolutionTrace trace;
  trace.samples.push_back({0, -1.5, 1.0, 2.0, 51.0, 0.0, 100.0});
  std::ostringstream out;
  write_trace_csv(out, trace);
  CHECK(out.str() ==
        "t_fs,norm,mean_x_nm,mean_kx_per_nm,mean_ky_per_nm,energy_ev\n-1.5,1,2,51,0,100\n");
}
