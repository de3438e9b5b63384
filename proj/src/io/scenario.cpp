#include "nediff/io/scenario.hpp"

#include "nediff/analytic/interaction.hpp"
#include "nediff/analytic/orders.hpp"
#include "nediff/core/errors.hpp"
#include "nediff/core/format.hpp"
#include "nediff/core/raw_grid.hpp"
#include "nediff/core/units.hpp"
#include "nediff/io/density_io.hpp"
#include "nediff/io/heatmap.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

namespace nediff {

namespace {

bool wants(const ScenarioConfig &c, const std::string &name) {
  return std::find(c.outputs.begin(), c.outputs.end(), name) != c.outputs.end();
}

double or_nan(const std::function<double()> &f) {
  try {
    return f();
  } catch (const DomainError &) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

std::ofstream open_text(const std::filesystem::path &path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  return out;
}

void write_cut(const std::filesystem::path &path, const Crosscut &cut) {
  std::ofstream out = open_text(path);
  out << (cut.axis == CutAxis::Kx ? "kx_per_nm" : "ky_per_nm") << ",density\n";
  for (Index i = 0; i < cut.coordinate.size(); ++i) {
    out << format_double(cut.coordinate(i)) << ',' << format_double(cut.density(i)) << '\n';
  }
}

void summarize(std::ostream &out, const std::string &prefix, const MomentumDensity &d,
               const MomentumDensity &initial, double delta_k) {
  const SidebandTable table = sideband_populations(d, delta_k);
  out << prefix << ".norm " << format_double(d.total()) << '\n';
  out << prefix << ".sideband_total " << format_double(table.total()) << '\n';
  for (int n = -3; n <= 3; ++n) {
    out << prefix << ".P" << n << ' ' << format_double(table.population(n)) << '\n';
  }
  out << prefix << ".depletion " << format_double(depletion(d, initial)) << '\n';
  out << prefix << ".delta_kx_measured_per_nm "
      << format_double(or_nan([&] { return longitudinal_spacing(d); })) << '\n';
  out << prefix << ".delta_ky_per_nm "
      << format_double(or_nan([&] { return transverse_spacing(d, delta_k); })) << '\n';
  out << prefix << ".max_deflection_deg " << format_double(max_deflection(d)) << '\n';
  out << prefix << ".deflection_extent_deg " << format_double(deflection_extent(d)) << '\n';
  const EnergySpread spread = energy_spread(d);
  out << prefix << ".energy_fwhm_ev " << format_double(spread.fwhm) << '\n';
  out << prefix << ".energy_rms_ev " << format_double(spread.rms) << '\n';
}

}  // namespace

Grid2D make_grid(const GridConfig &grid) {
  return Grid2D(grid.nx, grid.ny, grid.dx, grid.dy);
}

NearFieldModel resolved_model(const ScenarioConfig &config) {
  if (const auto *gap = std::get_if<GapResonator>(&config.model)) {
    return calibrate_gap_amplitude(*gap);
  }
  return config.model;
}

double initial_fwhm_x(const ScenarioConfig &config) {
  const ElectronConfig &e = config.electron;
  if (e.fwhm_x) return *e.fwhm_x;
  if (e.duration) return *e.duration * electron_kinematics(e.energy).v0;
  return bandwidth_limited_fwhm(*e.bandwidth, e.energy);
}

double chirp_time(const ScenarioConfig &config) {
  const ElectronConfig &e = config.electron;
  if (!e.chirp_duration) return 0.0;
  const double target = *e.chirp_duration * electron_kinematics(e.energy).v0;
  return spreading_time(initial_fwhm_x(config), target);
}

Wavepacket initial_state(const ScenarioConfig &config) {
  validate(config);
  const Grid2D grid = make_grid(config.grid);
  const ElectronConfig &e = config.electron;
  Wavepacket psi = gaussian_wavepacket(grid, e.energy, initial_fwhm_x(config),
                                       transverse_fwhm(config), e.center.x, e.center.y);
  if (const double tau = chirp_time(config); tau > 0.0) {
    psi = vacuum_propagate(psi, tau, PropagationAxes::Longitudinal);
  }
  if (e.pre_propagation != 0.0) psi = vacuum_propagate(psi, e.pre_propagation);
  return psi.with_amplitudes(psi.amplitudes, 0.0);
}

const MomentumDensity &ScenarioResult::density() const {
  if (analytic_density) return *analytic_density;
  if (numeric_density) return *numeric_density;
  throw StateError("scenario result holds no final density");
}

ScenarioResult run_scenario(const ScenarioConfig &config, const RunOptions &options) {
  validate(config);
  const Engine engine = options.engine.value_or(config.engine);
  const NearFieldModel model = resolved_model(config);
  Wavepacket psi0 = initial_state(config);
  const double v0 = psi0.velocity();
  ScenarioResult r{config, model, config.laser.omega() / v0, psi0, momentum_density(psi0),
                   {}, {}, {}, {}, {}, {}, {}};
  r.config.engine = engine;

  if (engine != Engine::Numeric) {
    r.profile = coupling_profile(model, config.laser, v0, psi0.grid.y_axis());
    r.analytic = apply_interaction(psi0, build_phase_mask(*r.profile, psi0.grid));
    r.analytic_density = momentum_density(*r.analytic);
  }
  if (engine != Engine::Analytic) {
    EvolutionParams p;
    p.t_start = config.numeric.t_start;
    p.t_end = config.numeric.t_end;
    p.dt = config.numeric.dt;
    p.laser = config.laser;
    p.model = model;
    p.vector_potential = config.numeric.vector_potential;
    p.snapshot_stride = options.snapshot_stride.value_or(config.numeric.snapshot_stride);
    p.snapshot_dir = options.snapshot_dir;
    const Wavepacket start = vacuum_propagate(psi0, p.t_start);
    EvolutionResult out = split_step_evolve(start, p);
    r.numeric_density = momentum_density(out.final_state);
    r.numeric = std::move(out.final_state);
    r.trace = std::move(out.trace);
  }
  if (r.analytic_density && r.numeric_density) {
    r.engine_distance = relative_l2_distance(r.numeric_density->values, r.analytic_density->values);
  }
  return r;
}

std::vector<std::string> write_outputs(const ScenarioResult &r,
                                       const std::filesystem::path &directory) {
  std::filesystem::create_directories(directory);
  std::vector<std::string> files;
  auto add = [&](const std::string &name) {
    files.push_back(name);
    return directory / name;
  };
  {
    std::ofstream out = open_text(add("config.resolved.yaml"));
    out << serialize_config(r.config);
  }
  std::vector<std::pair<std::string, const MomentumDensity *>> finals;
  if (r.analytic_density) finals.emplace_back("analytic", &*r.analytic_density);
  if (r.numeric_density) finals.emplace_back("numeric", &*r.numeric_density);
  const ScenarioConfig &c = r.config;

  for (const auto &[engine, d] : finals) {
    if (wants(c, "density")) write_density(add("density_" + engine + ".grid"), *d);
    if (wants(c, "heatmap")) write_heatmap(add("density_" + engine + ".pgm"), *d);
    if (wants(c, "heatmap")) files.push_back("density_" + engine + ".pgm.txt");
    if (wants(c, "sidebands")) {
      const SidebandTable table = sideband_populations(*d, r.delta_k);
      std::ofstream out = open_text(add("sidebands_" + engine + ".csv"));
      out << "order,population,ky_spread_per_nm\n";
      for (size_t k = 0; k < table.orders.size(); ++k) {
        out << table.orders[k] << ',' << format_double(table.populations[k]) << ','
            << format_double(table.ky_spread[k]) << '\n';
      }
    }
    if (wants(c, "crosscuts")) {
      write_cut(add("crosscut_" + engine + "_kx_at_ky0.csv"), crosscut(*d, CutAxis::Kx, 0.0));
      for (int n = -3; n <= 3; ++n) {
        const double kx = d->k0 + n * r.delta_k;
        if (kx < d->kx(0) || kx > d->kx(d->grid.nx() - 1)) continue;
        write_cut(add("crosscut_" + engine + "_ky_order" + std::to_string(n) + ".csv"),
                  crosscut(*d, CutAxis::Ky, kx));
      }
    }
  }
  if (wants(c, "wavepacket")) {
    write_raw_grid(add("initial.grid"), r.initial);
    if (r.analytic) write_raw_grid(add("final_analytic.grid"), *r.analytic);
    if (r.numeric) write_raw_grid(add("final_numeric.grid"), *r.numeric);
  }
  if (wants(c, "coupling") && r.profile) write_profile_csv(add("coupling.csv"), *r.profile);
  std::string orders_note;
  if (wants(c, "orders") && r.profile) {
    try {
      const OrderDecomposition orders = order_amplitudes_exact(r.initial, *r.profile);
      write_orders(directory / "orders", orders, r.profile->provenance);
      files.push_back("orders/");
    } catch (const std::exception &e) {
      orders_note = e.what();
    }
  }
  if (wants(c, "trace") && r.trace) write_trace_csv(add("trace.csv"), *r.trace);

  std::ofstream out = open_text(add("summary.txt"));
  out << "scenario " << c.name << "\nengine " << engine_name(c.engine) << "\nenergy_ev "
      << format_double(c.electron.energy) << "\nk0_per_nm " << format_double(r.initial.k0)
      << "\nv0_nm_per_fs " << format_double(r.initial.velocity()) << "\ndelta_kx_per_nm "
      << format_double(r.delta_k) << "\nphoton_energy_ev "
      << format_double(units::hbar * c.laser.omega()) << "\ninitial_fwhm_x_nm "
      << format_double(initial_fwhm_x(c)) << "\nchirp_time_fs " << format_double(chirp_time(c))
      << "\ninitial_temporal_spread_fs " << format_double(temporal_spread(r.initial)) << '\n';
  summarize(out, "initial", r.initial_density, r.initial_density, r.delta_k);
  for (const auto &[engine, d] : finals) summarize(out, engine, *d, r.initial_density, r.delta_k);
  if (r.engine_distance) {
    out << "engine_relative_l2 " << format_double(*r.engine_distance) << '\n';
  }
  if (!orders_note.empty()) out << "orders_skipped " << orders_note << '\n';
  return files;
}

}  // namespace nediff
