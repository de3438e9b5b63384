#include "nediff/io/sweep.hpp"

#include "nediff/core/errors.hpp"
#include "nediff/core/format.hpp"
#include "nediff/io/density_io.hpp"

#include <boost/crc.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <thread>

namespace nediff {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

template <class F>
double measured(F &&f) {
  try {
    return f();
  } catch (const DomainError &) {
    return nan;
  }
}

std::string hex32(std::uint32_t v) {
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", v);
  return buf;
}

std::string dump_name(std::size_t index, double value) {
  return "point_" + std::to_string(index) + "_" + format_double(value) + ".grid";
}

}  // namespace

std::optional<std::size_t> SweepResult::depletion_minimum() const {
  std::optional<std::size_t> best;
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (!points[k].ok()) continue;
    if (!best || points[k].depletion < points[*best].depletion) best = k;
  }
  return best;
}

std::vector<std::size_t> SweepResult::depletion_local_minima() const {
  std::vector<std::size_t> ok;
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (points[k].ok()) ok.push_back(k);
  }
  std::vector<std::size_t> minima;
  for (std::size_t k = 1; k + 1 < ok.size(); ++k) {
    const double d = points[ok[k]].depletion;
    if (d < points[ok[k - 1]].depletion && d < points[ok[k + 1]].depletion) {
      minima.push_back(ok[k]);
    }
  }
  return minima;
}

std::string config_hash(const ScenarioConfig &config) {
  const std::string text = serialize_config(config);
  boost::crc_32_type crc;
  crc.process_bytes(text.data(), text.size());
  return hex32(crc.checksum());
}

SweepPoint sweep_point(double value, const ScenarioResult &result) {
  const MomentumDensity &d = result.density();
  SweepPoint p;
  p.value = value;
  p.sidebands = sideband_populations(d, result.delta_k);
  p.depletion = depletion(d, result.initial_density);
  p.max_deflection = max_deflection(d);
  p.delta_kx = measured([&] { return longitudinal_spacing(d); });
  p.delta_ky = measured([&] { return transverse_spacing(d, result.delta_k); });
  return p;
}

SweepResult run_sweep(const ScenarioConfig &config, const SweepOptions &options) {
  if (!config.sweep) throw ConfigError("config has no 'sweep' section");
  validate(config);
  const SweepConfig &sweep = *config.sweep;
  SweepResult result;
  result.parameter = sweep.parameter;
  result.max_order = sweep.max_order;
  result.config_hash = config_hash(config);
  result.points.resize(sweep.values.size());

  ScenarioConfig base = config;
  base.sweep.reset();
  const Engine engine = options.engine.value_or(Engine::Analytic);
  const bool dump = sweep.dump_densities && !options.dump_dir.empty();
  if (dump) std::filesystem::create_directories(options.dump_dir);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < sweep.values.size(); k = next++) {
      const double value = sweep.values[k];
      SweepPoint &point = result.points[k];
      try {
        const ScenarioConfig point_config = with_parameter(base, sweep.parameter, value);
        RunOptions run;
        run.engine = engine;
        const ScenarioResult r = run_scenario(point_config, run);
        point = sweep_point(value, r);
        if (dump) write_density(options.dump_dir / dump_name(k, value), r.density());
      } catch (const std::exception &e) {
        point = SweepPoint{};
        point.value = value;
        point.depletion = point.max_deflection = point.delta_kx = point.delta_ky = nan;
        point.error = e.what();
      }
    }
  };
  unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(sweep.values.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto &t : pool) t.join();
  return result;
}

void write_sweep_csv(std::ostream &out, const SweepResult &result) {
  const int n = result.max_order;
  out << "# config_crc32 " << result.config_hash << '\n';
  out << parameter_name(result.parameter);
  for (int k = -n; k <= n; ++k) out << ",P_" << k;
  out << ",depletion,alpha_max_deg,delta_kx_per_nm,delta_ky_per_nm,flag,error\n";
  const auto minimum = result.depletion_minimum();
  const auto locals = result.depletion_local_minima();
  for (std::size_t i = 0; i < result.points.size(); ++i) {
    const SweepPoint &p = result.points[i];
    out << format_double(p.value);
    for (int k = -n; k <= n; ++k) {
      out << ',' << format_double(p.sidebands ? p.sidebands->population(k) : nan);
    }
    std::string flag;
    if (minimum && *minimum == i) {
      flag = "depletion_minimum";
    } else if (std::find(locals.begin(), locals.end(), i) != locals.end()) {
      flag = "local_minimum";
    }
    std::string error = p.error;
    std::replace(error.begin(), error.end(), ',', ';');
    std::replace(error.begin(), error.end(), '\n', ' ');
    out << ',' << format_double(p.depletion) << ',' << format_double(p.max_deflection) << ','
        << format_double(p.delta_kx) << ',' << format_double(p.delta_ky) << ',' << flag << ','
        << error << '\n';
  }
}

void write_sweep_csv(const std::filesystem::path &path, const SweepResult &result) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  write_sweep_csv(out, result);
}

}  // namespace nediff
