#include "nediff/core/errors.hpp"
#include "nediff/core/format.hpp"
#include "nediff/io/config.hpp"
#include "nediff/io/density_io.hpp"
#include "nediff/io/heatmap.hpp"
#include "nediff/io/scenario.hpp"
#include "nediff/io/sweep.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace nediff;

namespace {

struct Flags {
  std::string engine;
  std::string out;
  unsigned threads = 0;
  bool seedless = false;
  long snapshot_stride = -1;
};

std::optional<Engine> parse_engine(const std::string &name) {
  if (name.empty()) return std::nullopt;
  if (name == "analytic") return Engine::Analytic;
  if (name == "numeric") return Engine::Numeric;
  if (name == "both") return Engine::Both;
  throw ConfigError("--engine expects analytic, numeric or both, got '" + name + "'");
}

fs::path output_dir(const Flags &flags, const std::string &name) {
  if (!flags.out.empty()) return flags.out;
  const char *root = std::getenv("NEDIFF_OUT");
  return fs::path(root && *root ? root : "nediff-out") / name;
}

void list_files(const fs::path &dir, const std::vector<std::string> &files) {
  for (const auto &f : files) std::cout << "  " << (dir / f).string() << '\n';
}

void run_single(const ScenarioConfig &config, const Flags &flags) {
  const fs::path dir = output_dir(flags, config.name);
  RunOptions options;
  options.engine = parse_engine(flags.engine);
  if (flags.snapshot_stride >= 0) {
    options.snapshot_stride = flags.snapshot_stride;
    options.snapshot_dir = dir / "snapshots";
  } else if (config.numeric.snapshot_stride > 0) {
    options.snapshot_dir = dir / "snapshots";
  }
  const auto start = std::chrono::steady_clock::now();
  const ScenarioResult result = run_scenario(config, options);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto files = write_outputs(result, dir);
  std::cout << "scenario " << config.name << " (" << engine_name(result.config.engine)
            << ") finished in " << format_double(seconds) << " s\n";
  if (result.engine_distance) {
    std::cout << "relative L2 numeric vs analytic: " << format_double(*result.engine_distance)
              << '\n';
  }
  std::cout << "wrote\n";
  list_files(dir, files);
}

void run_sweep_command(const ScenarioConfig &config, const Flags &flags) {
  if (!config.sweep) throw ConfigError("config has no 'sweep' section");
  const fs::path dir = output_dir(flags, config.name);
  fs::create_directories(dir);
  SweepOptions options;
  options.threads = flags.threads;
  options.engine = parse_engine(flags.engine);
  options.dump_dir = dir / "densities";
  const SweepResult result = run_sweep(config, options);
  {
    std::ofstream out(dir / "config.resolved.yaml");
    out << serialize_config(config);
  }
  write_sweep_csv(dir / "sweep.csv", result);
  std::size_t failed = 0;
  for (const auto &p : result.points) failed += p.ok() ? 0 : 1;
  std::cout << "sweep over " << parameter_name(result.parameter) << ": "
            << result.points.size() << " points, " << failed << " failed\n";
  if (const auto m = result.depletion_minimum()) {
    std::cout << "depletion minimum at " << format_double(result.points[*m].value) << '\n';
  }
  std::cout << "wrote\n  " << (dir / "sweep.csv").string() << '\n';
}

void compare(const std::string &a, const std::string &b) {
  const MomentumDensity da = read_density(a);
  const MomentumDensity db = read_density(b);
  if (!(da.grid == db.grid)) throw ConfigError("the two grids have different geometry");
  const double l2 = relative_l2_distance(da.values, db.values);
  const double max_abs = (da.values - db.values).abs().maxCoeff();
  const double peak = std::max(da.values.maxCoeff(), db.values.maxCoeff());
  std::cout << "relative_l2 " << format_double(l2) << "\nmax_abs " << format_double(max_abs)
            << "\nmax_rel_to_peak " << format_double(peak > 0 ? max_abs / peak : 0.0) << '\n';
}

void render(const std::string &input, std::string out, const std::string &map, double clip) {
  Colormap colormap;
  if (map == "log") {
    colormap = Colormap::Log;
  } else if (map == "linear") {
    colormap = Colormap::Linear;
  } else {
    throw ConfigError("--colormap expects linear or log, got '" + map + "'");
  }
  if (!(clip > 0.0 && clip < 1.0)) throw ConfigError("--clip must lie in (0, 1)");
  const MomentumDensity d = read_density(input);
  if (out.empty()) out = fs::path(input).replace_extension(".pgm").string();
  if (!write_heatmap(out, d, colormap, clip)) {
    std::cerr << "warning: density is identically zero, wrote a blank image\n";
  }
  std::cout << "wrote\n  " << out << "\n  " << out << ".txt\n";
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Electron diffraction in optical near fields"};
  app.require_subcommand(1);
  Flags flags;
  auto common = [&](CLI::App *cmd) {
    cmd->add_option("--engine", flags.engine, "analytic, numeric or both");
    cmd->add_option("--out", flags.out, "output directory");
    cmd->add_option("--threads", flags.threads, "worker threads for sweeps (0 = all cores)");
    cmd->add_flag("--seedless", flags.seedless, "accepted for compatibility; runs are deterministic");
    cmd->add_option("--snapshot-stride", flags.snapshot_stride,
                    "numeric engine: write the state every N steps");
  };

  std::string config_path;
  auto *run = app.add_subcommand("run", "run one scenario");
  run->add_option("config", config_path, "scenario YAML")->required();
  common(run);

  auto *sweep = app.add_subcommand("sweep", "run a parameter sweep");
  sweep->add_option("config", config_path, "scenario YAML with a sweep section")->required();
  common(sweep);

  std::string preset_name;
  bool config_only = false;
  auto *preset = app.add_subcommand("preset", "run a built-in preset");
  preset->add_option("name", preset_name, "fig1, fig2, fig3, fig4-limited or fig4-chirped")
      ->required();
  preset->add_flag("--config-only", config_only, "only write the preset's YAML");
  common(preset);

  std::string grid_a, grid_b;
  auto *cmp = app.add_subcommand("compare", "compare two density or wavepacket grids");
  cmp->add_option("a", grid_a)->required();
  cmp->add_option("b", grid_b)->required();

  std::string render_in, render_out, colormap = "log";
  double clip = 1e-6;
  auto *rnd = app.add_subcommand("render", "render a grid as a 16-bit PGM heatmap");
  rnd->add_option("grid", render_in)->required();
  rnd->add_option("--out", render_out, "output .pgm path");
  rnd->add_option("--colormap", colormap, "linear or log");
  rnd->add_option("--clip", clip, "log floor relative to the maximum");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*run) {
      run_single(load_config(config_path), flags);
    } else if (*sweep) {
      run_sweep_command(load_config(config_path), flags);
    } else if (*preset) {
      const ScenarioConfig config = preset_config(preset_name);
      const fs::path dir = output_dir(flags, config.name);
      fs::create_directories(dir);
      std::ofstream(dir / "preset.yaml") << preset_text(preset_name);
      if (config_only) {
        std::cout << "wrote\n  " << (dir / "preset.yaml").string() << '\n';
      } else if (config.sweep) {
        run_sweep_command(config, flags);
      } else {
        run_single(config, flags);
      }
    } else if (*cmp) {
      compare(grid_a, grid_b);
    } else if (*rnd) {
      render(render_in, render_out, colormap, clip);
    }
  } catch (const NumericalError &e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
