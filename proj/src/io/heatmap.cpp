#include "nediff/io/heatmap.hpp"

#include "nediff/core/errors.hpp"
#include "nediff/core/format.hpp"

#include <cmath>
#include <fstream>

namespace nediff {

Heatmap render_heatmap(const MomentumDensity &density, Colormap map, double clip) {
  const RealField &v = density.values;
  if (!v.allFinite()) throw NumericalError("cannot render a density with non-finite values");
  if (map == Colormap::Log && !(clip > 0.0 && clip < 1.0)) {
    throw ConfigError("log colormap clip must lie in (0, 1)");
  }
  Heatmap img;
  img.width = v.cols();
  img.height = v.rows();
  img.pixels.assign(static_cast<size_t>(v.size()), 0);
  const double hi = v.maxCoeff();
  const double lo = v.minCoeff();
  if (hi == 0.0 && lo == 0.0) {
    img.blank = true;
    return img;
  }
  auto level = [&](double value) -> std::uint16_t {
    double f = 0.5;
    if (map == Colormap::Linear) {
      if (hi > lo) f = (value - lo) / (hi - lo);
    } else {
      const double floor = clip * hi;
      f = (std::log10(std::max(value, floor)) - std::log10(floor)) / -std::log10(clip);
    }
    return static_cast<std::uint16_t>(std::lround(std::clamp(f, 0.0, 1.0) * 65535.0));
  };
  for (Index r = 0; r < img.height; ++r) {
    const Index j = img.height - 1 - r;
    for (Index i = 0; i < img.width; ++i) {
      img.pixels[static_cast<size_t>(r * img.width + i)] = level(v(j, i));
    }
  }
  return img;
}

bool write_heatmap(const std::filesystem::path &path, const MomentumDensity &density,
                   Colormap map, double clip) {
  const Heatmap img = render_heatmap(density, map, clip);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  out << "P5\n" << img.width << ' ' << img.height << "\n65535\n";
  for (std::uint16_t p : img.pixels) {
    const char bytes[2] = {static_cast<char>(p >> 8), static_cast<char>(p & 0xff)};
    out.write(bytes, 2);
  }
  const Grid2D &g = density.grid;
  std::ofstream side(path.string() + ".txt");
  if (!side) throw ConfigError("cannot open " + path.string() + ".txt for writing");
  side << "kx_min_per_nm " << format_double(density.kx(0)) << "\nkx_max_per_nm "
       << format_double(density.kx(g.nx() - 1)) << "\nky_min_per_nm "
       << format_double(density.ky(0)) << "\nky_max_per_nm " << format_double(density.ky(g.ny() - 1))
       << "\ncolumns kx_ascending\nrows ky_descending\ncolormap "
       << (map == Colormap::Linear ? "linear" : "log") << "\nclip " << format_double(clip)
       << "\nmax_density " << format_double(density.values.maxCoeff()) << "\n";
  return !img.blank;
}

}  // namespace nediff
