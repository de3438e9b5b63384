#include "nediff/io/density_io.hpp"

#include "nediff/core/errors.hpp"
#include "nediff/core/format.hpp"
#include "nediff/core/raw_grid.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

namespace nediff {

namespace {

constexpr const char *kMagic = "NEDIFFD1";

void put_le(std::ostream &out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  out.write(reinterpret_cast<const char *>(&bits), sizeof bits);
}

double get_le(std::istream &in) {
  std::uint64_t bits = 0;
  in.read(reinterpret_cast<char *>(&bits), sizeof bits);
  if (!in) throw ConfigError("density payload truncated");
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  double v;
  std::memcpy(&v, &bits, sizeof v);
  return v;
}

}  // namespace

void write_density(std::ostream &out, const MomentumDensity &density) {
  const Grid2D &g = density.grid;
  out << kMagic << ' ' << g.nx() << ' ' << g.ny() << ' ' << format_double(g.dx()) << ' '
      << format_double(g.dy()) << ' ' << format_double(g.x0()) << ' ' << format_double(g.y0())
      << ' ' << format_double(density.k0) << ' ' << format_double(density.energy) << '\n';
  const double *v = density.values.data();
  for (Index k = 0; k < density.values.size(); ++k) put_le(out, v[k]);
}

void write_density(const std::filesystem::path &path, const MomentumDensity &density) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  write_density(out, density);
}

MomentumDensity read_density(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path.string() + ": missing header");
  std::istringstream header(line);
  std::string magic;
  header >> magic;
  if (magic == "NEDIFF1") {
    in.seekg(0);
    return momentum_density(read_raw_grid(in));
  }
  if (magic != kMagic) throw ConfigError(path.string() + ": not a wavepacket or density dump");
  Index nx = 0, ny = 0;
  double dx = 0, dy = 0, x0 = 0, y0 = 0, k0 = 0, energy = 0;
  header >> nx >> ny >> dx >> dy >> x0 >> y0 >> k0 >> energy;
  if (!header) throw ConfigError(path.string() + ": malformed density header");
  MomentumDensity density{Grid2D(nx, ny, dx, dy, x0, y0), RealField(ny, nx), k0, energy};
  double *v = density.values.data();
  for (Index k = 0; k < density.values.size(); ++k) v[k] = get_le(in);
  return density;
}

}  // namespace nediff
