#include "nediff/core/raw_grid.hpp"

#include "nediff/core/errors.hpp"
#include "nediff/core/format.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace nediff {

namespace {

void put_le(std::ostream &out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  out.write(reinterpret_cast<const char *>(&bits), sizeof bits);
}

double get_le(std::istream &in) {
  std::uint64_t bits = 0;
  in.read(reinterpret_cast<char *>(&bits), sizeof bits);
  if (!in) throw ConfigError("raw grid payload truncated");
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  double v;
  std::memcpy(&v, &bits, sizeof v);
  return v;
}

}  // namespace

void write_raw_grid(std::ostream &out, const Wavepacket &psi) {
  const Grid2D &g = psi.grid;
  out << "NEDIFF1 " << g.nx() << ' ' << g.ny() << ' ' << format_double(g.dx()) << ' '
      << format_double(g.dy()) << ' ' << format_double(g.x0()) << ' '
      << format_double(g.y0()) << ' ' << format_double(psi.t) << ' '
      << format_double(psi.k0) << ' ' << format_double(psi.energy) << '\n';
  for (Index j = 0; j < g.ny(); ++j) {
    for (Index i = 0; i < g.nx(); ++i) {
      put_le(out, psi.amplitudes(j, i).real());
      put_le(out, psi.amplitudes(j, i).imag());
    }
  }
}

void write_raw_grid(const std::filesystem::path &path, const Wavepacket &psi) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  write_raw_grid(out, psi);
}

Wavepacket read_raw_grid(std::istream &in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("raw grid: missing header");
  std::istringstream header(line);
  std::string magic;
  Index nx = 0, ny = 0;
  double dx = 0, dy = 0, x0 = 0, y0 = 0, t = 0, k0 = 0, energy = 0;
  header >> magic >> nx >> ny >> dx >> dy >> x0 >> y0 >> t >> k0 >> energy;
  if (!header || magic != "NEDIFF1") throw ConfigError("raw grid: malformed header");
  Grid2D grid(nx, ny, dx, dy, x0, y0);
  ComplexField amp(ny, nx);
  for (Index j = 0; j < ny; ++j) {
    for (Index i = 0; i < nx; ++i) {
      const double re = get_le(in);
      const double im = get_le(in);
      amp(j, i) = Complex(re, im);
    }
  }
  Wavepacket psi(grid, std::move(amp), t, energy);
  // Keep the stored carrier even when it was not derived from E0.
  psi.k0 = k0;
  return psi;
}

Wavepacket read_raw_grid(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  return read_raw_grid(in);
}

}  // namespace nediff
