#ifndef NEDIFF_CORE_RAW_GRID_HPP
#define NEDIFF_CORE_RAW_GRID_HPP

#include "nediff/core/wavepacket.hpp"

#include <filesystem>
#include <iosfwd>

namespace nediff {

// Raw dump: one ASCII header line
//   NEDIFF1 nx ny dx dy x0 y0 t k0 E0\n
// followed by nx*ny little-endian float64 (re, im) pairs, row-major over y then x.

void write_raw_grid(std::ostream &out, const Wavepacket &psi);
void write_raw_grid(const std::filesystem::path &path, const Wavepacket &psi);

Wavepacket read_raw_grid(std::istream &in);
Wavepacket read_raw_grid(const std::filesystem::path &path);

}  // namespace nediff

#endif  // NEDIFF_CORE_RAW_GRID_HPP
