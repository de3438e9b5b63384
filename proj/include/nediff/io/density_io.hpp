#ifndef NEDIFF_IO_DENSITY_IO_HPP
#define NEDIFF_IO_DENSITY_IO_HPP

#include "nediff/analysis/observables.hpp"

#include <filesystem>
#include <iosfwd>

namespace nediff {

// Momentum density dump: one ASCII header line
//   NEDIFFD1 nx ny dx dy x0 y0 k0 E0\n
// (the position grid the momentum axes derive from) followed by nx*ny
// little-endian float64 values, row-major over ky then kx.

void write_density(std::ostream &out, const MomentumDensity &density);
void write_density(const std::filesystem::path &path, const MomentumDensity &density);

/// Reads a density dump, or a wavepacket raw grid (converted to its momentum density).
MomentumDensity read_density(const std::filesystem::path &path);

}  // namespace nediff

#endif  // NEDIFF_IO_DENSITY_IO_HPP
