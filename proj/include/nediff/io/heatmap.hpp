#ifndef NEDIFF_IO_HEATMAP_HPP
#define NEDIFF_IO_HEATMAP_HPP

#include "nediff/analysis/observables.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace nediff {

enum class Colormap { Linear, Log };

struct Heatmap {
  Index width = 0;
  Index height = 0;
  std::vector<std::uint16_t> pixels;  // row-major, top row = highest ky
  bool blank = false;                 // all-zero input
};

/// Linear: (v - min) / (max - min), mid-gray for a constant field.
/// Log: log10 of v floored at clip * max, spread over [clip * max, max].
Heatmap render_heatmap(const MomentumDensity &density, Colormap map = Colormap::Log,
                       double clip = 1e-6);

/// 16-bit binary PGM (P5, maxval 65535, big-endian samples) plus
/// `<path>.txt` with the axis ranges. Returns false for a blank image.
bool write_heatmap(const std::filesystem::path &path, const MomentumDensity &density,
                   Colormap map = Colormap::Log, double clip = 1e-6);

}  // namespace nediff

#endif  // NEDIFF_IO_HEATMAP_HPP
