#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sdd/bench.hpp"
#include "sdd/grid_map.hpp"

namespace sdd {

/// 8-bit grayscale raster, row-major, one pixel per map cell.
struct Heatmap {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;
};

/// Per-cell expansion counts of a run, log-scaled into [55, 230], with
/// the solution path overlaid at 255. Volumetric maps are projected onto
/// the xy plane. A run that expanded states but carries no expansion log
/// (logging was disabled) is an error; a run with zero expansions renders
/// black.
Heatmap render_heatmap(const GridMap& map, const RunRecord& run);

/// Binary PGM: "P5\n<w> <h>\n255\n" followed by the pixel rows.
std::string serialize_pgm(const Heatmap& hm);
void write_pgm(const Heatmap& hm, const std::string& path);

}  // namespace sdd
