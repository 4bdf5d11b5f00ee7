#include "sdd/pgm.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace sdd {

namespace {

// Cell of a world position on the xy projection, or -1 when outside.
std::ptrdiff_t cell_index(const GridMap& map, const std::array<double, 3>& p) {
    int ix = static_cast<int>(std::floor(p[0] / map.cell_size));
    int iy = static_cast<int>(std::floor(p[1] / map.cell_size));
    if (ix < 0 || ix >= map.width || iy < 0 || iy >= map.height) return -1;
    return static_cast<std::ptrdiff_t>(iy) * map.width + ix;
}

}  // namespace

Heatmap render_heatmap(const GridMap& map, const RunRecord& run) {
    if (run.expansions > 0 && run.expansion_log.empty())
        throw std::runtime_error("run '" + run.scenario_id + "' (" + run.planner +
                                 ") has no expansion log; rerun with log_expansions = true");

    Heatmap hm;
    hm.width = map.width;
    hm.height = map.height;
    hm.pixels.assign(static_cast<std::size_t>(map.width) * map.height, 0);

    std::vector<std::uint32_t> counts(hm.pixels.size(), 0);
    std::uint32_t max_count = 0;
    for (const auto& p : run.expansion_log) {
        std::ptrdiff_t i = cell_index(map, p);
        if (i < 0) continue;
        max_count = std::max(max_count, ++counts[i]);
    }
    if (max_count > 0) {
        double denom = std::log1p(static_cast<double>(max_count));
        for (std::size_t i = 0; i < counts.size(); ++i) {
            if (counts[i] == 0) continue;
            double t = std::log1p(static_cast<double>(counts[i])) / denom;
            hm.pixels[i] = static_cast<std::uint8_t>(55.0 + std::lround(175.0 * t));
        }
    }
    for (const auto& p : run.path) {
        std::ptrdiff_t i = cell_index(map, p);
        if (i >= 0) hm.pixels[i] = 255;
    }
    return hm;
}

std::string serialize_pgm(const Heatmap& hm) {
    std::string out = "P5\n" + std::to_string(hm.width) + " " + std::to_string(hm.height) +
                      "\n255\n";
    out.append(reinterpret_cast<const char*>(hm.pixels.data()), hm.pixels.size());
    return out;
}

void write_pgm(const Heatmap& hm, const std::string& path) {
    std::ofstream outf(path, std::ios::binary);
    if (!outf) throw std::runtime_error("cannot write '" + path + "'");
    std::string data = serialize_pgm(hm);
    outf.write(data.data(), static_cast<std::streamsize>(data.size()));
}

}  // namespace sdd
