#include "sdd/distance_field.hpp"

#include <cmath>
#include <deque>

namespace sdd {

DistanceField build_distance_field(const GridMap& map, const std::array<double, 3>& goal_pos) {
    DistanceField f;
    f.width = map.width;
    f.height = map.height;
    f.depth = map.depth;
    f.cell_size = map.cell_size;

    const double inv = 1.0 / map.cell_size;
    f.goal_ix = static_cast<int>(std::floor(goal_pos[0] * inv));
    f.goal_iy = static_cast<int>(std::floor(goal_pos[1] * inv));
    f.goal_iz = map.depth == 1 ? 0 : static_cast<int>(std::floor(goal_pos[2] * inv));
    if (!map.in_bounds(f.goal_ix, f.goal_iy, f.goal_iz))
        throw std::invalid_argument("goal cell outside the map");
    if (map.at(f.goal_ix, f.goal_iy, f.goal_iz))
        throw std::invalid_argument("goal cell is blocked");

    f.value.assign(map.cell_count(), kInf);
    auto idx = [&](int ix, int iy, int iz) {
        return (static_cast<std::size_t>(iz) * f.height + iy) * f.width + ix;
    };

    std::deque<std::array<int, 3>> queue;
    f.value[idx(f.goal_ix, f.goal_iy, f.goal_iz)] = 0.0;
    queue.push_back({f.goal_ix, f.goal_iy, f.goal_iz});
    const int dz_lo = map.depth == 1 ? 0 : -1;
    const int dz_hi = map.depth == 1 ? 0 : 1;
    while (!queue.empty()) {
        const auto [cx, cy, cz] = queue.front();
        queue.pop_front();
        const double next = f.value[idx(cx, cy, cz)] + map.cell_size;
        for (int dz = dz_lo; dz <= dz_hi; ++dz)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0 && dz == 0) continue;
                    const int nx = cx + dx, ny = cy + dy, nz = cz + dz;
                    if (!map.in_bounds(nx, ny, nz)) continue;
                    if (map.at(nx, ny, nz)) continue;
                    double& cell = f.value[idx(nx, ny, nz)];
                    if (next < cell) {
                        cell = next;
                        queue.push_back({nx, ny, nz});
                    }
                }
    }
    return f;
}

double h_value(const DistanceField& field, const StateC& s) {
    const double inv = 1.0 / field.cell_size;
    const int ix = static_cast<int>(std::floor(s.x * inv));
    const int iy = static_cast<int>(std::floor(s.y * inv));
    const int iz = field.depth == 1 ? 0 : static_cast<int>(std::floor(s.z * inv));
    if (ix < 0 || ix >= field.width || iy < 0 || iy >= field.height || iz < 0 ||
        iz >= field.depth)
        return kInf;
    return field.at(ix, iy, iz);
}

}  // namespace sdd
