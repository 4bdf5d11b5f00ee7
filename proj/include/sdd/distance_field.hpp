#pragma once

#include <vector>

#include "sdd/grid_map.hpp"
#include "sdd/state.hpp"

namespace sdd {

/// Cell-wise goal distances: breadth-first hop count from the goal cell
/// times cell_size, over free cells. 8-connected on planar maps,
/// 26-connected on volumetric ones. Diagonal hops are charged the same
/// cell_size as straight hops, which keeps the field a lower bound on
/// traversed path length. Blocked or unreachable cells hold +inf.
struct DistanceField {
    int width = 0;
    int height = 0;
    int depth = 1;
    double cell_size = 1.0;
    int goal_ix = 0, goal_iy = 0, goal_iz = 0;
    std::vector<double> value;

    double at(int ix, int iy, int iz) const {
        return value[(static_cast<std::size_t>(iz) * height + iy) * width + ix];
    }
};

/// Flood from the cell containing goal_pos. Throws std::invalid_argument
/// when that cell is out of bounds or blocked.
DistanceField build_distance_field(const GridMap& map, const std::array<double, 3>& goal_pos);

/// Field value of the cell containing s's position; +inf outside the map.
/// Heading and speed do not participate.
double h_value(const DistanceField& field, const StateC& s);

}  // namespace sdd
