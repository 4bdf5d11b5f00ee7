#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdd/dynamics.hpp"
#include "sdd/state.hpp"

namespace sdd {

/// Parse failure with the 1-based line where it occurred.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Axis-aligned occupancy grid. depth == 1 for planar maps. World
/// coordinates map to cells by flooring x / cell_size, so a point on a
/// cell boundary belongs to the higher-index cell.
struct GridMap {
    int width = 0;
    int height = 0;
    int depth = 1;
    double cell_size = 1.0;
    std::vector<std::uint8_t> blocked;  // indexed (iz * height + iy) * width + ix

    bool in_bounds(int ix, int iy, int iz) const {
        return ix >= 0 && ix < width && iy >= 0 && iy < height && iz >= 0 && iz < depth;
    }
    std::uint8_t& at(int ix, int iy, int iz) {
        return blocked[(static_cast<std::size_t>(iz) * height + iy) * width + ix];
    }
    std::uint8_t at(int ix, int iy, int iz) const {
        return blocked[(static_cast<std::size_t>(iz) * height + iy) * width + ix];
    }
    std::size_t cell_count() const {
        return static_cast<std::size_t>(width) * height * depth;
    }
};

/// Moving AI .map format: "type octile" / "height N" / "width M" / "map"
/// followed by height rows of width characters. '.' and 'G' are free;
/// '@', 'O', 'T', 'W' are blocked. Anything else is a ParseError.
GridMap parse_movingai_map(const std::string& text, double cell_size = 1.0);
std::string serialize_movingai_map(const GridMap& map);

/// Volumetric text format: "voxel W H D cell_size" followed by D slabs of
/// H rows of W characters, using the same character code as .map files.
GridMap parse_voxel_map(const std::string& text);
std::string serialize_voxel_map(const GridMap& map);

/// Load either format from disk, dispatching on the header token.
GridMap load_map_file(const std::string& path, double cell_size = 1.0);

/// A state is valid when its position cell is in bounds and free. Planar
/// maps ignore z; volumetric maps check it like x and y.
bool state_valid(const GridMap& map, const StateC& s);

/// An edge is valid when every sample along the primitive is valid.
bool edge_valid(const GridMap& map, const MotionPrimitive& prim);

/// Fraction of a state's successors whose full edge is collision-free.
double valid_successor_ratio(const GridMap& map, const DynamicsModel& model, const StateC& s);

}  // namespace sdd
