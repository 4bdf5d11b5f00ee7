#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sdd/grid_map.hpp"
#include "sdd/search.hpp"

namespace sdd {

/// One start/goal planning instance on a named map.
struct Scenario {
    std::string id;
    std::string map_name;
    StateC start;
    GoalRegion goal;
};

/// Rejection-sample `count` instances: start and goal at centers of free
/// cells drawn uniformly, random heading (and speed for Uav5), at least
/// min_separation apart, and mutually reachable per the goal's
/// breadth-first field. Deterministic in seed. Throws std::runtime_error
/// after 10000 consecutive rejections.
std::vector<Scenario> generate_scenarios(const GridMap& map, const DynamicsModel& model,
                                         const std::string& map_name, int count,
                                         std::uint64_t seed, double min_separation,
                                         double goal_radius);

}  // namespace sdd
