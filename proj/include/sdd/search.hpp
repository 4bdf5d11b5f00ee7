#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sdd/distance_field.hpp"
#include "sdd/duplicity.hpp"
#include "sdd/dynamics.hpp"
#include "sdd/grid_map.hpp"

namespace sdd {

/// Position ball that ends a search; heading and speed are free.
struct GoalRegion {
    std::array<double, 3> center{};
    double radius = 0.5;
};

struct SearchLimits {
    double timeout_sec = 120.0;
    std::uint64_t node_budget = 5'000'000;  // cap on generation events
};

struct SearchStats {
    std::uint64_t expansions = 0;          // states popped and expanded
    std::uint64_t subtree_expansions = 0;  // successor calls made only for online overlap
    std::uint64_t generated = 0;           // collision-free successor instances
    std::uint64_t g_tested = 0;            // instances reaching the g-improvement test
    double wall_time = 0.0;
    bool success = false;
    std::string status;    // "solved", "budget", "timeout", "exhausted"
    double eps_lo = 0.0;   // observed inflation range over assigned states
    double eps_hi = 0.0;
};

struct Solution {
    std::vector<StateC> path;                // start through goal, inclusive
    std::vector<MotionPrimitive> primitives; // path.size() - 1 edges
    double cost = 0.0;
    SearchStats stats;
    std::vector<std::array<double, 3>> expansion_log;  // filled when requested
};

struct SearchOptions {
    DuplicityParams dup{};
    SearchLimits limits{};
    bool log_expansions = false;
};

/// Open-list ordering: lower f first, then higher g, then earlier
/// insertion. Returns true when a orders before b.
bool open_order_before(double f_a, double g_a, std::uint64_t seq_a,
                       double f_b, double g_b, std::uint64_t seq_b);

/// Weighted A* over the motion-primitive lattice with per-state
/// heuristic inflation from the configured duplicity measure. States are
/// never pruned: duplicity only reorders the open list. Throws
/// std::invalid_argument when the start state or goal center is invalid.
Solution plan(const DynamicsModel& model, const GridMap& map, const StateC& start,
              const GoalRegion& goal, const SearchOptions& options);

}  // namespace sdd
