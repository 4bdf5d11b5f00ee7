#pragma once

#include <cstdint>

#include "sdd/search.hpp"

namespace sdd {

struct RrtOptions {
    double goal_bias = 0.05;              // probability of sampling the goal center
    std::uint64_t max_iterations = 200'000;
    double timeout_sec = 120.0;
    Weights weights{};                    // metric for nearest-node selection
    bool log_samples = false;             // record sampled positions in expansion_log
};

/// Kinodynamic RRT over the same motion primitives: sample a free state,
/// extend the nearest tree node (weighted metric) with the primitive
/// whose endpoint lands closest to the sample, keeping only collision-
/// free extensions. Goal-biased samples pin the goal center position
/// only, so their distances ignore heading and speed just as the goal
/// region does. Succeeds when a tree node enters the goal region. Fully
/// deterministic for a fixed seed.
Solution plan_rrt(const DynamicsModel& model, const GridMap& map, const StateC& start,
                  const GoalRegion& goal, std::uint64_t seed, const RrtOptions& options);

}  // namespace sdd
