#pragma once

#include <cstdint>
#include <vector>

#include "sdd/dynamics.hpp"
#include "sdd/state.hpp"

namespace sdd {

/// Obstacle-free reachability tree of depth H rooted at a state.
/// levels[d] holds the states at depth d+1 (the root is not a level), so
/// level d has branching^(d+1) states and total() is their sum.
struct Subtree {
    StateC root;
    std::vector<std::vector<StateC>> levels;

    std::size_t total() const {
        std::size_t n = 0;
        for (const auto& level : levels) n += level.size();
        return n;
    }
};

/// Controls how two subtrees are compared.
///   H           subtree depth (primitives)
///   r           match radius: a state counts as overlapped when some
///               same-depth state of the other subtree lies within r
///   R           duplicity radius; bounds the precomputed key domain
///   resolutions per-dimension steps of the relative-configuration
///               lattice (position dims, heading, speeds for Uav5)
///   full_state_overlap  include heading/speed in the r-ball test instead
///               of matching on position alone
struct OverlapParams {
    int H = 2;
    double r = 0.25;
    double R = 10.0;
    std::vector<double> resolutions;
    bool full_state_overlap = false;
    Weights weights{};
};

/// Default lattice steps per model: Car3 (0.25, 0.25, pi/8);
/// Uav5 (0.25, 0.25, 0.25, pi/8, 0.5, 0.5).
std::vector<double> default_resolutions(ModelKind kind);

/// Expand every control recursively for H levels, ignoring obstacles.
/// When expansion_counter is given it is incremented once per successor
/// call made (root plus all interior states).
Subtree build_subtree(const DynamicsModel& model, const StateC& s, int H,
                      std::uint64_t* expansion_counter = nullptr);

/// Fraction of states in `a` that have a same-depth state of `b` within
/// distance r. Each state of `a` counts at most once. In [0, 1].
double overlap_ratio(const Subtree& a, const Subtree& b, const OverlapParams& params);

/// Builds both subtrees and compares them.
double subtree_overlap(const DynamicsModel& model, const StateC& s, const StateC& s2,
                       const OverlapParams& params,
                       std::uint64_t* expansion_counter = nullptr);

}  // namespace sdd
