#include "sdd/rrt.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "sdd/kd_tree.hpp"

namespace sdd {
namespace {

struct TreeNode {
    StateC state;
    std::uint32_t parent = UINT32_MAX;
    std::int32_t control = -1;
};

bool in_goal(const StateC& s, const GoalRegion& goal, int pos_dims) {
    const double dx = s.x - goal.center[0];
    const double dy = s.y - goal.center[1];
    double d2 = dx * dx + dy * dy;
    if (pos_dims == 3) {
        const double dz = s.z - goal.center[2];
        d2 += dz * dz;
    }
    return d2 <= goal.radius * goal.radius;
}

}  // namespace

Solution plan_rrt(const DynamicsModel& model, const GridMap& map, const StateC& start,
                  const GoalRegion& goal, std::uint64_t seed, const RrtOptions& options) {
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    if (start.kind != model.kind())
        throw std::invalid_argument("start state kind does not match model");
    if (!state_valid(map, start))
        throw std::invalid_argument("start state is not collision-free");

    Solution sol;
    SearchStats& stats = sol.stats;
    const int pos_dims = map.depth == 1 ? 2 : 3;
    const bool uav = model.kind() == ModelKind::kUav5;

    auto finish = [&](const char* status, bool success) -> Solution& {
        stats.status = status;
        stats.success = success;
        stats.wall_time = elapsed();
        return sol;
    };

    auto reconstruct = [&](const std::vector<TreeNode>& tree, std::uint32_t id) {
        std::vector<std::uint32_t> chain;
        for (std::uint32_t i = id; i != UINT32_MAX; i = tree[i].parent) chain.push_back(i);
        sol.cost = 0.0;
        for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
            const TreeNode& n = tree[*it];
            if (n.control >= 0) {
                MotionPrimitive prim = model.make_primitive(tree[n.parent].state,
                                                            model.control_set()[n.control]);
                sol.cost += prim.cost;
                sol.primitives.push_back(std::move(prim));
            }
            sol.path.push_back(n.state);
        }
    };

    std::vector<TreeNode> tree;
    PointKdTree kd(pos_dims);
    tree.push_back(TreeNode{start, UINT32_MAX, -1});
    kd.insert({start.x, start.y, start.z});
    stats.generated = 1;

    if (in_goal(start, goal, pos_dims)) {
        reconstruct(tree, 0);
        return finish("solved", true);
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double ext_x = map.width * map.cell_size;
    const double ext_y = map.height * map.cell_size;
    const double ext_z = map.depth * map.cell_size;
    const Uav5Params& up = model.uav_params();

    // Goal-biased samples pin the position only: the goal region leaves
    // heading and speed unconstrained, so those terms are dropped from
    // the metric for that iteration.
    Weights pos_only = options.weights;
    pos_only.theta = 0.0;
    pos_only.v = 0.0;

    // Weighted-metric nearest neighbor, exact despite the position-only
    // index: the winner's full distance bounds its position distance, so
    // it must lie within that radius of the position-nearest candidate.
    std::vector<std::uint32_t> candidates;
    auto nearest_weighted = [&](const StateC& sample, const Weights& w) {
        double d_pos = 0.0;
        const std::uint32_t first = kd.nearest({sample.x, sample.y, sample.z}, &d_pos);
        double best = distance(sample, tree[first].state, w);
        std::uint32_t best_id = first;
        kd.radius_query({sample.x, sample.y, sample.z}, best, candidates);
        std::sort(candidates.begin(), candidates.end());
        for (std::uint32_t id : candidates) {
            const double d = distance(sample, tree[id].state, w);
            if (d < best) {
                best = d;
                best_id = id;
            }
        }
        return best_id;
    };

    for (std::uint64_t iter = 0; iter < options.max_iterations; ++iter) {
        if (options.timeout_sec > 0.0 && (iter & 0x3F) == 0 && elapsed() > options.timeout_sec)
            return finish("timeout", false);

        // Sample a collision-free state (or the goal center under bias);
        // draw order is fixed so runs are reproducible by seed.
        StateC sample = start;
        const bool to_goal = unit(rng) < options.goal_bias;
        if (to_goal) {
            sample.x = goal.center[0];
            sample.y = goal.center[1];
            sample.z = uav ? goal.center[2] : 0.0;
            sample.theta = 0.0;  // weightless this iteration
        } else {
            bool free = false;
            for (int tries = 0; tries < 10'000 && !free; ++tries) {
                sample.x = unit(rng) * ext_x;
                sample.y = unit(rng) * ext_y;
                sample.z = uav && map.depth > 1 ? unit(rng) * ext_z : 0.0;
                free = state_valid(map, sample);
            }
            if (!free) return finish("exhausted", false);
            sample.theta = unit(rng) * kTwoPi;
            if (uav) sample.v = up.v_min + unit(rng) * (up.v_max - up.v_min);
        }
        const Weights& w = to_goal ? pos_only : options.weights;

        if (options.log_samples) sol.expansion_log.push_back({sample.x, sample.y, sample.z});

        const std::uint32_t near_id = nearest_weighted(sample, w);
        const StateC near = tree[near_id].state;

        // Best collision-free primitive toward the sample; control-set
        // order breaks ties.
        const std::vector<Successor> succ = model.successors(near);
        double best = kInf;
        std::int32_t best_ctrl = -1;
        for (std::size_t i = 0; i < succ.size(); ++i) {
            const double d = distance(succ[i].state, sample, w);
            if (d < best && edge_valid(map, succ[i].primitive)) {
                best = d;
                best_ctrl = static_cast<std::int32_t>(i);
            }
        }
        ++stats.expansions;
        if (best_ctrl < 0) continue;

        const auto new_id = static_cast<std::uint32_t>(tree.size());
        tree.push_back(TreeNode{succ[best_ctrl].state, near_id, best_ctrl});
        kd.insert({succ[best_ctrl].state.x, succ[best_ctrl].state.y, succ[best_ctrl].state.z});
        ++stats.generated;

        if (in_goal(succ[best_ctrl].state, goal, pos_dims)) {
            reconstruct(tree, new_id);
            return finish("solved", true);
        }
    }
    return finish("budget", false);
}

}  // namespace sdd
