#include "sdd/search.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <queue>
#include <unordered_map>

namespace sdd {
namespace {

// Bitwise state identity: two states are the same search node only when
// every coordinate matches exactly.
struct StateKey {
    std::array<std::uint64_t, 5> bits;
    bool operator==(const StateKey& o) const { return bits == o.bits; }
};

StateKey key_of(const StateC& s) {
    StateKey k;
    const double vals[5] = {s.x, s.y, s.z, s.theta, s.v};
    std::memcpy(k.bits.data(), vals, sizeof(vals));
    return k;
}

struct StateKeyHash {
    std::size_t operator()(const StateKey& k) const {
        std::uint64_t h = 0x9e3779b97f4a7c15ull;
        for (std::uint64_t b : k.bits) {
            h ^= b + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
            h *= 0xff51afd7ed558ccdull;
        }
        return static_cast<std::size_t>(h);
    }
};

struct Node {
    StateC state;
    double g = kInf;
    double h = 0.0;
    double eps = 1.0;
    std::uint32_t parent = UINT32_MAX;
    std::int32_t control = -1;
};

struct HeapEntry {
    double f;
    double g;
    std::uint64_t seq;
    std::uint32_t node;
};

struct HeapCmp {
    // priority_queue pops its "largest" element, so compare reversed.
    bool operator()(const HeapEntry& a, const HeapEntry& b) const {
        return open_order_before(b.f, b.g, b.seq, a.f, a.g, a.seq);
    }
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

bool open_order_before(double f_a, double g_a, std::uint64_t seq_a,
                       double f_b, double g_b, std::uint64_t seq_b) {
    if (f_a != f_b) return f_a < f_b;
    if (g_a != g_b) return g_a > g_b;
    return seq_a < seq_b;
}

Solution plan(const DynamicsModel& model, const GridMap& map, const StateC& start,
              const GoalRegion& goal, const SearchOptions& options) {
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    options.dup.validate(model.kind());
    if (start.kind != model.kind())
        throw std::invalid_argument("start state kind does not match model");
    if (!state_valid(map, start))
        throw std::invalid_argument("start state is not collision-free");

    Solution sol;
    SearchStats& stats = sol.stats;
    stats.eps_lo = kInf;
    stats.eps_hi = 0.0;

    const DistanceField field = build_distance_field(map, goal.center);
    const int pos_dims = map.depth == 1 ? 2 : 3;

    auto finish = [&](const char* status, bool success) -> Solution& {
        stats.status = status;
        stats.success = success;
        stats.wall_time = elapsed();
        if (stats.eps_lo > stats.eps_hi) {  // no state ever assigned
            stats.eps_lo = 0.0;
            stats.eps_hi = 0.0;
        }
        return sol;
    };

    std::vector<Node> nodes;
    std::unordered_map<StateKey, std::uint32_t, StateKeyHash> index;
    SeenSet seen(pos_dims);
    std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapCmp> open;
    std::uint64_t push_seq = 0;

    auto note_eps = [&](double eps) {
        stats.eps_lo = std::min(stats.eps_lo, eps);
        stats.eps_hi = std::max(stats.eps_hi, eps);
    };

    // The start keeps its own valid-successor ratio: it has no parent.
    const double start_gamma = valid_successor_ratio(map, model, start);
    {
        Node root;
        root.state = start;
        root.g = 0.0;
        root.h = h_value(field, start);
        root.eps = inflation(duplicity(model, start, seen, start_gamma, options.dup,
                                       &stats.subtree_expansions),
                             options.dup);
        note_eps(root.eps);
        nodes.push_back(root);
        index.emplace(key_of(start), 0u);
        seen.insert(start, start_gamma);
        open.push(HeapEntry{root.g + root.eps * root.h, root.g, push_seq++, 0u});
    }

    if (in_goal(start, goal, pos_dims)) {
        sol.path.push_back(start);
        sol.cost = 0.0;
        return finish("solved", true);
    }

    std::vector<std::pair<StateC, double>> pending_seen;
    while (!open.empty()) {
        const HeapEntry top = open.top();
        open.pop();
        if (top.g != nodes[top.node].g) continue;  // superseded by a cheaper push
        const StateC cur_state = nodes[top.node].state;
        const double cur_g = nodes[top.node].g;

        if (in_goal(cur_state, goal, pos_dims)) {
            // Reconstruct by walking parents, then re-derive each edge.
            std::vector<std::uint32_t> chain;
            for (std::uint32_t id = top.node; id != UINT32_MAX; id = nodes[id].parent)
                chain.push_back(id);
            sol.path.clear();
            sol.primitives.clear();
            sol.cost = 0.0;
            for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
                const Node& n = nodes[*it];
                if (n.control >= 0) {
                    const Node& p = nodes[n.parent];
                    MotionPrimitive prim =
                        model.make_primitive(p.state, model.control_set()[n.control]);
                    const StateC& end = prim.samples.back();
                    if (position_distance(end, n.state) > 1e-9 ||
                        ang_diff(end.theta, n.state.theta) > 1e-9 ||
                        std::fabs(end.v - n.state.v) > 1e-9)
                        throw std::logic_error("broken parent chain in solution");
                    sol.cost += prim.cost;
                    sol.primitives.push_back(std::move(prim));
                }
                sol.path.push_back(n.state);
            }
            return finish("solved", true);
        }

        ++stats.expansions;
        if (options.log_expansions)
            sol.expansion_log.push_back({cur_state.x, cur_state.y, cur_state.z});
        if (options.limits.timeout_sec > 0.0 && elapsed() > options.limits.timeout_sec)
            return finish("timeout", false);

        const std::vector<Successor> succ = model.successors(cur_state);
        std::vector<bool> valid(succ.size());
        int n_valid = 0;
        for (std::size_t i = 0; i < succ.size(); ++i) {
            valid[i] = edge_valid(map, succ[i].primitive);
            if (valid[i]) ++n_valid;
        }
        const double gamma =
            succ.empty() ? 0.0 : static_cast<double>(n_valid) / static_cast<double>(succ.size());

        // Duplicity is judged against the states seen before this
        // expansion started; new successors join the set afterwards.
        pending_seen.clear();
        bool out_of_budget = false;
        for (std::size_t i = 0; i < succ.size() && !out_of_budget; ++i) {
            if (!valid[i]) continue;
            const StateC& next = succ[i].state;
            ++stats.generated;
            if (stats.generated >= options.limits.node_budget) out_of_budget = true;

            std::uint32_t id;
            const StateKey key = key_of(next);
            auto found = index.find(key);
            if (found == index.end()) {
                Node fresh;
                fresh.state = next;
                fresh.h = h_value(field, next);
                fresh.eps = inflation(duplicity(model, next, seen, gamma, options.dup,
                                                &stats.subtree_expansions),
                                      options.dup);
                note_eps(fresh.eps);
                id = static_cast<std::uint32_t>(nodes.size());
                nodes.push_back(fresh);
                index.emplace(key, id);
                pending_seen.emplace_back(next, gamma);
            } else {
                id = found->second;
            }

            Node& child = nodes[id];
            ++stats.g_tested;
            const double tentative = cur_g + succ[i].primitive.cost;
            if (child.g > tentative) {
                child.g = tentative;
                child.parent = top.node;
                child.control = static_cast<std::int32_t>(i);
                open.push(HeapEntry{child.g + child.eps * child.h, child.g, push_seq++, id});
            }
        }
        for (const auto& [s, gamma_parent] : pending_seen)
            seen.insert(s, gamma_parent);
        if (out_of_budget) return finish("budget", false);
    }
    return finish("exhausted", false);
}

}  // namespace sdd
