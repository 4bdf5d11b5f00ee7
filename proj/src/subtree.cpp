#include "sdd/subtree.hpp"

#include <cmath>

namespace sdd {

std::vector<double> default_resolutions(ModelKind kind) {
    if (kind == ModelKind::kCar3) return {0.25, 0.25, kPi / 8.0};
    return {0.25, 0.25, 0.25, kPi / 8.0, 0.5, 0.5};
}

Subtree build_subtree(const DynamicsModel& model, const StateC& s, int H,
                      std::uint64_t* expansion_counter) {
    if (H < 1) throw std::invalid_argument("subtree depth must be at least 1");
    Subtree tree;
    tree.root = s;
    tree.levels.resize(H);
    const std::vector<StateC>* frontier = nullptr;
    std::vector<StateC> root_level{s};
    frontier = &root_level;
    for (int d = 0; d < H; ++d) {
        std::vector<StateC>& level = tree.levels[d];
        level.reserve(frontier->size() * model.branching());
        for (const StateC& parent : *frontier) {
            if (expansion_counter) ++*expansion_counter;
            for (const Successor& suc : model.successors(parent))
                level.push_back(suc.state);
        }
        frontier = &level;
    }
    return tree;
}

namespace {

inline bool within_r(const StateC& a, const StateC& b, const OverlapParams& p) {
    if (p.full_state_overlap) return distance(a, b, p.weights) < p.r;
    return position_distance(a, b) < p.r;
}

}  // namespace

double overlap_ratio(const Subtree& a, const Subtree& b, const OverlapParams& params) {
    if (a.levels.size() != b.levels.size())
        throw std::invalid_argument("subtrees have different depths");
    std::size_t matched = 0;
    for (std::size_t d = 0; d < a.levels.size(); ++d) {
        for (const StateC& u : a.levels[d]) {
            for (const StateC& u2 : b.levels[d]) {
                if (within_r(u, u2, params)) {
                    ++matched;
                    break;
                }
            }
        }
    }
    const std::size_t total = a.total();
    if (total == 0) return 0.0;
    return static_cast<double>(matched) / static_cast<double>(total);
}

double subtree_overlap(const DynamicsModel& model, const StateC& s, const StateC& s2,
                       const OverlapParams& params, std::uint64_t* expansion_counter) {
    const Subtree a = build_subtree(model, s, params.H, expansion_counter);
    const Subtree b = build_subtree(model, s2, params.H, expansion_counter);
    return overlap_ratio(a, b, params);
}

}  // namespace sdd
