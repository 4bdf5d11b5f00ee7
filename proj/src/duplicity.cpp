#include "sdd/duplicity.hpp"

#include <algorithm>
#include <cmath>

namespace sdd {
namespace {

inline double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

void DuplicityParams::validate(ModelKind kind) const {
    if (!(eps_max >= eps0) || !(eps0 >= 1.0))
        throw std::invalid_argument("inflation bounds require eps_max >= eps0 >= 1");
    if (R <= 0.0) throw std::invalid_argument("duplicity radius R must be positive");
    if (c < 0.0 || c > 1.0) throw std::invalid_argument("overlap crossover c must lie in [0, 1]");
    if (mode == DuplicityMode::kSubtreeTable) {
        if (table == nullptr)
            throw std::invalid_argument("subtree_table mode needs a precomputed table");
        if (table->kind() != kind)
            throw std::invalid_argument("table model does not match the planning model");
    }
}

double dup_euclid(const StateC& s, const SeenSet& seen, double gamma_parent,
                  const DuplicityParams& params) {
    if (gamma_parent <= 0.0) return 0.0;
    thread_local std::vector<std::uint32_t> ids;
    seen.radius_query(s, params.R, ids);
    if (ids.empty()) return 0.0;  // same as d_nn == R * gamma_parent
    double d_nn = kInf;
    for (std::uint32_t id : ids)
        d_nn = std::min(d_nn, distance(s, seen.state(id), params.weights));
    return clamp01(1.0 - d_nn / (params.R * gamma_parent));
}

double dup_subtree_pair(const StateC& s, const StateC& s2, double eta,
                        double gamma_parent, const DuplicityParams& params) {
    if (gamma_parent <= 0.0) return 0.0;
    const double d = distance(s, s2, params.weights);
    const double scaled = d * (1.0 + params.c - eta);
    return clamp01(1.0 - scaled / (params.R * gamma_parent));
}

double dup_subtree_set(const DynamicsModel& model, const StateC& s, const SeenSet& seen,
                       double gamma_parent, const DuplicityParams& params,
                       std::uint64_t* subtree_expansions) {
    if (gamma_parent <= 0.0) return 0.0;
    thread_local std::vector<std::uint32_t> ids;
    seen.radius_query(s, params.R, ids);
    if (ids.empty()) return 0.0;

    if (params.table == nullptr) {
        const Subtree mine = build_subtree(model, s, params.overlap.H, subtree_expansions);
        double worst = 0.0;
        for (std::uint32_t id : ids) {
            const StateC& other = seen.state(id);
            const Subtree theirs =
                build_subtree(model, other, params.overlap.H, subtree_expansions);
            const double eta = overlap_ratio(mine, theirs, params.overlap);
            worst = std::max(worst, dup_subtree_pair(s, other, eta, gamma_parent, params));
        }
        return worst;
    }

    // Table mode scans by rising planar distance and stops once the
    // table's radial overlap ceiling proves no farther pair can beat the
    // best one found. The cap below only grows with distance, so the
    // result is the exact maximum.
    thread_local std::vector<std::pair<double, std::uint32_t>> by_distance;
    by_distance.clear();
    for (std::uint32_t id : ids)
        by_distance.emplace_back(position_distance(s, seen.state(id)), id);
    std::sort(by_distance.begin(), by_distance.end());

    const double denom = params.R * gamma_parent;
    const double w_pos =
        std::min({params.weights.x, params.weights.y, params.weights.z});
    double worst = 0.0;
    for (const auto& [d_pos, id] : by_distance) {
        if (worst > 0.0 && w_pos > 0.0) {
            const double cap =
                1.0 - d_pos * w_pos * (1.0 + params.c - params.table->eta_ceiling(d_pos)) / denom;
            if (cap <= worst) break;
        }
        const StateC& other = seen.state(id);
        const double eta = params.table->lookup(s, other);
        worst = std::max(worst, dup_subtree_pair(s, other, eta, gamma_parent, params));
    }
    return worst;
}

double duplicity(const DynamicsModel& model, const StateC& s, const SeenSet& seen,
                 double gamma_parent, const DuplicityParams& params,
                 std::uint64_t* subtree_expansions) {
    switch (params.mode) {
        case DuplicityMode::kNone:
            return 0.0;
        case DuplicityMode::kEuclidean:
            return dup_euclid(s, seen, gamma_parent, params);
        case DuplicityMode::kSubtreeOnline:
        case DuplicityMode::kSubtreeTable:
            return dup_subtree_set(model, s, seen, gamma_parent, params, subtree_expansions);
    }
    return 0.0;
}

}  // namespace sdd
