#pragma once

#include <cstdint>

#include "sdd/overlap_table.hpp"
#include "sdd/seen_set.hpp"
#include "sdd/subtree.hpp"

namespace sdd {

enum class DuplicityMode {
    kNone,           // dup == 0; plain weighted A* at eps0
    kEuclidean,      // nearest-neighbor distance against the seen set
    kSubtreeOnline,  // subtree overlap computed on the fly
    kSubtreeTable,   // subtree overlap read from a precomputed table
};

/// Parameters of the duplicity measure and its inflation schedule.
///   R        radius of the seen-set neighborhood (and of the table)
///   c        overlap crossover: eta above c shrinks the effective
///            distance between a pair, eta below c stretches it
///   eps0     floor inflation; eps_max scales with duplicity
struct DuplicityParams {
    DuplicityMode mode = DuplicityMode::kEuclidean;
    double R = 10.0;
    double c = 0.25;
    double eps0 = 1.0;
    double eps_max = 2.0;
    Weights weights{};
    OverlapParams overlap{};
    const OverlapTable* table = nullptr;  // required for kSubtreeTable

    void validate(ModelKind kind) const;
};

/// How duplicate a state is, judged by plain distance: 0 when the
/// nearest seen state is at least R * gamma_parent away (or nothing is
/// within R), rising to 1 at distance 0.
double dup_euclid(const StateC& s, const SeenSet& seen, double gamma_parent,
                  const DuplicityParams& params);

/// Pairwise subtree-aware duplicity: the distance is scaled by
/// (1 + c - eta) before the same falloff as dup_euclid.
double dup_subtree_pair(const StateC& s, const StateC& s2, double eta,
                        double gamma_parent, const DuplicityParams& params);

/// Max pairwise duplicity over the seen states within radius R of s.
/// eta comes from the table when present, otherwise from online subtree
/// construction (counted into subtree_expansions: one per successor
/// call).
double dup_subtree_set(const DynamicsModel& model, const StateC& s, const SeenSet& seen,
                       double gamma_parent, const DuplicityParams& params,
                       std::uint64_t* subtree_expansions = nullptr);

/// Dispatch on params.mode. kNone yields 0.
double duplicity(const DynamicsModel& model, const StateC& s, const SeenSet& seen,
                 double gamma_parent, const DuplicityParams& params,
                 std::uint64_t* subtree_expansions = nullptr);

/// Per-state heuristic inflation: max(eps_max * dup, eps0).
inline double inflation(double dup, const DuplicityParams& params) {
    return std::max(params.eps_max * dup, params.eps0);
}

}  // namespace sdd
