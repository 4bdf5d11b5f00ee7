#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "sdd/subtree.hpp"

namespace sdd {

/// Precomputed subtree-overlap values over a lattice of relative
/// configurations. Keys are per-dimension integer indices: positions at
/// multiples of their resolution inside the R-ball, heading in
/// round(2*pi / res_theta) bins, and (Uav5) both absolute speeds on the
/// speed lattice. Storage is dense over the bounding box with NaN for
/// cells outside the ball; the on-disk format keeps only stored entries.
class OverlapTable {
public:
    ModelKind kind() const { return kind_; }
    const OverlapParams& params() const { return params_; }
    int dims() const { return ndims_; }
    std::uint64_t entry_count() const { return entry_count_; }

    /// Integer key of a relative configuration, by round-to-nearest. The
    /// position part may fall outside the stored domain; heading and
    /// speed indices are always canonical.
    std::array<int, 6> key_of(const RelConfig& rc) const;

    /// Stored value at a key, or NaN when the key is absent.
    float at_key(const std::array<int, 6>& key) const;

    /// Overlap estimate for the pair (s, s2): round the relative
    /// configuration to the lattice and read the stored value. A query
    /// just outside the position ball falls back to the nearest stored
    /// key with the same heading/speed indices; no extrapolation.
    double lookup(const StateC& s, const StateC& s2) const;
    double lookup_rel(const RelConfig& rc) const;

    /// Ceiling on what any lookup can return for a pair at planar
    /// relative distance >= dist, padded by the snap radius so rounding
    /// and the out-of-ball fallback stay covered. Nonincreasing in dist;
    /// lets duplicity scans stop early without changing their result.
    double eta_ceiling(double dist) const;

    void save(const std::string& path) const;
    static OverlapTable load(const std::string& path);

    friend OverlapTable precompute_table(const DynamicsModel& model,
                                         const OverlapParams& params, int threads);

private:
    std::size_t flat_index(const std::array<int, 6>& key) const;
    bool key_in_box(const std::array<int, 6>& key) const;
    void build_radial_ceiling();

    ModelKind kind_ = ModelKind::kCar3;
    OverlapParams params_{};
    int ndims_ = 0;
    std::array<int, 6> lo_{};   // lowest index per dimension
    std::array<int, 6> n_{};    // index count per dimension
    std::vector<float> dense_;  // NaN = not stored
    std::uint64_t entry_count_ = 0;
    std::vector<float> radial_ceiling_;  // derived, never serialized
    double radial_width_ = 0.0;
};

/// Enumerate every lattice key whose position offset has norm <= R and
/// store the subtree overlap between a canonical origin state and the
/// realized key state. Embarrassingly parallel over position points;
/// threads == 0 uses the hardware concurrency.
OverlapTable precompute_table(const DynamicsModel& model, const OverlapParams& params,
                              int threads = 0);

}  // namespace sdd
