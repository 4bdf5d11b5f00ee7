#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace sdd {

/// Incremental kd-tree over 2- or 3-dimensional points. Points are
/// append-only and identified by insertion order. Inserts land in a
/// linear buffer that queries scan alongside the tree; the tree is
/// rebuilt by median splits once the buffer outgrows it, which keeps
/// queries near O(log n + k) amortized.
class PointKdTree {
public:
    explicit PointKdTree(int dims);

    std::uint32_t insert(const std::array<double, 3>& p);
    std::size_t size() const { return points_.size(); }

    /// Ids of all points with euclidean distance <= radius, in no
    /// particular order.
    void radius_query(const std::array<double, 3>& p, double radius,
                      std::vector<std::uint32_t>& out) const;

    /// Id of the closest point, or UINT32_MAX when empty. Ties resolve
    /// to the lowest id. dist_out (optional) receives the distance.
    std::uint32_t nearest(const std::array<double, 3>& p, double* dist_out = nullptr) const;

    const std::array<double, 3>& point(std::uint32_t id) const { return points_[id]; }

private:
    struct Node {
        std::uint32_t point_id = 0;
        std::int32_t left = -1;
        std::int32_t right = -1;
        std::uint8_t axis = 0;
    };

    void rebuild();
    std::int32_t build_range(std::uint32_t* ids, std::size_t count, int depth);
    double dist2(const std::array<double, 3>& a, const std::array<double, 3>& b) const;

    int dims_;
    std::vector<std::array<double, 3>> points_;
    std::vector<Node> nodes_;
    std::int32_t root_ = -1;
    std::size_t built_count_ = 0;  // points_[0 .. built_count_) are in the tree
};

}  // namespace sdd
