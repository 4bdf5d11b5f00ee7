#include "sdd/kd_tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sdd {

PointKdTree::PointKdTree(int dims) : dims_(dims) {
    if (dims < 2 || dims > 3) throw std::invalid_argument("kd-tree supports 2 or 3 dimensions");
}

double PointKdTree::dist2(const std::array<double, 3>& a, const std::array<double, 3>& b) const {
    double s = 0.0;
    for (int i = 0; i < dims_; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

std::uint32_t PointKdTree::insert(const std::array<double, 3>& p) {
    const auto id = static_cast<std::uint32_t>(points_.size());
    points_.push_back(p);
    const std::size_t pending = points_.size() - built_count_;
    if (pending > std::max<std::size_t>(64, built_count_)) rebuild();
    return id;
}

void PointKdTree::rebuild() {
    built_count_ = points_.size();
    nodes_.clear();
    nodes_.reserve(built_count_);
    std::vector<std::uint32_t> ids(built_count_);
    for (std::size_t i = 0; i < built_count_; ++i) ids[i] = static_cast<std::uint32_t>(i);
    root_ = build_range(ids.data(), ids.size(), 0);
}

std::int32_t PointKdTree::build_range(std::uint32_t* ids, std::size_t count, int depth) {
    if (count == 0) return -1;
    const int axis = depth % dims_;
    const std::size_t mid = count / 2;
    std::nth_element(ids, ids + mid, ids + count, [&](std::uint32_t a, std::uint32_t b) {
        if (points_[a][axis] != points_[b][axis]) return points_[a][axis] < points_[b][axis];
        return a < b;
    });
    const auto node_id = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(Node{ids[mid], -1, -1, static_cast<std::uint8_t>(axis)});
    const std::int32_t left = build_range(ids, mid, depth + 1);
    const std::int32_t right = build_range(ids + mid + 1, count - mid - 1, depth + 1);
    nodes_[node_id].left = left;
    nodes_[node_id].right = right;
    return node_id;
}

void PointKdTree::radius_query(const std::array<double, 3>& p, double radius,
                               std::vector<std::uint32_t>& out) const {
    out.clear();
    if (radius < 0.0) return;
    const double r2 = radius * radius;

    // Iterative traversal; the tree depth is O(log n) after a rebuild.
    std::vector<std::int32_t> stack;
    if (root_ >= 0) stack.push_back(root_);
    while (!stack.empty()) {
        const Node& node = nodes_[stack.back()];
        stack.pop_back();
        const std::array<double, 3>& q = points_[node.point_id];
        if (dist2(p, q) <= r2) out.push_back(node.point_id);
        const double delta = p[node.axis] - q[node.axis];
        if (node.left >= 0 && delta <= radius) stack.push_back(node.left);
        if (node.right >= 0 && delta >= -radius) stack.push_back(node.right);
    }
    for (std::size_t i = built_count_; i < points_.size(); ++i)
        if (dist2(p, points_[i]) <= r2) out.push_back(static_cast<std::uint32_t>(i));
}

std::uint32_t PointKdTree::nearest(const std::array<double, 3>& p, double* dist_out) const {
    std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
    double best2 = std::numeric_limits<double>::infinity();
    auto consider = [&](std::uint32_t id) {
        const double d2 = dist2(p, points_[id]);
        if (d2 < best2 || (d2 == best2 && id < best)) {
            best2 = d2;
            best = id;
        }
    };

    std::vector<std::int32_t> stack;
    if (root_ >= 0) stack.push_back(root_);
    while (!stack.empty()) {
        const Node& node = nodes_[stack.back()];
        stack.pop_back();
        consider(node.point_id);
        const double delta = p[node.axis] - points_[node.point_id][node.axis];
        const std::int32_t near = delta <= 0.0 ? node.left : node.right;
        const std::int32_t far = delta <= 0.0 ? node.right : node.left;
        if (far >= 0 && delta * delta <= best2) stack.push_back(far);
        if (near >= 0) stack.push_back(near);
    }
    for (std::size_t i = built_count_; i < points_.size(); ++i)
        consider(static_cast<std::uint32_t>(i));

    if (dist_out && best != std::numeric_limits<std::uint32_t>::max())
        *dist_out = std::sqrt(best2);
    return best;
}

}  // namespace sdd
