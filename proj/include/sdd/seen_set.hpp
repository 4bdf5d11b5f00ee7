#pragma once

#include "sdd/kd_tree.hpp"
#include "sdd/state.hpp"

namespace sdd {

/// States already generated by a search, indexed spatially by position.
/// Each entry keeps the full state plus the valid-successor ratio of its
/// parent at the time it was generated.
class SeenSet {
public:
    explicit SeenSet(int position_dims) : tree_(position_dims) {}

    std::uint32_t insert(const StateC& s, double parent_gamma) {
        states_.push_back(s);
        gammas_.push_back(parent_gamma);
        return tree_.insert({s.x, s.y, s.z});
    }

    std::size_t size() const { return states_.size(); }
    const StateC& state(std::uint32_t id) const { return states_[id]; }
    double parent_gamma(std::uint32_t id) const { return gammas_[id]; }

    /// Ids of all entries whose position lies within `radius` of s.
    void radius_query(const StateC& s, double radius, std::vector<std::uint32_t>& out) const {
        tree_.radius_query({s.x, s.y, s.z}, radius, out);
    }

private:
    PointKdTree tree_;
    std::vector<StateC> states_;
    std::vector<double> gammas_;
};

}  // namespace sdd
