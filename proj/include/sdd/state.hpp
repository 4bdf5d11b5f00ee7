#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace sdd {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class ModelKind : std::uint8_t { kCar3 = 0, kUav5 = 1 };

/// Normalize an angle into [0, 2*pi).
inline double wrap_angle(double a) {
    double w = std::fmod(a, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    if (w >= kTwoPi) w = 0.0;  // fmod rounding can land exactly on 2*pi
    return w;
}

/// Unsigned angular separation, in [0, pi].
inline double ang_diff(double a, double b) {
    double d = std::fabs(wrap_angle(a) - wrap_angle(b));
    return std::min(d, kTwoPi - d);
}

/// Signed angular offset b - a, wrapped to (-pi, pi].
inline double ang_diff_signed(double a, double b) {
    double d = std::fmod(b - a, kTwoPi);
    if (d <= -kPi) d += kTwoPi;
    else if (d > kPi) d -= kTwoPi;
    return d;
}

/// A configuration of either model, tagged by kind.
/// Car3 uses (x, y, theta); z and v stay zero.
/// Uav5 uses (x, y, z, theta, v) where v is the planar speed.
struct StateC {
    ModelKind kind = ModelKind::kCar3;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double theta = 0.0;
    double v = 0.0;

    static StateC car(double x, double y, double theta) {
        StateC s;
        s.kind = ModelKind::kCar3;
        s.x = x;
        s.y = y;
        s.theta = theta;
        return s;
    }

    static StateC uav(double x, double y, double z, double theta, double v) {
        StateC s;
        s.kind = ModelKind::kUav5;
        s.x = x;
        s.y = y;
        s.z = z;
        s.theta = theta;
        s.v = v;
        return s;
    }

    int position_dims() const { return kind == ModelKind::kUav5 ? 3 : 2; }
};

/// Per-dimension weights for the state metric. Defaults weigh every
/// dimension equally; a zero weight drops the dimension entirely.
struct Weights {
    double x = 1.0;
    double y = 1.0;
    double z = 1.0;
    double theta = 1.0;
    double v = 1.0;
};

inline void require_same_kind(const StateC& a, const StateC& b) {
    if (a.kind != b.kind)
        throw std::invalid_argument("state kinds differ");
}

/// Weighted euclidean metric over all state dimensions. The heading
/// contributes w.theta * ang_diff, so the result is wrap-aware.
inline double distance(const StateC& a, const StateC& b, const Weights& w = {}) {
    require_same_kind(a, b);
    const double dx = w.x * (a.x - b.x);
    const double dy = w.y * (a.y - b.y);
    const double dt = w.theta * ang_diff(a.theta, b.theta);
    double sq = dx * dx + dy * dy + dt * dt;
    if (a.kind == ModelKind::kUav5) {
        const double dz = w.z * (a.z - b.z);
        const double dv = w.v * (a.v - b.v);
        sq += dz * dz + dv * dv;
    }
    return std::sqrt(sq);
}

/// Euclidean distance over position dimensions only.
inline double position_distance(const StateC& a, const StateC& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    double sq = dx * dx + dy * dy;
    if (a.kind == ModelKind::kUav5 || b.kind == ModelKind::kUav5) {
        const double dz = a.z - b.z;
        sq += dz * dz;
    }
    return std::sqrt(sq);
}

/// Pose of s2 expressed in the body frame of s.
/// Car3: (dx, dy, dtheta). Uav5: (dx, dy, dz, dtheta, v1, v2), carrying
/// the absolute planar speeds of both states.
struct RelConfig {
    std::array<double, 6> q{};
    int dims = 0;
};

inline RelConfig relative_config(const StateC& s, const StateC& s2) {
    require_same_kind(s, s2);
    const double wx = s2.x - s.x;
    const double wy = s2.y - s.y;
    const double ct = std::cos(s.theta);
    const double st = std::sin(s.theta);
    RelConfig rc;
    rc.q[0] = wx * ct + wy * st;
    rc.q[1] = -wx * st + wy * ct;
    if (s.kind == ModelKind::kCar3) {
        rc.q[2] = ang_diff_signed(s.theta, s2.theta);
        rc.dims = 3;
    } else {
        rc.q[2] = s2.z - s.z;
        rc.q[3] = ang_diff_signed(s.theta, s2.theta);
        rc.q[4] = s.v;
        rc.q[5] = s2.v;
        rc.dims = 6;
    }
    return rc;
}

}  // namespace sdd
