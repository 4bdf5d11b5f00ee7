#pragma once

#include <vector>

#include "sdd/state.hpp"

namespace sdd {

/// One control held constant for a primitive duration.
/// Car3 uses omega only; Uav5 uses all three fields.
struct ControlInput {
    double omega = 0.0;
    double a_xy = 0.0;
    double v_z = 0.0;
};

/// A forward-simulated motion edge. samples[0] is one sub-step past the
/// source state and samples.back() is the endpoint; the source itself is
/// not included. cost is the traversed position path length.
struct MotionPrimitive {
    ControlInput control;
    double duration = 0.0;
    std::vector<StateC> samples;
    double cost = 0.0;
};

struct Successor {
    StateC state;
    MotionPrimitive primitive;
};

struct Car3Params {
    double speed = 1.0;           // constant forward speed [m/s]
    double turn_radius = 3.0;     // minimum turning radius at omega_max [m]
    double primitive_duration = 1.0;
    double substep = 0.1;
};

struct Uav5Params {
    double v_min = 0.5;
    double v_max = 3.0;
    double a_max = 1.0;
    double vz_max = 0.5;
    double omega_max = kPi / 4.0;
    double primitive_duration = 1.0;
    double substep = 0.1;
};

/// Kinodynamic model: a fixed discrete control set applied over a fixed
/// duration. Car3 is a constant-speed unicycle with 5 turn rates; Uav5
/// adds altitude and speed control on a 3x3x3 control grid (27).
class DynamicsModel {
public:
    static DynamicsModel car3(const Car3Params& params = {});
    static DynamicsModel uav5(const Uav5Params& params = {});

    ModelKind kind() const { return kind_; }
    int branching() const { return static_cast<int>(controls_.size()); }
    const std::vector<ControlInput>& control_set() const { return controls_; }
    double primitive_duration() const { return duration_; }
    double substep() const { return substep_; }
    const Car3Params& car_params() const { return car_; }
    const Uav5Params& uav_params() const { return uav_; }
    double omega_max() const;

    /// Exact forward simulation of the control over dt. Heading wraps to
    /// [0, 2*pi); Uav5 planar speed is clamped to its bounds throughout.
    /// Throws std::invalid_argument for out-of-bounds controls or dt <= 0.
    StateC propagate(const StateC& s, const ControlInput& u, double dt) const;

    /// Primitive rooted at s: intermediate poses every sub-step plus the
    /// endpoint, with the traversed path length as cost.
    MotionPrimitive make_primitive(const StateC& s, const ControlInput& u) const;

    /// One primitive per control in the control set, in control-set order.
    /// Collision state is not considered here.
    std::vector<Successor> successors(const StateC& s) const;

private:
    struct CanonicalPrim {
        std::vector<StateC> samples;  // rooted at the origin pose
        double cost = 0.0;
    };

    void validate_control(const ControlInput& u) const;
    MotionPrimitive primitive_from_origin(const StateC& s, const ControlInput& u) const;

    ModelKind kind_ = ModelKind::kCar3;
    std::vector<ControlInput> controls_;
    double duration_ = 1.0;
    double substep_ = 0.1;
    Car3Params car_{};
    Uav5Params uav_{};
    std::vector<CanonicalPrim> canonical_;  // Car3 only: body-frame primitives
};

}  // namespace sdd
