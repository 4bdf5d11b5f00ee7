#include "sdd/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace sdd {
namespace {

constexpr double kOmegaEps = 1e-12;

// Advance a planar arc segment with constant accel a and turn rate omega
// over tau. Positions integrate (v + a*t) * cos/sin(theta + omega*t) in
// closed form; theta is left unwrapped for the caller.
void advance_arc(double& x, double& y, double& theta, double& v,
                 double a, double omega, double tau) {
    if (tau <= 0.0) return;
    if (std::fabs(omega) < kOmegaEps) {
        const double ds = v * tau + 0.5 * a * tau * tau;
        x += std::cos(theta) * ds;
        y += std::sin(theta) * ds;
    } else if (std::fabs(a) < kOmegaEps) {
        const double t1 = theta + omega * tau;
        x += v / omega * (std::sin(t1) - std::sin(theta));
        y -= v / omega * (std::cos(t1) - std::cos(theta));
        theta = t1;
    } else {
        const double t1 = theta + omega * tau;
        const double v1 = v + a * tau;
        x += (v1 * std::sin(t1) - v * std::sin(theta)) / omega
             + a / (omega * omega) * (std::cos(t1) - std::cos(theta));
        y += (-v1 * std::cos(t1) + v * std::cos(theta)) / omega
             + a / (omega * omega) * (std::sin(t1) - std::sin(theta));
        theta = t1;
    }
    v += a * tau;
}

double path_cost(const StateC& source, const std::vector<StateC>& samples) {
    double cost = 0.0;
    const StateC* prev = &source;
    for (const StateC& s : samples) {
        cost += position_distance(*prev, s);
        prev = &s;
    }
    return cost;
}

}  // namespace

DynamicsModel DynamicsModel::car3(const Car3Params& params) {
    if (params.speed <= 0.0 || params.turn_radius <= 0.0 ||
        params.primitive_duration <= 0.0 || params.substep <= 0.0)
        throw std::invalid_argument("car3 parameters must be positive");
    DynamicsModel m;
    m.kind_ = ModelKind::kCar3;
    m.car_ = params;
    m.duration_ = params.primitive_duration;
    m.substep_ = params.substep;
    const double wmax = params.speed / params.turn_radius;
    for (double f : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
        ControlInput u;
        u.omega = f * wmax;
        m.controls_.push_back(u);
    }
    // Primitives are state-independent in the body frame; build them once
    // at the origin and transform per query.
    StateC origin = StateC::car(0.0, 0.0, 0.0);
    for (const ControlInput& u : m.controls_) {
        MotionPrimitive p = m.primitive_from_origin(origin, u);
        CanonicalPrim c;
        c.samples = std::move(p.samples);
        c.cost = p.cost;
        m.canonical_.push_back(std::move(c));
    }
    return m;
}

DynamicsModel DynamicsModel::uav5(const Uav5Params& params) {
    if (params.v_min <= 0.0 || params.v_max <= params.v_min ||
        params.a_max < 0.0 || params.vz_max < 0.0 || params.omega_max < 0.0 ||
        params.primitive_duration <= 0.0 || params.substep <= 0.0)
        throw std::invalid_argument("uav5 parameters out of range");
    DynamicsModel m;
    m.kind_ = ModelKind::kUav5;
    m.uav_ = params;
    m.duration_ = params.primitive_duration;
    m.substep_ = params.substep;
    for (double fa : {-1.0, 0.0, 1.0})
        for (double fz : {-1.0, 0.0, 1.0})
            for (double fw : {-1.0, 0.0, 1.0}) {
                ControlInput u;
                u.a_xy = fa * params.a_max;
                u.v_z = fz * params.vz_max;
                u.omega = fw * params.omega_max;
                m.controls_.push_back(u);
            }
    return m;
}

double DynamicsModel::omega_max() const {
    return kind_ == ModelKind::kCar3 ? car_.speed / car_.turn_radius
                                     : uav_.omega_max;
}

void DynamicsModel::validate_control(const ControlInput& u) const {
    const double tol = 1e-9;
    if (kind_ == ModelKind::kCar3) {
        if (std::fabs(u.omega) > car_.speed / car_.turn_radius + tol ||
            u.a_xy != 0.0 || u.v_z != 0.0)
            throw std::invalid_argument("control out of bounds for car3");
    } else {
        if (std::fabs(u.omega) > uav_.omega_max + tol ||
            std::fabs(u.a_xy) > uav_.a_max + tol ||
            std::fabs(u.v_z) > uav_.vz_max + tol)
            throw std::invalid_argument("control out of bounds for uav5");
    }
}

StateC DynamicsModel::propagate(const StateC& s, const ControlInput& u, double dt) const {
    if (s.kind != kind_) throw std::invalid_argument("state kind does not match model");
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    validate_control(u);

    StateC out = s;
    if (kind_ == ModelKind::kCar3) {
        double x = s.x, y = s.y, theta = s.theta, v = car_.speed;
        advance_arc(x, y, theta, v, 0.0, u.omega, dt);
        out.x = x;
        out.y = y;
        out.theta = wrap_angle(theta);
        return out;
    }

    double x = s.x, y = s.y, theta = s.theta;
    double v = std::clamp(s.v, uav_.v_min, uav_.v_max);
    double a = u.a_xy;
    double remaining = dt;
    // Split at the instant the speed clamp engages; afterwards the speed
    // holds at the bound and the accel is effectively zero.
    if (a > 0.0 && v < uav_.v_max) {
        const double t_hit = (uav_.v_max - v) / a;
        if (t_hit < remaining) {
            advance_arc(x, y, theta, v, a, u.omega, t_hit);
            v = uav_.v_max;
            remaining -= t_hit;
            a = 0.0;
        }
    } else if (a < 0.0 && v > uav_.v_min) {
        const double t_hit = (uav_.v_min - v) / a;
        if (t_hit < remaining) {
            advance_arc(x, y, theta, v, a, u.omega, t_hit);
            v = uav_.v_min;
            remaining -= t_hit;
            a = 0.0;
        }
    } else if ((a > 0.0 && v >= uav_.v_max) || (a < 0.0 && v <= uav_.v_min)) {
        a = 0.0;
    }
    advance_arc(x, y, theta, v, a, u.omega, remaining);
    out.x = x;
    out.y = y;
    out.z = s.z + u.v_z * dt;
    out.theta = wrap_angle(theta);
    out.v = std::clamp(v, uav_.v_min, uav_.v_max);
    return out;
}

MotionPrimitive DynamicsModel::primitive_from_origin(const StateC& s, const ControlInput& u) const {
    MotionPrimitive p;
    p.control = u;
    p.duration = duration_;
    const int n = std::max<int>(1, static_cast<int>(std::llround(duration_ / substep_)));
    p.samples.reserve(n);
    for (int k = 1; k <= n; ++k) {
        const double t = duration_ * static_cast<double>(k) / static_cast<double>(n);
        p.samples.push_back(propagate(s, u, t));
    }
    p.cost = path_cost(s, p.samples);
    return p;
}

MotionPrimitive DynamicsModel::make_primitive(const StateC& s, const ControlInput& u) const {
    return primitive_from_origin(s, u);
}

std::vector<Successor> DynamicsModel::successors(const StateC& s) const {
    if (s.kind != kind_) throw std::invalid_argument("state kind does not match model");
    std::vector<Successor> out;
    out.reserve(controls_.size());
    if (kind_ == ModelKind::kCar3) {
        const double ct = std::cos(s.theta);
        const double st = std::sin(s.theta);
        for (std::size_t i = 0; i < controls_.size(); ++i) {
            const CanonicalPrim& c = canonical_[i];
            MotionPrimitive p;
            p.control = controls_[i];
            p.duration = duration_;
            p.cost = c.cost;
            p.samples.reserve(c.samples.size());
            for (const StateC& b : c.samples) {
                StateC w = StateC::car(s.x + b.x * ct - b.y * st,
                                       s.y + b.x * st + b.y * ct,
                                       wrap_angle(s.theta + b.theta));
                p.samples.push_back(w);
            }
            Successor suc;
            suc.state = p.samples.back();
            suc.primitive = std::move(p);
            out.push_back(std::move(suc));
        }
        return out;
    }
    for (const ControlInput& u : controls_) {
        Successor suc;
        suc.primitive = make_primitive(s, u);
        suc.state = suc.primitive.samples.back();
        out.push_back(std::move(suc));
    }
    return out;
}

}  // namespace sdd
