#include "navkit/core_math.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace navkit {

Vec2 Pose::heading() const { return unit_from_angle(theta); }

void RobotLimits::validate() const {
    if (!(v_min >= 0.0) || !(v_min < v_max)) {
        throw std::invalid_argument("robot limits: need 0 <= v_min < v_max");
    }
    if (!(u_max > 0.0)) {
        throw std::invalid_argument("robot limits: need u_max > 0");
    }
}

bool ControlInput::within(const RobotLimits& limits, double tol) const {
    return v >= limits.v_min - tol && v <= limits.v_max + tol && std::abs(u) <= limits.u_max + tol;
}

void DiffDriveParams::validate() const {
    if (!(axle_half_length > 0.0) || !(wheel_radius > 0.0) || !(wheel_speed_limit > 0.0)) {
        throw std::invalid_argument("differential drive parameters must be strictly positive");
    }
}

double wrap_angle(double a) {
    if (!std::isfinite(a)) {
        throw std::domain_error("wrap_angle: non-finite angle");
    }
    double r = std::remainder(a, kTwoPi);
    if (r <= -kPi) {
        r += kTwoPi;
    }
    return r;
}

double ccw_angle_from_to(const Vec2& r1, const Vec2& r2) {
    if (r1.squared_norm() == 0.0 || r2.squared_norm() == 0.0) {
        throw std::invalid_argument("ccw_angle_from_to: zero vector");
    }
    double g = std::atan2(cross(r1, r2), dot(r1, r2));
    if (g <= -kPi) {
        g = kPi;
    }
    return g;
}

int turn_sign(const Vec2& r1, const Vec2& r2) {
    return sign_of(ccw_angle_from_to(r1, r2));
}

double min_turn_radius(double v, double u_max) {
    if (!(u_max > 0.0)) {
        throw std::invalid_argument("min_turn_radius: u_max must be positive");
    }
    if (v < 0.0) {
        throw std::invalid_argument("min_turn_radius: negative speed");
    }
    return v / u_max;
}

Pose integrate_step(const Pose& p, const ControlInput& c, double dt) {
    if (!(dt > 0.0)) {
        throw std::invalid_argument("integrate_step: dt must be positive");
    }
    // Chord form of the constant-(v, u) arc; stable as u -> 0.
    const double half = 0.5 * c.u * dt;
    const double sinc = std::abs(half) < 1e-4 ? 1.0 - half * half / 6.0 : std::sin(half) / half;
    const double chord = c.v * dt * sinc;
    Pose out;
    out.x = p.x + chord * std::cos(p.theta + half);
    out.y = p.y + chord * std::sin(p.theta + half);
    out.theta = c.u == 0.0 ? p.theta : wrap_angle(p.theta + c.u * dt);
    return out;
}

WheelSpeeds diff_drive_from_unicycle(const ControlInput& c, const DiffDriveParams& p) {
    p.validate();
    const double limit = p.wheel_radius * p.wheel_speed_limit;
    const double demand = std::abs(c.v) + p.axle_half_length * std::abs(c.u);
    if (demand > limit * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "diff drive constraint |v| + L|u| <= R_w*Omega violated by " << (demand - limit) << " m/s";
        throw std::out_of_range(msg.str());
    }
    return {(c.v - p.axle_half_length * c.u) / p.wheel_radius,
            (c.v + p.axle_half_length * c.u) / p.wheel_radius};
}

ControlInput unicycle_from_diff_drive(const WheelSpeeds& w, const DiffDriveParams& p) {
    const double vl = p.wheel_radius * w.left;
    const double vr = p.wheel_radius * w.right;
    return {(vl + vr) / 2.0, (vr - vl) / (2.0 * p.axle_half_length)};
}

}  // namespace navkit
