#pragma once

#include <numbers>
#include <utility>

#include "navkit/vec2.hpp"

namespace navkit {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Robot configuration. `theta` is kept in (-pi, pi].
struct Pose {
    double x{0.0};
    double y{0.0};
    double theta{0.0};

    Vec2 position() const { return {x, y}; }
    Vec2 heading() const;
};

/// Hard bounds of the unicycle: v in [v_min, v_max], |u| <= u_max.
struct RobotLimits {
    double v_min{0.0};
    double v_max{1.0};
    double u_max{1.0};

    /// Throws std::invalid_argument unless 0 <= v_min < v_max and u_max > 0.
    void validate() const;
};

struct ControlInput {
    double v{0.0};  ///< forward speed, m/s
    double u{0.0};  ///< angular velocity, rad/s

    bool within(const RobotLimits& limits, double tol = 1e-12) const;
};

/// Two-wheel differential drive geometry.
struct DiffDriveParams {
    double axle_half_length{0.275};  ///< L
    double wheel_radius{0.175};      ///< R_w
    double wheel_speed_limit{10.0};  ///< Omega, rad/s

    void validate() const;
};

struct WheelSpeeds {
    double left{0.0};   ///< rad/s
    double right{0.0};  ///< rad/s
};

/// Reduces `a` into (-pi, pi]. Throws std::domain_error on non-finite input.
double wrap_angle(double a);

/// Signed counterclockwise rotation taking the direction of r1 onto r2,
/// in (-pi, pi]. Throws std::invalid_argument on a zero vector.
double ccw_angle_from_to(const Vec2& r1, const Vec2& r2);

/// -1, 0 or +1 following the sign of ccw_angle_from_to; exactly pi maps to +1.
int turn_sign(const Vec2& r1, const Vec2& r2);

/// sign(x) with sign(0) = 0.
constexpr int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

/// Minimal turning radius v / u_max.
double min_turn_radius(double v, double u_max);

/// One sample-and-hold step of the unicycle ODE with (v, u) constant over dt.
/// Exact circular-arc solution, written in chord form so tiny u stays accurate.
Pose integrate_step(const Pose& p, const ControlInput& c, double dt);

/// Wheel angular velocities realising (v, u). Throws
/// std::out_of_range when |v| + L|u| exceeds R_w * Omega.
WheelSpeeds diff_drive_from_unicycle(const ControlInput& c, const DiffDriveParams& p);

/// Inverse of diff_drive_from_unicycle.
ControlInput unicycle_from_diff_drive(const WheelSpeeds& w, const DiffDriveParams& p);

}  // namespace navkit
