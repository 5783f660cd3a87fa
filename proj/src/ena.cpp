#include "navkit/ena.hpp"

#include <cmath>
#include <stdexcept>

namespace navkit {

void EnaParams::validate() const {
    limits.validate();
    if (!(gamma > 0.0)) throw std::invalid_argument("ena: need gamma > 0");
    if (!(delta > 0.0)) throw std::invalid_argument("ena: need delta > 0");
    if (!(d_safe > 0.0)) throw std::invalid_argument("ena: need d_safe > 0");
    if (!(d0 > d_safe)) throw std::invalid_argument("ena: need d0 > d_safe");
    if (!(epsilon > 0.0)) throw std::invalid_argument("ena: need epsilon > 0");
    if (!(c > d0 + epsilon)) throw std::invalid_argument("ena: need C > d0 + epsilon");
    if (!(saturation() <= limits.v_max)) throw std::invalid_argument("ena: need gamma*delta <= v_max");
}

double chi(double z, double gamma, double delta) {
    if (std::abs(z) <= delta) return gamma * z;
    return gamma * delta * sign_of(z);
}

ControlInput avoid_control(const RangeReading& reading, const EnaParams& params) {
    const double s = reading.d_dot + chi(reading.d - params.d0, params.gamma, params.delta);
    return {params.speed(), params.limits.u_max * sign_of(s)};
}

ControlInput pursuit_control(const EnaParams& params, double h, double theta, double period) {
    const double err = wrap_angle(h - theta);
    ControlInput out{params.limits.v_max, 0.0};
    if (period > 0.0) {
        out.u = sampled_turn(err, params.limits.u_max, period, params.align_tol);
    } else if (std::abs(err) > params.align_tol) {
        out.u = params.limits.u_max * sign_of(err);
    }
    return out;
}

EnaMode switch_mode(EnaMode mode, const RangeReading& reading, double theta, double h, const EnaParams& params,
                    std::optional<bool> aligned, bool require_closing) {
    if (!reading.detected) return EnaMode::Pursuit;
    if (mode == EnaMode::Pursuit) {
        if (reading.d <= params.c && (!require_closing || reading.d_dot < 0.0)) return EnaMode::Avoid;
        return mode;
    }
    const bool is_aligned = aligned.value_or(std::abs(wrap_angle(theta - h)) <= params.align_tol);
    if (reading.d <= params.d0 + params.epsilon && is_aligned) return EnaMode::Pursuit;
    return mode;
}

EnaController::EnaController(EnaParams params, double period)
    : params_(params), sensor_(period, params.max_range), aligned_(params.align_tol) {
    params_.validate();
}

NavDecision EnaController::decide(const NavContext& ctx) {
    RangeReading reading = sensor_.sample(ctx.groups, ctx.pose.position());
    // Two-sample average of the finite-difference rate.
    const double raw = reading.d_dot;
    if (reading.detected && prev_rate_) reading.d_dot = 0.5 * (raw + *prev_rate_);
    prev_rate_ = reading.detected ? std::optional<double>(raw) : std::nullopt;

    const double h = sense_target(ctx.pose, ctx.target).h;
    const double err = wrap_angle(h - ctx.pose.theta);
    const bool aligned = aligned_.update(err);
    const EnaMode before = mode_;
    mode_ = switch_mode(mode_, reading, ctx.pose.theta, h, params_, aligned, true);
    if (before == EnaMode::Avoid && mode_ == EnaMode::Pursuit) aligned_.reset();

    NavDecision out;
    out.engaged = reading.obstacle_id;
    if (mode_ == EnaMode::Avoid) {
        out.mode = "avoid";
        out.control = avoid_control(reading, params_);
    } else {
        out.mode = "pursuit";
        out.control = pursuit_control(params_, h, ctx.pose.theta, ctx.period);
    }
    return out;
}

}  // namespace navkit
