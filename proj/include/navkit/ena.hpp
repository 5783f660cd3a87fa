#pragma once

#include <optional>

#include "navkit/navigator.hpp"
#include "navkit/sensing.hpp"
#include "navkit/steering.hpp"

namespace navkit {

struct EnaParams {
    double gamma{1.0};    ///< 1/s
    double delta{0.3};    ///< m
    double d0{1.5};       ///< standoff
    double c{2.5};        ///< trigger distance C
    double epsilon{0.1};  ///< exit mismatch
    double d_safe{0.5};
    RobotLimits limits{0.0, 1.0, 1.0};
    double avoid_speed{-1.0};  ///< negative: use limits.v_max
    double max_range{kDefaultMaxRange};
    double align_tol{kAlignTolerance};

    void validate() const;
    double saturation() const { return gamma * delta; }
    double speed() const { return avoid_speed < 0.0 ? limits.v_max : avoid_speed; }
};

enum class EnaMode { Pursuit, Avoid };

/// gamma z inside |z| <= delta, gamma delta sgn(z) outside.
double chi(double z, double gamma, double delta);

/// u = u_max sgn(d_dot + chi(d - d0)), v constant.
ControlInput avoid_control(const RangeReading& reading, const EnaParams& params);

ControlInput pursuit_control(const EnaParams& params, double h, double theta, double period = 0.0);

/// Pursuit -> Avoid when d <= C (and, when `require_closing`, d_dot < 0).
/// Avoid -> Pursuit when d <= d0 + epsilon and aligned with the target.
EnaMode switch_mode(EnaMode mode, const RangeReading& reading, double theta, double h, const EnaParams& params,
                    std::optional<bool> aligned = std::nullopt, bool require_closing = false);

class EnaController : public Navigator {
public:
    explicit EnaController(EnaParams params, double period = 0.1);

    NavDecision decide(const NavContext& ctx) override;
    std::string name() const override { return "ena"; }

    EnaMode mode() const { return mode_; }

private:
    EnaParams params_;
    EnaMode mode_{EnaMode::Pursuit};
    RangeSensor sensor_;
    std::optional<double> prev_rate_;
    AlignmentTracker aligned_;
};

}  // namespace navkit
