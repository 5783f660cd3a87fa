#pragma once

#include <map>
#include <optional>
#include <utility>

#include "navkit/checks.hpp"
#include "navkit/navigator.hpp"
#include "navkit/sensing.hpp"
#include "navkit/steering.hpp"

namespace navkit {

struct BinaParams {
    double alpha0{kPi / 3.5};  ///< avoiding angle
    double c{3.0};             ///< trigger distance C
    double d_safe{0.5};
    double v_obstacle{0.5};  ///< V, bound on obstacle speeds
    RobotLimits limits{0.0, 1.0, 1.0};
    double max_range{kDefaultMaxRange};
    double align_tol{kAlignTolerance};

    void validate() const;
};

struct BinaMode {
    enum class Kind { Pursuit, Avoid };
    Kind kind{Kind::Pursuit};
    int obstacle_id{-1};
    double entered_at{0.0};

    bool avoiding() const { return kind == Kind::Avoid; }
};

/// (beta1, beta2) = (alpha1 - alpha0, alpha2 + alpha0), wrapped.
std::pair<double, double> enlarge_cone(const VisionConeReading& reading, double alpha0);

/// l_j = (V_max - V) (cos beta_j, sin beta_j). Throws unless V < V_max.
std::pair<Vec2, Vec2> occlusion_vectors(double beta1, double beta2, double v_max, double v_obstacle);

/// 1 or 2: the candidate v_obs + l_j closest in angle to v_robot. Ties give 1.
int select_boundary(Vec2 l1, Vec2 l2, Vec2 v_obs, Vec2 v_robot);

/// Avoidance command toward v_obs + l_h. With `period` > 0 the turn is
/// sampled (see sampled_turn) and `lead` is added to the heading error, so
/// a reference rotating by `lead` per tick is tracked without lag;
/// otherwise u is u_max times the turn sign. `h` defaults to select_boundary.
ControlInput avoid_control(const VisionConeReading& reading, const BinaParams& params, Vec2 v_robot,
                           std::optional<int> h = std::nullopt, double period = 0.0, double lead = 0.0);

/// Direction of v_obs + l_h.
double avoid_direction(const VisionConeReading& reading, const BinaParams& params, int h);

ControlInput pursuit_control(const BinaParams& params, double h, double theta, double period = 0.0);

/// R_i / cos(alpha0) - R_i.
double avoidance_offset(double radius, double alpha0);

/// Pursuit -> Avoid when d < d_prev and d <= C. Avoid -> Pursuit when
/// d <= 1.1 a_i and the robot is aligned with the target (|wrap(theta - H)|
/// within tolerance unless `aligned` overrides).
BinaMode switch_mode(const BinaMode& mode, double d, std::optional<double> d_prev, double theta, double h,
                     const BinaParams& params, double a_i, double t = 0.0, int obstacle_id = -1,
                     std::optional<bool> aligned = std::nullopt);

/// F_i = (V_i + V_max) R_i / ((R_i + d_safe)^2 sqrt(1 - R_i^2 / (R_i + d_safe)^2)).
double turn_demand(double radius, double v_obstacle, double v_max, double d_safe);

/// Per-obstacle and pairwise conditions on the controller parameters.
/// Non-disc obstacles are reported as not covered. Distances between moving
/// sets are minimised over [0, horizon].
ValidationReport validate_bina(const Environment& env, Vec2 target, const BinaParams& params, double horizon);

class BinaController : public Navigator {
public:
    explicit BinaController(BinaParams params);

    NavDecision decide(const NavContext& ctx) override;
    std::string name() const override { return "bina"; }

    const BinaMode& mode() const { return mode_; }

private:
    BinaParams params_;
    BinaMode mode_;
    int boundary_{1};
    std::optional<double> prev_direction_;
    double offset_{0.0};
    std::map<int, double> prev_d_;
    AlignmentTracker aligned_;
};

}  // namespace navkit
