#include "navkit/bina.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace navkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// How one merged group is perceived: through its covering disc while the
// robot is outside that disc, through the exact region otherwise.
struct GroupView {
    const ObstacleGroup* group{nullptr};
    geom::Circle cover;
    bool use_disc{true};
    double d{kInf};
};

GroupView view_of(const ObstacleGroup& g, Vec2 r) {
    GroupView v;
    v.group = &g;
    v.cover = geom::covering_circle(g.region);
    const double to_disc = distance(r, v.cover.center) - v.cover.radius;
    if (to_disc > 0.0) {
        v.d = to_disc;
    } else {
        v.use_disc = false;
        v.d = distance_to_group(g, r).d;
    }
    return v;
}

bool contains_member(const ObstacleGroup& g, int id) {
    return std::find(g.members.begin(), g.members.end(), id) != g.members.end();
}

double min_target_distance(const Environment& env, int id, Vec2 target, double horizon) {
    double best = kInf;
    for (double t = 0.0; t <= horizon + 1e-9; t += 0.1) {
        for (const auto& o : occupied_at(env, t).obstacles) {
            if (o.id == id) best = std::min(best, distance_to_obstacle(o, target));
        }
    }
    return best;
}

}  // namespace

void BinaParams::validate() const {
    limits.validate();
    if (!(alpha0 > 0.0 && alpha0 < kPi / 2.0)) throw std::invalid_argument("bina: need 0 < alpha0 < pi/2");
    if (!(c > 0.0)) throw std::invalid_argument("bina: need C > 0");
    if (!(d_safe > 0.0)) throw std::invalid_argument("bina: need d_safe > 0");
    if (!(v_obstacle < limits.v_max)) throw std::invalid_argument("bina: need V < v_max");
}

std::pair<double, double> enlarge_cone(const VisionConeReading& reading, double alpha0) {
    return {wrap_angle(reading.alpha1 - alpha0), wrap_angle(reading.alpha2 + alpha0)};
}

std::pair<Vec2, Vec2> occlusion_vectors(double beta1, double beta2, double v_max, double v_obstacle) {
    if (!(v_obstacle < v_max)) throw std::invalid_argument("occlusion_vectors: need V < V_max");
    const double s = v_max - v_obstacle;
    return {unit_from_angle(beta1) * s, unit_from_angle(beta2) * s};
}

int select_boundary(Vec2 l1, Vec2 l2, Vec2 v_obs, Vec2 v_robot) {
    const double g1 = std::abs(ccw_angle_from_to(v_obs + l1, v_robot));
    const double g2 = std::abs(ccw_angle_from_to(v_obs + l2, v_robot));
    return g2 < g1 ? 2 : 1;
}

ControlInput avoid_control(const VisionConeReading& reading, const BinaParams& params, Vec2 v_robot,
                           std::optional<int> h, double period, double lead) {
    const auto [b1, b2] = enlarge_cone(reading, params.alpha0);
    const auto [l1, l2] = occlusion_vectors(b1, b2, params.limits.v_max, params.v_obstacle);
    const int side = h.value_or(select_boundary(l1, l2, reading.v_obs, v_robot));
    const Vec2 want = reading.v_obs + (side == 1 ? l1 : l2);
    ControlInput out;
    out.v = std::clamp(want.norm(), params.limits.v_min, params.limits.v_max);
    if (want.squared_norm() == 0.0) return out;
    const double err = ccw_angle_from_to(v_robot, want);
    if (period > 0.0) {
        out.u = sampled_turn(err + lead, params.limits.u_max, period, 0.0);
    } else {
        out.u = params.limits.u_max * sign_of(err);
    }
    return out;
}

double avoid_direction(const VisionConeReading& reading, const BinaParams& params, int h) {
    const auto [b1, b2] = enlarge_cone(reading, params.alpha0);
    const auto [l1, l2] = occlusion_vectors(b1, b2, params.limits.v_max, params.v_obstacle);
    return (reading.v_obs + (h == 1 ? l1 : l2)).bearing();
}

ControlInput pursuit_control(const BinaParams& params, double h, double theta, double period) {
    const double err = wrap_angle(h - theta);
    ControlInput out{params.limits.v_max, 0.0};
    if (period > 0.0) {
        out.u = sampled_turn(err, params.limits.u_max, period, params.align_tol);
    } else if (std::abs(err) > params.align_tol) {
        out.u = params.limits.u_max * sign_of(err);
    }
    return out;
}

double avoidance_offset(double radius, double alpha0) { return radius / std::cos(alpha0) - radius; }

BinaMode switch_mode(const BinaMode& mode, double d, std::optional<double> d_prev, double theta, double h,
                     const BinaParams& params, double a_i, double t, int obstacle_id, std::optional<bool> aligned) {
    if (!mode.avoiding()) {
        if (d_prev && d < *d_prev && d <= params.c) return {BinaMode::Kind::Avoid, obstacle_id, t};
        return mode;
    }
    const bool is_aligned = aligned.value_or(std::abs(wrap_angle(theta - h)) <= params.align_tol);
    if (d <= 1.1 * a_i && is_aligned) return {};
    return mode;
}

double turn_demand(double radius, double v_obstacle, double v_max, double d_safe) {
    const double rd = radius + d_safe;
    return (v_obstacle + v_max) * radius / (rd * rd * std::sqrt(1.0 - radius * radius / (rd * rd)));
}

ValidationReport validate_bina(const Environment& env, Vec2 target, const BinaParams& params, double horizon) {
    ValidationReport report;
    const double vmax = params.limits.v_max;
    const double umax = params.limits.u_max;
    const PairwiseDistances pd = pairwise_min_distance(env, horizon);
    const auto component = merged_components(pd, env.interpolation_gap);
    const std::size_t n = pd.ids.size();
    auto merged = [&](std::size_t i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i && component[j] == component[i]) return true;
        }
        return false;
    };
    struct DiscInfo {
        std::size_t index;
        double f;
    };
    std::vector<DiscInfo> discs;
    for (std::size_t i = 0; i < n; ++i) {
        const Obstacle& o = *std::find_if(env.obstacles.begin(), env.obstacles.end(),
                                          [&](const Obstacle& x) { return x.id == pd.ids[i]; });
        const std::string who = "obstacle " + std::to_string(o.id);
        const auto* disc = std::get_if<DiscShape>(&o.shape);
        if (!disc) {
            report.push_back(not_covered("disc coverage", who, "not covered by the disc-obstacle theorem"));
            continue;
        }
        if (merged(i)) {
            report.push_back(not_covered("cluster coverage", who, "merges with a neighbour; pair spacing not checked"));
        }
        const double r = disc->radius;
        const double vi = max_point_speed(o);
        const double f = turn_demand(r, vi, vmax, params.d_safe);
        const double a = avoidance_offset(r, params.alpha0);
        const double lead = umax > f ? kPi * vmax / (umax - f) : kInf;
        report.push_back(make_check("obstacle speed V_i < V_max", who, vmax, vi, true));
        report.push_back(make_check("u_max > F_i", who, umax, f, true));
        report.push_back(make_check("C >= pi V_max/(u_max - F_i) + 1.1 a_i", who, params.c, lead + 1.1 * a, false));
        report.push_back(make_check("alpha0 >= arccos(R_i/(R_i + d_safe))", who, params.alpha0,
                                    std::acos(r / (r + params.d_safe)), false));
        report.push_back(make_check("target distance >= 1.1 a_i", who,
                                    min_target_distance(env, o.id, target, horizon), 1.1 * a, false));
        discs.push_back({i, f});
    }
    for (std::size_t i = 0; i < discs.size(); ++i) {
        for (std::size_t j = i + 1; j < discs.size(); ++j) {
            if (component[discs[i].index] == component[discs[j].index]) continue;
            const double f = std::max(discs[i].f, discs[j].f);
            const double lead = umax > f ? kPi * vmax / (umax - f) : kInf;
            report.push_back(make_check("Dist_ij >= 2C + pi V_max/(u_max - F)",
                                        "obstacles " + std::to_string(pd.ids[discs[i].index]) + "," +
                                            std::to_string(pd.ids[discs[j].index]),
                                        pd.at(discs[i].index, discs[j].index), 2.0 * params.c + lead, false));
        }
    }
    return report;
}

BinaController::BinaController(BinaParams params) : params_(params), aligned_(params.align_tol) {
    params_.validate();
}

NavDecision BinaController::decide(const NavContext& ctx) {
    const Vec2 r = ctx.pose.position();
    const double h_target = sense_target(ctx.pose, ctx.target).h;
    const double err = wrap_angle(h_target - ctx.pose.theta);

    std::vector<GroupView> views;
    for (const auto& g : ctx.groups) {
        GroupView v = view_of(g, r);
        if (v.d <= params_.max_range) views.push_back(v);
    }

    const GroupView* nearest_trigger = nullptr;
    for (const auto& v : views) {
        const auto it = prev_d_.find(v.group->key);
        const std::optional<double> prev = it == prev_d_.end() ? std::nullopt : std::optional<double>(it->second);
        const BinaMode next = switch_mode({}, v.d, prev, ctx.pose.theta, h_target, params_, 0.0);
        if (next.avoiding() && (!nearest_trigger || v.d < nearest_trigger->d)) nearest_trigger = &v;
    }

    const GroupView* engaged = nullptr;
    if (mode_.avoiding()) {
        for (const auto& v : views) {
            if (contains_member(*v.group, mode_.obstacle_id)) engaged = &v;
        }
        const bool aligned = aligned_.update(err);
        if (!engaged) {
            mode_ = {};
        } else {
            mode_ = switch_mode(mode_, engaged->d, std::nullopt, ctx.pose.theta, h_target, params_, offset_, ctx.t,
                                mode_.obstacle_id, aligned);
            if (!mode_.avoiding()) engaged = nullptr;
        }
        // Engage the nearest of several threatening groups.
        if (mode_.avoiding() && nearest_trigger && nearest_trigger->d < engaged->d &&
            nearest_trigger->group->key != engaged->group->key) {
            engaged = nearest_trigger;
            mode_ = {BinaMode::Kind::Avoid, engaged->group->key, ctx.t};
            boundary_ = 0;
        }
    } else if (nearest_trigger) {
        engaged = nearest_trigger;
        mode_ = {BinaMode::Kind::Avoid, engaged->group->key, ctx.t};
        boundary_ = 0;
        aligned_.reset();
        aligned_.update(err);
    }

    prev_d_.clear();
    for (const auto& v : views) prev_d_[v.group->key] = v.d;

    NavDecision out;
    if (!mode_.avoiding()) {
        prev_direction_.reset();
        out.mode = "pursuit";
        out.control = pursuit_control(params_, h_target, ctx.pose.theta, ctx.period);
        return out;
    }

    const ObstacleGroup& g = *engaged->group;
    const ObstacleGroup before = make_group(occupied_at(ctx.env, ctx.t - ctx.period), g.members);
    const Vec2 v_obs = (engaged->cover.center - geom::covering_circle(before.region).center) / ctx.period;
    VisionConeReading cone;
    if (engaged->use_disc) {
        const geom::Primitive disc = geom::Primitive::disc(engaged->cover.center, engaged->cover.radius);
        cone = vision_cone_of(std::span<const geom::Primitive>(&disc, 1), ctx.pose, v_obs);
    } else if (distance_to_group(g, r).d > 0.0) {
        cone = vision_cone_of(g.region, ctx.pose, v_obs);
    } else {
        // Inside the merged hull but outside every member: fall back to the nearest member.
        const PlacedObstacle* nearest = nullptr;
        for (const auto& o : ctx.snap.obstacles) {
            if (contains_member(g, o.id) &&
                (!nearest || distance_to_obstacle(o, r) < distance_to_obstacle(*nearest, r)))
                nearest = &o;
        }
        cone = vision_cone_of(nearest->prims, ctx.pose, v_obs);
    }
    cone.group_key = g.key;

    const Vec2 v_robot = ctx.pose.heading() * std::max(ctx.speed, 1e-6);
    if (boundary_ == 0) {
        const auto [b1, b2] = enlarge_cone(cone, params_.alpha0);
        const auto [l1, l2] = occlusion_vectors(b1, b2, params_.limits.v_max, params_.v_obstacle);
        boundary_ = select_boundary(l1, l2, v_obs, v_robot);
        offset_ = avoidance_offset(engaged->cover.radius, params_.alpha0);
        prev_direction_.reset();
    }
    // Feed forward the rotation of the reference over the last tick.
    const double direction = avoid_direction(cone, params_, boundary_);
    const double lead = prev_direction_ ? wrap_angle(direction - *prev_direction_) : 0.0;
    prev_direction_ = direction;
    out.mode = "avoid";
    out.engaged = g.key;
    out.control = avoid_control(cone, params_, v_robot, boundary_, ctx.period, lead);
    const Vec2 rel = v_robot - v_obs;
    if (rel.squared_norm() > 0.0) {
        out.avoid_angle = ccw_angle_from_to(unit_from_angle(boundary_ == 1 ? cone.alpha1 : cone.alpha2), rel);
    }
    return out;
}

}  // namespace navkit
