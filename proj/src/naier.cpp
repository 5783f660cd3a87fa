#include "navkit/naier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "navkit/steering.hpp"

namespace navkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double turn_toward(double err, const NaierParams& p, double period) {
    if (period > 0.0) return sampled_turn(err, p.limits.u_max, period, 0.0);
    return p.limits.u_max * sign_of(err);
}

}  // namespace

void NaierParams::validate() const {
    limits.validate();
    if (!(ds > 0.0)) throw std::invalid_argument("naier: need D_s > 0");
    if (!(delta > 0.0)) throw std::invalid_argument("naier: need delta > 0");
    if (!(d_safe > 0.0)) throw std::invalid_argument("naier: need d_safe > 0");
    if (!(theta0 > -kPi && theta0 <= kPi)) throw std::invalid_argument("naier: theta0 must lie in (-pi, pi]");
}

FreeIntervals extract_intervals(const SectorScan& scan) {
    FreeIntervals fi;
    fi.theta = scan.theta;
    const std::size_t n = scan.size();
    fi.m = std::any_of(scan.m.begin(), scan.m.end(), [](unsigned char v) { return v != 0; });
    std::size_t k = 0;
    while (k < n) {
        if (scan.m[k]) {
            ++k;
            continue;
        }
        const std::size_t start = k;
        while (k < n && !scan.m[k]) ++k;
        const double lo = start == 0 ? -kPi : scan.offset(start - 1);
        const double hi = k == n ? kPi : scan.offset(k);
        fi.intervals.push_back({scan.theta + lo, scan.theta + hi});
    }
    return fi;
}

std::size_t nearest_interval(const FreeIntervals& fi, double theta) {
    if (fi.intervals.empty()) throw Blocked();
    std::size_t best = 0;
    double best_gap = kInf;
    for (std::size_t j = 0; j < fi.intervals.size(); ++j) {
        const auto& iv = fi.intervals[j];
        if (iv.lo < theta && theta < iv.hi) return j;
        const double gap = std::min(std::abs(iv.lo - theta), std::abs(iv.hi - theta));
        if (gap < best_gap) {
            best_gap = gap;
            best = j;
        }
    }
    return best;
}

double interval_middle(const FreeIntervals& fi, std::size_t j) {
    const auto& iv = fi.intervals.at(j);
    return 0.5 * (iv.lo + iv.hi);
}

NaierCommand naier_command(const SectorScan& scan, const NaierParams& params, double theta, double theta0,
                           double period) {
    NaierCommand out;
    out.control.v = params.limits.v_max;
    const FreeIntervals fi = extract_intervals(scan);
    out.m = fi.m;
    if (!fi.m) {
        out.control.u = turn_toward(wrap_angle(theta0 - theta), params, period);
        return out;
    }
    const double c = interval_middle(fi, nearest_interval(fi, scan.theta));
    out.bearing = c;
    out.control.u = turn_toward(c - scan.theta + wrap_angle(scan.theta - theta), params, period);
    return out;
}

ControlInput control(const SectorScan& scan, const NaierParams& params, double theta) {
    return naier_command(scan, params, theta, params.theta0).control;
}

double environment_speed_bound(const Environment& env) {
    double v = 0.0;
    for (const auto& o : env.obstacles) v = std::max(v, max_point_speed(o));
    return v;
}

ValidationReport validate_naier(const NaierParams& p, double v_env) {
    const double v = p.limits.v_max;
    const double u = p.limits.u_max;
    const double d = p.delta;
    ValidationReport r;
    r.push_back(make_check("V sin(u_max delta)/u_max > V_E delta", "parameters", v * std::sin(u * d) / u, v_env * d,
                           true));
    r.push_back(make_check("D_s > 2 (V + V_E) delta", "parameters", p.ds, 2.0 * (v + v_env) * d, true));
    r.push_back(make_check("(D_s - 2 V delta) sin(u_max delta) > 2 V_E delta", "parameters",
                           (p.ds - 2.0 * v * d) * std::sin(u * d), 2.0 * v_env * d, true));
    r.push_back(make_check("(D_s - 2 V delta)(1 - cos(u_max delta)) > 2 V_E delta", "parameters",
                           (p.ds - 2.0 * v * d) * (1.0 - std::cos(u * d)), 2.0 * v_env * d, true));
    return r;
}

ValidationReport validate_naier(const NaierParams& p, const Environment& env, const Pose& start, double horizon) {
    const double v_env = p.v_env < 0.0 ? environment_speed_bound(env) : p.v_env;
    ValidationReport r = validate_naier(p, v_env);
    const double spacing = p.ds + 2.0 * p.limits.v_max * p.delta;
    // Spacing between enlarged obstacles that never merge, minimised over the horizon.
    const PairwiseDistances pd = pairwise_min_distance(env, horizon);
    const auto component = merged_components(pd, env.interpolation_gap);
    const std::size_t n = pd.ids.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (component[i] == component[j]) continue;
            r.push_back(make_check("d_ij > D_s + 2 V delta",
                                   "obstacles " + std::to_string(pd.ids[i]) + "," + std::to_string(pd.ids[j]),
                                   pd.at(i, j) - 2.0 * p.d_safe, spacing, true));
        }
    }
    const Snapshot s0 = occupied_at(env, 0.0);
    const double clearance = n == 0 ? kInf : enlarged_distance(s0, start.position(), p.d_safe);
    r.push_back(make_check("initial clearance > 2 V delta", "robot", clearance, 2.0 * p.limits.v_max * p.delta, true));
    const SectorScan scan = sense_sectors(s0, p.d_safe, start, p.ds, p.resolution, p.max_range);
    const bool free = !extract_intervals(scan).m;
    InequalityCheck init = make_check("initial disc free (m = 0)", "robot", free ? 1.0 : 0.0, 1.0, false);
    r.push_back(init);
    if (!p.seek_target) {
        r.push_back(make_check("initial heading equals theta0 (|error| <= tol)", "robot", kAlignTolerance,
                               std::abs(wrap_angle(start.theta - p.theta0)), false));
    }
    return r;
}

double min_disc_diameter_for_horizon(double v, double t0) {
    if (t0 < 0.0) throw std::invalid_argument("min_disc_diameter_for_horizon: negative horizon");
    return 2.0 * v * t0;
}

NaierController::NaierController(NaierParams params) : params_(params) { params_.validate(); }

NavDecision NaierController::decide(const NavContext& ctx) {
    if (next_decision_ && ctx.t < *next_decision_ - 1e-9) {
        NavDecision held = held_;
        held.decision_instant = false;
        return held;
    }
    next_decision_ = next_decision_.value_or(ctx.t) + params_.delta;
    while (*next_decision_ <= ctx.t + 1e-9) *next_decision_ += params_.delta;

    const double theta0 = params_.seek_target ? sense_target(ctx.pose, ctx.target).h : params_.theta0;
    const SectorScan scan =
        sense_sectors(ctx.snap, params_.d_safe, ctx.pose, params_.ds, params_.resolution, params_.max_range);
    NavDecision out;
    try {
        const NaierCommand cmd = naier_command(scan, params_, ctx.pose.theta, theta0, params_.delta);
        out.control = cmd.control;
        out.interval_mode = cmd.m;
        out.commanded_bearing = cmd.bearing;
        out.mode = cmd.m ? "interval" : "free";
        if (cmd.bearing) last_free_bearing_ = *cmd.bearing;
    } catch (const Blocked&) {
        // Rotate in place toward the last bearing known to be free.
        ++blocked_;
        const double goal = last_free_bearing_.value_or(ctx.pose.theta + kPi);
        out.control = {params_.limits.v_min, turn_toward(wrap_angle(goal - ctx.pose.theta), params_, params_.delta)};
        out.interval_mode = true;
        out.mode = "blocked";
    }
    held_ = out;
    return out;
}

}  // namespace navkit
