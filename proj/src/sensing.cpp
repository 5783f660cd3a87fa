#include "navkit/sensing.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace navkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t half_cells(double resolution) {
    if (!(resolution > 0.0)) throw std::invalid_argument("sector resolution must be positive");
    const double n = kPi / resolution;
    const double rounded = std::round(n);
    if (rounded < 1.0 || std::abs(n - rounded) > 1e-9 * rounded) {
        throw std::invalid_argument("sector resolution must divide pi evenly");
    }
    return static_cast<std::size_t>(rounded);
}

bool ray_blocked(std::span<const geom::Primitive> prims, double inflate, Vec2 origin, double bearing, double reach) {
    const Vec2 dir = unit_from_angle(bearing);
    for (const auto& p : prims) {
        const auto hit = geom::ray_cast(origin, dir, p, inflate);
        if (hit && *hit <= reach) return true;
    }
    return false;
}

std::vector<geom::Primitive> near_disc(std::span<const geom::Primitive> prims, double inflate, const Pose& pose,
                                       double ds) {
    const Vec2 center = pose.position() + pose.heading() * (ds / 2.0);
    std::vector<geom::Primitive> out;
    for (const auto& p : prims) {
        if (geom::point_distance(center, p).distance - inflate <= ds / 2.0) out.push_back(p);
    }
    return out;
}

}  // namespace

RangeReading measure_range(std::span<const ObstacleGroup> groups, Vec2 r, double max_range) {
    RangeReading out;
    out.d = kInf;
    for (const auto& g : groups) {
        const double d = distance_to_group(g, r).d;
        if (d < out.d) {
            out.d = d;
            out.obstacle_id = g.key;
        }
    }
    if (out.d > max_range) {
        out.d = kInf;
        out.obstacle_id = -1;
    }
    out.detected = std::isfinite(out.d);
    return out;
}

RangeSensor::RangeSensor(double period, double max_range) : period_(period), max_range_(max_range) {
    if (!(period > 0.0)) throw std::invalid_argument("range sensor period must be positive");
}

RangeReading RangeSensor::sample(std::span<const ObstacleGroup> groups, Vec2 r) {
    RangeReading out = measure_range(groups, r, max_range_);
    if (out.detected && prev_d_) {
        out.d_dot = (out.d - *prev_d_) / period_;
    }
    prev_d_ = out.detected ? std::optional<double>(out.d) : std::nullopt;
    return out;
}

RangeReading RangeSensor::sample(const Environment& env, double t, const Pose& pose) {
    const auto groups = interpolate_clusters(env, t);
    return sample(groups, pose.position());
}

void RangeSensor::reset() { prev_d_.reset(); }

VisionConeReading vision_cone_of(std::span<const geom::Primitive> region, const Pose& pose, Vec2 v_obs) {
    const Vec2 r = pose.position();
    VisionConeReading out;
    out.v_obs = v_obs;
    out.d = kInf;
    Vec2 closest;
    for (const auto& p : region) {
        const auto q = geom::point_distance(r, p);
        if (q.inside) throw std::domain_error("vision cone undefined: robot inside obstacle group");
        if (q.distance < out.d) {
            out.d = q.distance;
            closest = q.closest;
        }
    }
    if (!std::isfinite(out.d)) throw std::domain_error("vision cone undefined: empty obstacle group");
    const auto extent = geom::bearing_extent(r, region, (closest - r).bearing());
    if (!extent) throw std::domain_error("vision cone undefined: robot inside obstacle group");
    if (extent->hi - extent->lo >= kPi) throw std::domain_error("vision cone spans pi or more");
    out.alpha1 = extent->lo;
    out.alpha2 = extent->hi;
    return out;
}

VisionConeReading sense_vision_cone(const Environment& env, double t, const Pose& pose, const ObstacleGroup& group,
                                    double period) {
    if (!(period > 0.0)) throw std::invalid_argument("vision cone period must be positive");
    const ObstacleGroup before = make_group(occupied_at(env, t - period), group.members);
    const Vec2 c1 = geom::covering_circle(group.region).center;
    const Vec2 c0 = geom::covering_circle(before.region).center;
    VisionConeReading out = vision_cone_of(group.region, pose, (c1 - c0) / period);
    out.group_key = group.key;
    return out;
}

double SectorScan::offset(std::size_t k) const { return -kPi + static_cast<double>(k + 1) * resolution; }

bool sector_value(std::span<const geom::Primitive> prims, double inflate, const Pose& pose, double ds,
                  double bearing, double max_range) {
    const double off = wrap_angle(bearing - pose.theta);
    if (std::abs(off) >= kPi / 2.0) return false;
    const double reach = std::min(ds * std::cos(off), max_range);
    return ray_blocked(prims, inflate, pose.position(), bearing, reach);
}

SectorScan scan_sectors(std::span<const geom::Primitive> prims, double inflate, const Pose& pose, double ds,
                        double resolution, double max_range) {
    if (!(ds > 0.0)) throw std::invalid_argument("sector scan: D_s must be positive");
    const std::size_t n = 2 * half_cells(resolution);
    SectorScan scan;
    scan.resolution = kPi / static_cast<double>(n / 2);
    scan.theta = pose.theta;
    scan.ds = ds;
    scan.m.assign(n, 0);
    const auto relevant = near_disc(prims, inflate, pose, ds);
    if (relevant.empty()) return scan;
    for (std::size_t k = 0; k < n; ++k) {
        const double off = scan.offset(k);
        if (std::abs(off) >= kPi / 2.0) continue;
        const double reach = std::min(ds * std::cos(off), max_range);
        scan.m[k] = ray_blocked(relevant, inflate, pose.position(), pose.theta + off, reach) ? 1 : 0;
    }
    return scan;
}

SectorScan sense_sectors(const Snapshot& snap, double d_safe, const Pose& pose, double ds, double resolution,
                         double max_range) {
    std::vector<geom::Primitive> prims;
    for (const auto& o : snap.obstacles) prims.insert(prims.end(), o.prims.begin(), o.prims.end());
    return scan_sectors(prims, d_safe, pose, ds, resolution, max_range);
}

TargetBearing sense_target(const Pose& pose, Vec2 target) {
    const Vec2 rel = target - pose.position();
    const double dist = rel.norm();
    if (dist == 0.0) return {pose.theta, 0.0};
    return {wrap_angle(rel.bearing()), dist};
}

}  // namespace navkit
