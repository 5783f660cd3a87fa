#pragma once

#include <optional>
#include <span>
#include <vector>

#include "navkit/vec2.hpp"

namespace navkit::geom {

/// A convex planar set written as the Minkowski sum of a convex core
/// (one point, a segment, or a CCW convex polygon) and a closed disc of
/// `radius`. Discs, capsules and polygons are all Primitives.
struct Primitive {
    std::vector<Vec2> core;
    double radius{0.0};

    static Primitive disc(Vec2 center, double r) { return {{center}, r}; }
    static Primitive capsule(Vec2 a, Vec2 b, double r) { return {{a, b}, r}; }
    static Primitive polygon(std::vector<Vec2> ccw_vertices) { return {std::move(ccw_vertices), 0.0}; }
};

struct PointQuery {
    double distance{0.0};  ///< 0 when the point is inside
    Vec2 closest;          ///< closest point of the set
    bool inside{false};
};

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b, Vec2* closest = nullptr);

/// True when `p` lies in the closed CCW convex polygon.
bool point_in_convex_polygon(Vec2 p, std::span<const Vec2> poly);

/// Distance from `p` to the convex core (no inflation).
PointQuery core_distance(Vec2 p, std::span<const Vec2> core);

PointQuery point_distance(Vec2 p, const Primitive& prim);

/// Set distance between two primitives; 0 when they overlap.
double primitive_distance(const Primitive& a, const Primitive& b);

/// Smallest t >= 0 such that origin + t*dir lies in `prim` grown by
/// `inflate`. `dir` must be a unit vector. 0 when the origin is inside.
std::optional<double> ray_cast(Vec2 origin, Vec2 dir, const Primitive& prim, double inflate = 0.0);

/// Andrew monotone chain; returns the hull in CCW order without repeats.
std::vector<Vec2> convex_hull(std::vector<Vec2> pts);

/// Polygon circumscribing the primitive: every boundary point of the
/// primitive lies inside the returned point set's hull.
std::vector<Vec2> outer_samples(const Primitive& prim, int arc_segments = 32);

struct Circle {
    Vec2 center;
    double radius{0.0};
};

/// Minimal enclosing circle of a point set (Welzl, iterative form).
Circle min_enclosing_circle(std::span<const Vec2> pts);

/// Minimal enclosing circle of a primitive set; exact for a single disc.
Circle covering_circle(std::span<const Primitive> prims);

struct BearingInterval {
    double lo{0.0};  ///< unwrapped, lo <= hi
    double hi{0.0};
};

/// Bearings (radians) under which `prims` are seen from `viewer`, as one
/// interval around `reference` (offsets from reference kept in (-pi, pi]).
/// Returns nullopt when the viewer is inside one of the sets.
std::optional<BearingInterval> bearing_extent(Vec2 viewer, std::span<const Primitive> prims, double reference);

}  // namespace navkit::geom
