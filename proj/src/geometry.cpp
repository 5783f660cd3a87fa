#include "navkit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "navkit/core_math.hpp"

namespace navkit::geom {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int orientation(Vec2 a, Vec2 b, Vec2 c) {
    return sign_of(cross(b - a, c - a));
}

bool on_segment(Vec2 a, Vec2 b, Vec2 p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    const int o1 = orientation(a, b, c);
    const int o2 = orientation(a, b, d);
    const int o3 = orientation(c, d, a);
    const int o4 = orientation(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(a, b, c)) return true;
    if (o2 == 0 && on_segment(a, b, d)) return true;
    if (o3 == 0 && on_segment(c, d, a)) return true;
    if (o4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

template <typename F>
void for_each_edge(std::span<const Vec2> core, F&& f) {
    const std::size_t n = core.size();
    if (n == 2) {
        f(core[0], core[1]);
        return;
    }
    if (n < 2) return;
    for (std::size_t i = 0; i < n; ++i) {
        f(core[i], core[(i + 1) % n]);
    }
}

std::optional<double> ray_circle(Vec2 o, Vec2 d, Vec2 c, double r) {
    const Vec2 oc = o - c;
    const double b = dot(d, oc);
    const double cc = oc.squared_norm() - r * r;
    const double disc = b * b - cc;
    if (disc < 0.0) return std::nullopt;
    const double t = -b - std::sqrt(disc);
    if (t < 0.0) return std::nullopt;
    return t;
}

std::optional<double> ray_segment(Vec2 o, Vec2 d, Vec2 p, Vec2 q) {
    const Vec2 e = q - p;
    const double denom = cross(d, e);
    const Vec2 po = p - o;
    if (std::abs(denom) < 1e-15 * std::max(1.0, e.norm())) {
        // Parallel: only a collinear overlap can be hit.
        if (std::abs(cross(po, d)) > 1e-12) return std::nullopt;
        const double tp = dot(po, d);
        const double tq = dot(q - o, d);
        const double lo = std::min(tp, tq);
        const double hi = std::max(tp, tq);
        if (hi < 0.0) return std::nullopt;
        return std::max(0.0, lo);
    }
    const double t = cross(po, e) / denom;
    const double s = cross(po, d) / denom;
    if (t < 0.0 || s < 0.0 || s > 1.0) return std::nullopt;
    return t;
}

Circle circle_from_two(Vec2 a, Vec2 b) {
    const Vec2 c = (a + b) * 0.5;
    return {c, distance(a, c)};
}

Circle circle_from_three(Vec2 a, Vec2 b, Vec2 c) {
    const Vec2 ab = b - a;
    const Vec2 ac = c - a;
    const double d = 2.0 * cross(ab, ac);
    if (std::abs(d) < 1e-14) {
        Circle best = circle_from_two(a, b);
        for (const Circle& cand : {circle_from_two(a, c), circle_from_two(b, c)}) {
            if (cand.radius > best.radius) best = cand;
        }
        return best;
    }
    const double b2 = ab.squared_norm();
    const double c2 = ac.squared_norm();
    const Vec2 center{a.x + (ac.y * b2 - ab.y * c2) / d, a.y + (ab.x * c2 - ac.x * b2) / d};
    return {center, distance(center, a)};
}

bool contains(const Circle& c, Vec2 p) {
    return distance(c.center, p) <= c.radius * (1.0 + 1e-12) + 1e-12;
}

}  // namespace

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b, Vec2* closest) {
    const Vec2 ab = b - a;
    const double len2 = ab.squared_norm();
    double s = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
    s = std::clamp(s, 0.0, 1.0);
    const Vec2 c = a + ab * s;
    if (closest) *closest = c;
    return distance(p, c);
}

bool point_in_convex_polygon(Vec2 p, std::span<const Vec2> poly) {
    const std::size_t n = poly.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        if (cross(poly[(i + 1) % n] - poly[i], p - poly[i]) < 0.0) return false;
    }
    return true;
}

PointQuery core_distance(Vec2 p, std::span<const Vec2> core) {
    PointQuery q;
    if (core.size() == 1) {
        q.closest = core[0];
        q.distance = distance(p, core[0]);
        q.inside = q.distance == 0.0;
        return q;
    }
    if (core.size() >= 3 && point_in_convex_polygon(p, core)) {
        q.closest = p;
        q.distance = 0.0;
        q.inside = true;
        return q;
    }
    q.distance = kInf;
    for_each_edge(core, [&](Vec2 a, Vec2 b) {
        Vec2 c;
        const double d = point_segment_distance(p, a, b, &c);
        if (d < q.distance) {
            q.distance = d;
            q.closest = c;
        }
    });
    q.inside = q.distance == 0.0;
    return q;
}

PointQuery point_distance(Vec2 p, const Primitive& prim) {
    PointQuery q = core_distance(p, prim.core);
    if (prim.radius == 0.0) return q;
    const double d = q.distance - prim.radius;
    if (d <= 0.0) {
        return {0.0, p, true};
    }
    const Vec2 dir = (p - q.closest) / q.distance;
    return {d, q.closest + dir * prim.radius, false};
}

double primitive_distance(const Primitive& a, const Primitive& b) {
    double core = kInf;
    for (const Vec2& v : a.core) core = std::min(core, core_distance(v, b.core).distance);
    for (const Vec2& v : b.core) core = std::min(core, core_distance(v, a.core).distance);
    if (core > 0.0 && a.core.size() >= 2 && b.core.size() >= 2) {
        bool crossing = false;
        for_each_edge(a.core, [&](Vec2 p, Vec2 q) {
            if (crossing) return;
            for_each_edge(b.core, [&](Vec2 r, Vec2 s) {
                if (!crossing && segments_intersect(p, q, r, s)) crossing = true;
            });
        });
        if (crossing) core = 0.0;
    }
    return std::max(0.0, core - a.radius - b.radius);
}

std::optional<double> ray_cast(Vec2 origin, Vec2 dir, const Primitive& prim, double inflate) {
    const double rho = prim.radius + inflate;
    if (core_distance(origin, prim.core).distance <= rho) {
        return 0.0;
    }
    std::optional<double> best;
    auto take = [&best](std::optional<double> t) {
        if (t && (!best || *t < *best)) best = t;
    };
    if (prim.core.size() == 1) {
        take(ray_circle(origin, dir, prim.core[0], rho));
        return best;
    }
    for_each_edge(prim.core, [&](Vec2 a, Vec2 b) {
        if (rho > 0.0) {
            take(ray_circle(origin, dir, a, rho));
            take(ray_circle(origin, dir, b, rho));
            const Vec2 e = b - a;
            const double len = e.norm();
            if (len > 0.0) {
                const Vec2 n = perp(e / len) * rho;
                take(ray_segment(origin, dir, a + n, b + n));
                take(ray_segment(origin, dir, a - n, b - n));
            }
        } else {
            take(ray_segment(origin, dir, a, b));
        }
    });
    return best;
}

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    std::vector<Vec2> hull(2 * pts.size());
    std::size_t k = 0;
    for (const Vec2& p : pts) {
        while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0) --k;
        hull[k++] = p;
    }
    const std::size_t lower = k + 1;
    for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
        while (k >= lower && cross(hull[k - 1] - hull[k - 2], *it - hull[k - 2]) <= 0.0) --k;
        hull[k++] = *it;
    }
    hull.resize(k - 1);
    return hull;
}

std::vector<Vec2> outer_samples(const Primitive& prim, int arc_segments) {
    if (prim.radius == 0.0) return prim.core;
    std::vector<Vec2> out;
    out.reserve(prim.core.size() * static_cast<std::size_t>(arc_segments));
    const double r = prim.radius / std::cos(std::numbers::pi / arc_segments);
    for (const Vec2& c : prim.core) {
        for (int j = 0; j < arc_segments; ++j) {
            out.push_back(c + unit_from_angle(2.0 * std::numbers::pi * j / arc_segments) * r);
        }
    }
    return out;
}

Circle min_enclosing_circle(std::span<const Vec2> input) {
    if (input.empty()) return {};
    std::vector<Vec2> pts(input.begin(), input.end());
    std::mt19937 rng(12345u);
    std::shuffle(pts.begin(), pts.end(), rng);
    Circle c{pts[0], 0.0};
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (contains(c, pts[i])) continue;
        c = {pts[i], 0.0};
        for (std::size_t j = 0; j < i; ++j) {
            if (contains(c, pts[j])) continue;
            c = circle_from_two(pts[i], pts[j]);
            for (std::size_t k = 0; k < j; ++k) {
                if (!contains(c, pts[k])) c = circle_from_three(pts[i], pts[j], pts[k]);
            }
        }
    }
    return c;
}

Circle covering_circle(std::span<const Primitive> prims) {
    if (prims.empty()) return {};
    if (prims.size() == 1 && prims[0].core.size() == 1) {
        return {prims[0].core[0], prims[0].radius};
    }
    const double r0 = prims[0].radius;
    const bool uniform = std::all_of(prims.begin(), prims.end(), [r0](const Primitive& p) { return p.radius == r0; });
    std::vector<Vec2> pts;
    for (const Primitive& p : prims) {
        if (uniform) {
            pts.insert(pts.end(), p.core.begin(), p.core.end());
        } else {
            auto s = outer_samples(p);
            pts.insert(pts.end(), s.begin(), s.end());
        }
    }
    Circle c = min_enclosing_circle(pts);
    if (uniform) c.radius += r0;
    return c;
}

std::optional<BearingInterval> bearing_extent(Vec2 viewer, std::span<const Primitive> prims, double reference) {
    double lo = kInf;
    double hi = -kInf;
    for (const Primitive& prim : prims) {
        if (point_distance(viewer, prim).inside) return std::nullopt;
        for (const Vec2& c : prim.core) {
            const Vec2 rel = c - viewer;
            const double dist = rel.norm();
            const double offset = wrap_angle(rel.bearing() - reference);
            const double half = prim.radius > 0.0 ? std::asin(std::min(1.0, prim.radius / dist)) : 0.0;
            lo = std::min(lo, offset - half);
            hi = std::max(hi, offset + half);
        }
    }
    if (lo > hi) return std::nullopt;
    return BearingInterval{reference + lo, reference + hi};
}

}  // namespace navkit::geom
