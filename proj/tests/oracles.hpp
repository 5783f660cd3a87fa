#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library except for plain data types.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "navkit/geometry.hpp"
#include "navkit/vec2.hpp"

namespace oracle {

using navkit::Vec2;

inline constexpr double pi = std::numbers::pi;

inline double wrap(double a) {
    double r = std::fmod(a + pi, 2.0 * pi);
    if (r <= 0.0) r += 2.0 * pi;
    return r - pi;
}

/// Unicycle state integrated with classic RK4 over `n` equal substeps.
inline std::array<double, 3> rk4_unicycle(std::array<double, 3> s, double v, double u, double dt, int n) {
    const double h = dt / n;
    auto f = [&](const std::array<double, 3>& q) {
        return std::array<double, 3>{v * std::cos(q[2]), v * std::sin(q[2]), u};
    };
    for (int i = 0; i < n; ++i) {
        const auto k1 = f(s);
        const auto k2 = f({s[0] + 0.5 * h * k1[0], s[1] + 0.5 * h * k1[1], s[2] + 0.5 * h * k1[2]});
        const auto k3 = f({s[0] + 0.5 * h * k2[0], s[1] + 0.5 * h * k2[1], s[2] + 0.5 * h * k2[2]});
        const auto k4 = f({s[0] + h * k3[0], s[1] + h * k3[1], s[2] + h * k3[2]});
        for (int j = 0; j < 3; ++j) s[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
    return s;
}

inline double seg_point(Vec2 p, Vec2 a, Vec2 b) {
    const double dx = b.x - a.x, dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    double t = len2 > 0.0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

inline bool segments_cross(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    auto orient = [](Vec2 p, Vec2 q, Vec2 r) { return (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x); };
    const double o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
    return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0)) && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0;
}

inline double seg_seg(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    if (segments_cross(a, b, c, d)) return 0.0;
    return std::min({seg_point(a, c, d), seg_point(b, c, d), seg_point(c, a, b), seg_point(d, a, b)});
}

/// Winding test for a CCW convex polygon, boundary included.
inline bool in_convex(Vec2 p, const std::vector<Vec2>& poly) {
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2 a = poly[i], b = poly[(i + 1) % poly.size()];
        if ((b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x) < 0.0) return false;
    }
    return true;
}

/// Distance from segment [a, b] to a primitive (0 when they meet).
inline double seg_primitive(Vec2 a, Vec2 b, const navkit::geom::Primitive& prim) {
    const auto& c = prim.core;
    double d = std::numeric_limits<double>::infinity();
    if (c.size() == 1) {
        d = seg_point(c[0], a, b);
    } else if (c.size() == 2) {
        d = seg_seg(a, b, c[0], c[1]);
    } else {
        if (in_convex(a, c)) return 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) d = std::min(d, seg_seg(a, b, c[i], c[(i + 1) % c.size()]));
    }
    return std::max(0.0, d - prim.radius);
}

/// Whether the ray from `pos` along `bearing`, cut at the chord of the
/// look-ahead disc, meets the `inflate`-grown primitives.
inline bool sector_m(const std::vector<navkit::geom::Primitive>& prims, double inflate, Vec2 pos, double heading,
                     double ds, double bearing) {
    const double off = wrap(bearing - heading);
    if (std::abs(off) >= pi / 2.0) return false;
    const double reach = ds * std::cos(off);
    const Vec2 end{pos.x + reach * std::cos(bearing), pos.y + reach * std::sin(bearing)};
    for (const auto& p : prims) {
        if (seg_primitive(pos, end, p) <= inflate) return true;
    }
    return false;
}

/// Points on the boundary of a primitive, `n` per unit of perimeter scale.
inline std::vector<Vec2> boundary_samples(const navkit::geom::Primitive& prim, int n) {
    std::vector<Vec2> out;
    const auto& c = prim.core;
    if (prim.radius > 0.0) {
        for (const Vec2 q : c) {
            for (int k = 0; k < n; ++k) {
                const double a = 2.0 * pi * k / n;
                out.push_back({q.x + prim.radius * std::cos(a), q.y + prim.radius * std::sin(a)});
            }
        }
    }
    if (c.size() >= 2) {
        const std::size_t edges = c.size() == 2 ? 1 : c.size();
        for (std::size_t i = 0; i < edges; ++i) {
            const Vec2 a = c[i], b = c[(i + 1) % c.size()];
            for (int k = 0; k <= n; ++k) {
                const double t = static_cast<double>(k) / n;
                out.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
            }
        }
    }
    return out;
}

/// Min and max bearing of the samples, unwrapped around `reference`.
inline std::pair<double, double> bearing_span(const std::vector<Vec2>& pts, Vec2 viewer, double reference) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const Vec2 p : pts) {
        const double b = reference + wrap(std::atan2(p.y - viewer.y, p.x - viewer.x) - reference);
        lo = std::min(lo, b);
        hi = std::max(hi, b);
    }
    return {lo, hi};
}

/// Hand form of the per-disc turn demand.
inline double turn_demand(double r, double vi, double vmax, double dsafe) {
    const double rd = r + dsafe;
    return (vi + vmax) * r / (rd * rd * std::sqrt(1.0 - (r / rd) * (r / rd)));
}

/// Upper tail of the chi-square distribution with 2 degrees of freedom.
inline double chi2_df2_pvalue(double x) { return std::exp(-x / 2.0); }

inline double spread(const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi - *lo;
}

}  // namespace oracle
