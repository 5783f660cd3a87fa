#include "navkit/world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

#include "navkit/core_math.hpp"

namespace navkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double law_speed_bound(const MotionLaw& m, Vec2 origin, double extent) {
    return std::visit(
        overloaded{
            [](const StaticMotion&) { return 0.0; },
            [](const ConstantVelocity& c) { return c.velocity.norm(); },
            [&](const ArcMotion& a) { return std::abs(a.angular_rate) * distance(origin, a.center); },
            [](const SinusoidMotion& s) { return s.base_velocity.norm() + std::abs(s.amplitude * s.frequency); },
            [&](const RotationMotion& r) {
                return std::abs(r.angular_rate) * (distance(origin, r.pivot) + extent);
            },
            [&](const LeaderChainMotion& l) { return law_speed_bound(*l.leader, origin, 0.0); },
        },
        m.law);
}

std::vector<Vec2> leader_trail(const LeaderChainMotion& chain, Vec2 origin, double t, std::size_t count) {
    std::vector<Vec2> pts;
    pts.reserve(count);
    Vec2 prev = evaluate_motion(*chain.leader, origin, 0.0, t).position;
    pts.push_back(prev);
    const double speed = law_speed_bound(*chain.leader, origin, 0.0);
    if (speed <= 0.0 || chain.spacing <= 0.0) {
        while (pts.size() < count) pts.push_back(prev);
        return pts;
    }
    const double h = chain.spacing / speed / 16.0;
    double travelled = 0.0;
    double tau = t;
    const std::size_t max_iter = 64 * count + 1024;
    for (std::size_t iter = 0; pts.size() < count && iter < max_iter; ++iter) {
        tau -= h;
        const Vec2 cur = evaluate_motion(*chain.leader, origin, 0.0, tau).position;
        const double seg = distance(prev, cur);
        while (pts.size() < count) {
            const double want = chain.spacing * static_cast<double>(pts.size());
            if (travelled + seg < want || seg == 0.0) break;
            const double f = (want - travelled) / seg;
            pts.push_back(prev + (cur - prev) * f);
        }
        travelled += seg;
        prev = cur;
    }
    while (pts.size() < count) pts.push_back(prev);
    return pts;
}

PlacedObstacle place(const Obstacle& o, double t) {
    PlacedObstacle out;
    out.id = o.id;
    const BodyState s = evaluate_motion(o.motion, o.origin, o.orientation0, t);
    out.reference = s.position;
    out.velocity = s.velocity;
    auto to_world = [&](Vec2 local) { return s.position + rotated(local, s.orientation); };
    std::visit(overloaded{
                   [&](const DiscShape& d) { out.prims.push_back(geom::Primitive::disc(s.position, d.radius)); },
                   [&](const PolygonShape& p) {
                       std::vector<Vec2> w;
                       w.reserve(p.vertices.size());
                       for (const Vec2& v : p.vertices) w.push_back(to_world(v));
                       out.prims.push_back(geom::Primitive::polygon(std::move(w)));
                   },
                   [&](const ChainShape& c) {
                       std::vector<Vec2> pts;
                       if (const auto* lead = std::get_if<LeaderChainMotion>(&o.motion.law)) {
                           pts = leader_trail(*lead, o.origin, t, c.points.size());
                       } else {
                           for (const Vec2& p : c.points) pts.push_back(to_world(p));
                       }
                       for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
                           out.prims.push_back(geom::Primitive::capsule(pts[i], pts[i + 1], c.half_width));
                       }
                   },
               },
               o.shape);
    return out;
}

struct Bounds {
    Vec2 center;
    double radius{0.0};
};

Bounds bounds_of(const PlacedObstacle& o) {
    std::vector<Vec2> pts;
    double rmax = 0.0;
    for (const auto& p : o.prims) {
        pts.insert(pts.end(), p.core.begin(), p.core.end());
        rmax = std::max(rmax, p.radius);
    }
    Vec2 c = std::accumulate(pts.begin(), pts.end(), Vec2{}) / static_cast<double>(pts.size());
    double r = 0.0;
    for (const Vec2& p : pts) r = std::max(r, distance(c, p));
    return {c, r + rmax};
}

int find_root(std::vector<int>& parent, int i) {
    while (parent[i] != i) {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    return i;
}

}  // namespace

void validate_shape(const Shape& shape) {
    std::visit(overloaded{
                   [](const DiscShape& d) {
                       if (!(d.radius > 0.0)) throw std::invalid_argument("disc radius must be positive");
                   },
                   [](const PolygonShape& p) {
                       const auto n = p.vertices.size();
                       if (n < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
                       for (std::size_t i = 0; i < n; ++i) {
                           const Vec2 a = p.vertices[i];
                           const Vec2 b = p.vertices[(i + 1) % n];
                           const Vec2 c = p.vertices[(i + 2) % n];
                           if (!(cross(b - a, c - b) > 0.0)) {
                               throw std::invalid_argument("polygon must be strictly convex and counterclockwise");
                           }
                       }
                   },
                   [](const ChainShape& c) {
                       if (c.points.size() < 2) throw std::invalid_argument("chain needs at least 2 points");
                       if (!(c.half_width > 0.0)) throw std::invalid_argument("chain half width must be positive");
                   },
               },
               shape);
}

BodyState evaluate_motion(const MotionLaw& m, Vec2 origin, double orientation0, double t) {
    return std::visit(
        overloaded{
            [&](const StaticMotion&) { return BodyState{origin, orientation0, {}}; },
            [&](const ConstantVelocity& c) { return BodyState{origin + c.velocity * t, orientation0, c.velocity}; },
            [&](const ArcMotion& a) {
                const Vec2 rel = rotated(origin - a.center, a.angular_rate * t);
                return BodyState{a.center + rel, orientation0, perp(rel) * a.angular_rate};
            },
            [&](const SinusoidMotion& s) {
                const double speed = s.base_velocity.norm();
                const Vec2 lateral = speed > 0.0 ? perp(s.base_velocity / speed) : Vec2{0.0, 1.0};
                const Vec2 pos = origin + s.base_velocity * t + lateral * (s.amplitude * std::sin(s.frequency * t));
                const Vec2 vel = s.base_velocity + lateral * (s.amplitude * s.frequency * std::cos(s.frequency * t));
                return BodyState{pos, orientation0, vel};
            },
            [&](const RotationMotion& r) {
                const double a = r.angular_rate * t;
                const Vec2 rel = rotated(origin - r.pivot, a);
                return BodyState{r.pivot + rel, orientation0 + a, perp(rel) * r.angular_rate};
            },
            [&](const LeaderChainMotion& l) { return evaluate_motion(*l.leader, origin, orientation0, t); },
        },
        m.law);
}

double body_extent(const Obstacle& o) {
    return std::visit(overloaded{
                          [](const DiscShape& d) { return d.radius; },
                          [](const PolygonShape& p) {
                              double r = 0.0;
                              for (const Vec2& v : p.vertices) r = std::max(r, v.norm());
                              return r;
                          },
                          [](const ChainShape& c) {
                              double r = 0.0;
                              for (const Vec2& v : c.points) r = std::max(r, v.norm());
                              return r + c.half_width;
                          },
                      },
                      o.shape);
}

double max_point_speed(const Obstacle& o) { return law_speed_bound(o.motion, o.origin, body_extent(o)); }

void Environment::validate() const {
    if (!(d_safe > 0.0)) throw std::invalid_argument("environment: d_safe must be positive");
    if (!(interpolation_gap >= 0.0)) throw std::invalid_argument("environment: interpolation_gap must be >= 0");
    std::set<int> ids;
    for (const Obstacle& o : obstacles) {
        if (!ids.insert(o.id).second) {
            throw std::invalid_argument("environment: duplicate obstacle id " + std::to_string(o.id));
        }
        validate_shape(o.shape);
        if (const auto* lead = std::get_if<LeaderChainMotion>(&o.motion.law)) {
            if (!std::holds_alternative<ChainShape>(o.shape)) {
                throw std::invalid_argument("environment: leader-chain motion requires a chain shape");
            }
            if (!lead->leader) throw std::invalid_argument("environment: leader-chain motion without a leader");
        }
    }
}

Snapshot occupied_at(const Environment& env, double t) {
    Snapshot s;
    s.t = t;
    s.obstacles.reserve(env.obstacles.size());
    for (const Obstacle& o : env.obstacles) s.obstacles.push_back(place(o, t));
    std::sort(s.obstacles.begin(), s.obstacles.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    return s;
}

double distance_to_obstacle(const PlacedObstacle& o, Vec2 r) {
    double d = kInf;
    for (const auto& p : o.prims) d = std::min(d, geom::point_distance(r, p).distance);
    return d;
}

DistanceResult distance_to_environment(const Snapshot& snap, Vec2 r) {
    DistanceResult best;
    best.d = kInf;
    for (const PlacedObstacle& o : snap.obstacles) {
        for (const auto& p : o.prims) {
            const geom::PointQuery q = geom::point_distance(r, p);
            if (q.distance < best.d) {
                best.d = q.distance;
                best.closest = q.closest;
                best.obstacle_id = o.id;
                best.penetrated = q.inside;
            }
        }
    }
    return best;
}

DistanceResult distance_to_environment(const Environment& env, double t, Vec2 r) {
    return distance_to_environment(occupied_at(env, t), r);
}

double enlarged_distance(const Snapshot& snap, Vec2 r, double d_safe) {
    return std::max(0.0, distance_to_environment(snap, r).d - d_safe);
}

double enlarged_distance(const Environment& env, double t, Vec2 r) {
    return enlarged_distance(occupied_at(env, t), r, env.d_safe);
}

double obstacle_distance(const PlacedObstacle& a, const PlacedObstacle& b) {
    double d = kInf;
    for (const auto& pa : a.prims) {
        for (const auto& pb : b.prims) d = std::min(d, geom::primitive_distance(pa, pb));
    }
    return d;
}

ObstacleGroup make_group(const Snapshot& snap, const std::vector<int>& member_ids) {
    ObstacleGroup g;
    g.members = member_ids;
    std::sort(g.members.begin(), g.members.end());
    g.key = g.members.empty() ? -1 : g.members.front();
    std::vector<Vec2> samples;
    int count = 0;
    for (const PlacedObstacle& o : snap.obstacles) {
        if (!std::binary_search(g.members.begin(), g.members.end(), o.id)) continue;
        ++count;
        g.velocity += o.velocity;
        if (g.members.size() == 1) {
            g.region = o.prims;
        } else {
            for (const auto& p : o.prims) {
                auto s = geom::outer_samples(p);
                samples.insert(samples.end(), s.begin(), s.end());
            }
        }
    }
    if (count > 0) g.velocity = g.velocity / static_cast<double>(count);
    if (g.members.size() > 1) {
        g.region = {geom::Primitive::polygon(geom::convex_hull(std::move(samples)))};
    }
    return g;
}

std::vector<ObstacleGroup> interpolate_clusters(const Snapshot& snap, double gap) {
    const int n = static_cast<int>(snap.obstacles.size());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::vector<Bounds> bounds;
    bounds.reserve(n);
    for (const auto& o : snap.obstacles) bounds.push_back(bounds_of(o));
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (distance(bounds[i].center, bounds[j].center) - bounds[i].radius - bounds[j].radius > gap) continue;
            if (obstacle_distance(snap.obstacles[i], snap.obstacles[j]) <= gap) {
                parent[find_root(parent, i)] = find_root(parent, j);
            }
        }
    }
    std::vector<std::vector<int>> members(n);
    for (int i = 0; i < n; ++i) members[find_root(parent, i)].push_back(snap.obstacles[i].id);
    std::vector<ObstacleGroup> groups;
    for (auto& m : members) {
        if (!m.empty()) groups.push_back(make_group(snap, m));
    }
    std::sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) { return a.key < b.key; });
    return groups;
}

std::vector<ObstacleGroup> interpolate_clusters(const Environment& env, double t) {
    return interpolate_clusters(occupied_at(env, t), env.interpolation_gap);
}

PairwiseDistances pairwise_min_distance(const Environment& env, double horizon, double step) {
    PairwiseDistances pd;
    const Snapshot s0 = occupied_at(env, 0.0);
    for (const auto& o : s0.obstacles) pd.ids.push_back(o.id);
    const std::size_t n = pd.ids.size();
    pd.d.assign(n * n, kInf);
    const int samples = static_cast<int>(std::floor(horizon / step + 1e-9));
    for (int k = 0; k <= samples; ++k) {
        const Snapshot s = k == 0 ? s0 : occupied_at(env, k * step);
        for (std::size_t i = 0; i < n; ++i) {
            pd.d[i * n + i] = 0.0;
            for (std::size_t j = i + 1; j < n; ++j) {
                const double dij = std::min(pd.d[i * n + j], obstacle_distance(s.obstacles[i], s.obstacles[j]));
                pd.d[i * n + j] = pd.d[j * n + i] = dij;
            }
        }
    }
    return pd;
}

std::vector<std::size_t> merged_components(const PairwiseDistances& pd, double gap) {
    const int n = static_cast<int>(pd.ids.size());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (pd.at(i, j) <= gap) {
                const int a = find_root(parent, i);
                const int b = find_root(parent, j);
                parent[std::max(a, b)] = std::min(a, b);
            }
        }
    }
    std::vector<std::size_t> out(n);
    for (int i = 0; i < n; ++i) out[i] = static_cast<std::size_t>(find_root(parent, i));
    return out;
}

GroupDistance distance_to_group(const ObstacleGroup& g, Vec2 r) {
    GroupDistance best{kInf, {}};
    for (const auto& p : g.region) {
        const geom::PointQuery q = geom::point_distance(r, p);
        if (q.distance < best.d) best = {q.distance, q.closest};
    }
    return best;
}

SafetyVerdict collision_check(const Snapshot& snap, Vec2 r, double d_safe) {
    const DistanceResult d = distance_to_environment(snap, r);
    return {d.d >= d_safe, d.d - d_safe, d.d};
}

SafetyVerdict collision_check(const Environment& env, double t, Vec2 r, double d_safe) {
    return collision_check(occupied_at(env, t), r, d_safe);
}

}  // namespace navkit
