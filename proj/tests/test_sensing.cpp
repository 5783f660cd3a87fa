#include <random>

#include "doctest.h"
#include "navkit/sensing.hpp"
#include "oracles.hpp"

using namespace navkit;
using doctest::Approx;
namespace g = navkit::geom;

namespace {

Obstacle disc(int id, Vec2 c, double r, MotionLaw m = {}) {
    Obstacle o;
    o.id = id;
    o.shape = DiscShape{r};
    o.origin = c;
    o.motion = std::move(m);
    return o;
}

std::vector<g::Primitive> random_world(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> c(-5.0, 5.0), r(0.0, 1.0), coin(0.0, 1.0);
    std::vector<g::Primitive> prims;
    const int count = 1 + static_cast<int>(coin(rng) * 4);
    for (int i = 0; i < count; ++i) {
        const Vec2 a{c(rng), c(rng)};
        const double pick = coin(rng);
        if (pick < 0.4) {
            prims.push_back(g::Primitive::disc(a, r(rng)));
        } else if (pick < 0.7) {
            prims.push_back(g::Primitive::capsule(a, a + Vec2{c(rng) * 0.3, c(rng) * 0.3}, 0.5 * r(rng)));
        } else {
            const double s = 0.2 + r(rng);
            prims.push_back(g::Primitive::polygon({a, a + Vec2{s, 0}, a + Vec2{s, s}, a + Vec2{0, 0.7 * s}}));
        }
    }
    return prims;
}

}  // namespace

TEST_CASE("range sensor finite difference") {
    Environment env;
    env.obstacles.push_back(disc(1, {5, 0}, 1.0, {ConstantVelocity{{-1, 0}}}));
    RangeSensor s(0.1);
    const Pose p{};
    auto r0 = s.sample(env, 0.0, p);
    CHECK(r0.detected);
    CHECK(r0.d == Approx(4.0));
    CHECK(r0.d_dot == 0.0);
    auto r1 = s.sample(env, 0.1, p);
    CHECK(std::abs(r1.d_dot + 1.0) <= 1e-6);

    Environment still;
    still.obstacles.push_back(disc(1, {5, 0}, 1.0));
    RangeSensor q(0.1);
    q.sample(still, 0.0, p);
    CHECK(q.sample(still, 0.1, p).d_dot == 0.0);
}

TEST_CASE("range sensor reports nothing beyond max range") {
    Environment env;
    env.obstacles.push_back(disc(1, {30, 0}, 1.0));
    RangeSensor s(0.1, 20.0);
    const auto r = s.sample(env, 0.0, Pose{});
    CHECK_FALSE(r.detected);
    CHECK(r.obstacle_id == -1);
}

TEST_CASE("range equals the minimum over sampled boundaries") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> c(-10.0, 10.0);
    for (int trial = 0; trial < 100; ++trial) {
        Environment env;
        env.interpolation_gap = 0.0;
        env.obstacles.push_back(disc(1, {c(rng), c(rng)}, 1.0));
        env.obstacles.push_back(disc(2, {c(rng), c(rng)}, 0.5));
        const Vec2 r{c(rng) * 2, c(rng) * 2};
        const Snapshot s = occupied_at(env, 0.0);
        bool inside = false;
        double best = std::numeric_limits<double>::infinity();
        for (const auto& o : s.obstacles) {
            inside = inside || distance(r, o.prims[0].core[0]) <= o.prims[0].radius;
            for (const Vec2 q : oracle::boundary_samples(o.prims[0], 10000)) best = std::min(best, distance(r, q));
        }
        if (inside || distance(s.obstacles[0].prims[0].core[0], s.obstacles[1].prims[0].core[0]) <= 1.5) continue;
        const auto groups = interpolate_clusters(s, 0.0);
        CHECK(std::abs(measure_range(groups, r, 100.0).d - best) <= 1e-3);
    }
}

TEST_CASE("vision cone of a disc") {
    const std::vector<g::Primitive> d1{g::Primitive::disc({5, 0}, 1.0)};
    auto c = vision_cone_of(d1, Pose{}, {});
    CHECK(c.alpha1 == Approx(-std::asin(0.2)));
    CHECK(c.alpha2 == Approx(0.2014).epsilon(1e-4));
    CHECK(c.d == Approx(4.0));

    const std::vector<g::Primitive> d2{g::Primitive::disc({0, 5}, 1.0)};
    c = vision_cone_of(d2, Pose{}, {});
    CHECK(0.5 * (c.alpha1 + c.alpha2) == Approx(kPi / 2));
    CHECK(0.5 * (c.alpha2 - c.alpha1) == Approx(0.2014).epsilon(1e-4));

    CHECK_THROWS_AS(vision_cone_of(d1, Pose{5, 0, 0}, {}), std::domain_error);
}

TEST_CASE("vision cone of a polygon matches vertex bearings") {
    const std::vector<Vec2> v{{3, -1}, {5, -2}, {6, 1}, {4, 2}};
    const std::vector<g::Primitive> poly{g::Primitive::polygon(v)};
    const auto c = vision_cone_of(poly, Pose{}, {});
    double lo = 10, hi = -10;
    for (const Vec2 p : v) {
        lo = std::min(lo, std::atan2(p.y, p.x));
        hi = std::max(hi, std::atan2(p.y, p.x));
    }
    CHECK(c.alpha1 == Approx(lo));
    CHECK(c.alpha2 == Approx(hi));
}

TEST_CASE("vision cone agrees with boundary sampling") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> a(-kPi, kPi), far(4.0, 12.0);
    int checked = 0;
    while (checked < 300) {
        auto prims = random_world(rng);
        for (auto& p : prims) {
            for (auto& q : p.core) q = q * 0.4;
        }
        const Vec2 viewer = unit_from_angle(a(rng)) * far(rng);
        bool inside = false;
        for (const auto& p : prims) inside = inside || g::point_distance(viewer, p).inside;
        if (inside) continue;
        std::vector<Vec2> pts;
        for (const auto& p : prims) {
            const auto s = oracle::boundary_samples(p, 4096);
            pts.insert(pts.end(), s.begin(), s.end());
        }
        const double ref = std::atan2(prims[0].core[0].y - viewer.y, prims[0].core[0].x - viewer.x);
        const auto [lo, hi] = oracle::bearing_span(pts, viewer, ref);
        if (hi - lo >= kPi - 0.1) continue;
        const auto c = vision_cone_of(prims, Pose{viewer.x, viewer.y, 0.0}, {});
        CHECK(std::abs(oracle::wrap(c.alpha1 - lo)) <= 1e-3);
        CHECK(std::abs(oracle::wrap(c.alpha2 - hi)) <= 1e-3);
        ++checked;
    }
}

TEST_CASE("sensed cone carries the group velocity") {
    Environment env;
    env.obstacles.push_back(disc(1, {5, 0}, 1.0, {ConstantVelocity{{0, 0.5}}}));
    const auto groups = interpolate_clusters(env, 1.0);
    const auto c = sense_vision_cone(env, 1.0, Pose{}, groups[0], 0.1);
    CHECK(c.v_obs.x == Approx(0.0).scale(1.0));
    CHECK(c.v_obs.y == Approx(0.5));
    CHECK(c.group_key == 1);
}

TEST_CASE("sector examples") {
    const Pose p{};
    const std::vector<g::Primitive> a{g::Primitive::disc({2, 0}, 0.0)};
    CHECK(sector_value(a, 1e-6, p, 4.0, 0.0));
    const std::vector<g::Primitive> b{g::Primitive::disc({0, 1}, 0.0)};
    CHECK_FALSE(sector_value(b, 1e-6, p, 4.0, kPi / 2));
    const std::vector<g::Primitive> c{g::Primitive::disc({1.99, 1.99}, 0.0)};
    CHECK(sector_value(c, 1e-9, p, 4.0, std::atan2(1.99, 1.99)));
    CHECK(distance({1.99, 1.99}, {2, 0}) <= 2.0);
}

TEST_CASE("sector scan matches the disc-membership oracle") {
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> a(-kPi, kPi), ds(0.5, 6.0), c(-3.0, 3.0), inf(0.0, 0.8);
    long mismatches = 0, cells = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto prims = random_world(rng);
        const Pose pose{c(rng), c(rng), a(rng)};
        const double d = ds(rng), grow = inf(rng);
        const SectorScan scan = scan_sectors(prims, grow, pose, d);
        for (std::size_t k = 0; k < scan.size(); ++k) {
            ++cells;
            if ((scan.m[k] != 0) != oracle::sector_m(prims, grow, pose.position(), pose.theta, d, scan.bearing(k)))
                ++mismatches;
        }
    }
    CHECK(cells == 200 * 720);
    CHECK(mismatches == 0);
}

TEST_CASE("sector scan invariants") {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> a(-kPi, kPi), c(-3.0, 3.0);
    for (int trial = 0; trial < 100; ++trial) {
        const auto prims = random_world(rng);
        const Pose pose{c(rng), c(rng), a(rng)};
        const SectorScan small = scan_sectors(prims, 0.3, pose, 2.0);
        const SectorScan large = scan_sectors(prims, 0.3, pose, 4.0);
        for (std::size_t k = 0; k < small.size(); ++k) {
            if (std::abs(small.offset(k)) >= kPi / 2) CHECK(small.m[k] == 0);
            if (small.m[k]) CHECK(large.m[k]);
        }
    }
    CHECK_THROWS_AS(scan_sectors({}, 0.3, Pose{}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(scan_sectors({}, 0.3, Pose{}, 1.0, 0.7), std::invalid_argument);
}

TEST_CASE("sense_target") {
    CHECK(sense_target(Pose{}, {1, 0}).h == 0.0);
    CHECK(sense_target(Pose{}, {0, 1}).h == Approx(kPi / 2));
    CHECK(sense_target(Pose{}, {-1, 0}).h == Approx(kPi));
    CHECK(sense_target(Pose{}, {3, 4}).distance == Approx(5.0));
}
