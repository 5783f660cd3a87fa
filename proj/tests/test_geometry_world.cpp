#include <random>

#include "doctest.h"
#include "navkit/core_math.hpp"
#include "navkit/world.hpp"
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

Obstacle square(int id, Vec2 c, double half) {
    Obstacle o;
    o.id = id;
    o.shape = PolygonShape{{{-half, -half}, {half, -half}, {half, half}, {-half, half}}};
    o.origin = c;
    return o;
}

}  // namespace

TEST_CASE("primitive distance against segment oracle") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> c(-4.0, 4.0), r(0.0, 1.0);
    const g::Primitive poly = g::Primitive::polygon({{-1, -1}, {1, -1}, {1.5, 0.5}, {0, 1.2}, {-1.2, 0.3}});
    for (int i = 0; i < 2000; ++i) {
        const Vec2 p{c(rng), c(rng)};
        const g::Primitive cap = g::Primitive::capsule({c(rng), c(rng)}, {c(rng), c(rng)}, r(rng));
        CHECK(g::point_distance(p, cap).distance ==
              Approx(oracle::seg_primitive(p, p, cap)).epsilon(1e-12).scale(1.0));
        CHECK(g::point_distance(p, poly).distance ==
              Approx(oracle::seg_primitive(p, p, poly)).epsilon(1e-12).scale(1.0));
        CHECK(g::point_distance(p, poly).inside == oracle::in_convex(p, poly.core));
    }
}

TEST_CASE("convex hull and enclosing circle") {
    const auto hull = g::convex_hull({{0, 0}, {2, 0}, {1, 1}, {2, 2}, {0, 2}, {1, 0.5}});
    CHECK(hull.size() == 4);
    const std::vector<Vec2> pts{{0, 0}, {4, 0}, {2, 1}};
    const g::Circle mec = g::min_enclosing_circle(pts);
    CHECK(mec.center.x == Approx(2.0));
    CHECK(mec.center.y == Approx(0.0).scale(1.0));
    CHECK(mec.radius == Approx(2.0));
    const std::vector<g::Primitive> one{g::Primitive::disc({3, -1}, 0.7)};
    const g::Circle cc = g::covering_circle(one);
    CHECK(cc.radius == Approx(0.7));
    CHECK(cc.center.x == Approx(3.0));
}

TEST_CASE("ray_cast hits an inflated disc") {
    const auto hit = g::ray_cast({0, 0}, {1, 0}, g::Primitive::disc({5, 0}, 1.0), 0.5);
    REQUIRE(hit);
    CHECK(*hit == Approx(3.5));
    CHECK_FALSE(g::ray_cast({0, 0}, {0, 1}, g::Primitive::disc({5, 0}, 1.0)));
    CHECK(*g::ray_cast({5, 0}, {1, 0}, g::Primitive::disc({5, 0}, 1.0)) == 0.0);
}

TEST_CASE("occupied_at follows motion laws") {
    Environment env;
    env.obstacles.push_back(disc(1, {3, 0}, 1.0));
    env.obstacles.push_back(disc(2, {0, 0}, 0.5, {ConstantVelocity{{1, 0}}}));
    env.obstacles.push_back(disc(3, {1, 0}, 0.1, {RotationMotion{{0, 0}, kPi / 2}}));
    const Snapshot s0 = occupied_at(env, 0.0);
    const Snapshot s = occupied_at(env, 2.0);
    CHECK(s0.obstacles[0].prims[0].core[0] == Vec2{3, 0});
    CHECK(s.obstacles[0].prims[0].core[0] == Vec2{3, 0});
    CHECK(s.obstacles[1].prims[0].core[0].x == Approx(2.0));
    const Snapshot s1 = occupied_at(env, 1.0);
    CHECK(s1.obstacles[2].prims[0].core[0].x == Approx(0.0).scale(1.0));
    CHECK(s1.obstacles[2].prims[0].core[0].y == Approx(1.0));
}

TEST_CASE("distance_to_environment") {
    Environment env;
    env.obstacles.push_back(disc(1, {5, 0}, 1.0));
    auto r = distance_to_environment(env, 0.0, {0, 0});
    CHECK(r.d == Approx(4.0));
    CHECK(r.closest.x == Approx(4.0));
    CHECK(r.obstacle_id == 1);

    Environment box;
    box.obstacles.push_back(square(4, {3, 0}, 1.0));
    r = distance_to_environment(box, 0.0, {0, 0});
    CHECK(r.d == Approx(2.0));
    CHECK(r.closest.x == Approx(2.0));
    CHECK(r.closest.y == Approx(0.0).scale(1.0));

    Environment two;
    two.obstacles.push_back(disc(1, {0, 7}, 1.0));
    two.obstacles.push_back(disc(2, {5, 0}, 1.0));
    CHECK(distance_to_environment(two, 0.0, {0, 0}).obstacle_id == 2);

    CHECK(distance_to_environment(Environment{}, 0.0, {0, 0}).obstacle_id == -1);
}

TEST_CASE("enlarged distance and collision check") {
    Environment env;
    env.d_safe = 1.0;
    env.obstacles.push_back(disc(1, {5, 0}, 1.0));
    CHECK(enlarged_distance(env, 0.0, {0, 0}) == Approx(3.0));
    CHECK(enlarged_distance(env, 0.0, {3.5, 0}) == 0.0);
    CHECK(enlarged_distance(env, 0.0, {3.0, 0}) == 0.0);

    auto v = collision_check(env, 0.0, {5 - 1 - 0.832, 0}, 0.8);
    CHECK(v.safe);
    CHECK(v.margin == Approx(0.032));
    CHECK(collision_check(env, 0.0, {3.0, 0}, 1.0).safe);
    CHECK_FALSE(collision_check(env, 0.0, {4.0, 0}, 0.8).safe);
}

TEST_CASE("distance is 1-Lipschitz in the query point") {
    Environment env;
    env.obstacles.push_back(disc(1, {5, 0}, 1.0));
    env.obstacles.push_back(square(2, {-3, 2}, 1.0));
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> c(-8.0, 8.0);
    const Snapshot s = occupied_at(env, 0.0);
    for (int i = 0; i < 2000; ++i) {
        const Vec2 a{c(rng), c(rng)}, b{c(rng), c(rng)};
        CHECK(std::abs(distance_to_environment(s, a).d - distance_to_environment(s, b).d) <= distance(a, b) + 1e-12);
    }
}

TEST_CASE("displacement speed stays under the point-speed bound") {
    std::vector<Obstacle> obs{
        disc(1, {0, 0}, 1.0, {ConstantVelocity{{0.3, 0.4}}}),
        disc(2, {2, 0}, 1.0, {ArcMotion{{0, 0}, 0.5}}),
        disc(3, {0, 0}, 0.5, {SinusoidMotion{{0.2, 0}, 0.8, 1.3}}),
        square(4, {3, 1}, 1.0),
    };
    obs[3].motion = {RotationMotion{{0, 0}, 0.7}};
    for (const auto& o : obs) {
        Environment env;
        env.obstacles.push_back(o);
        const double bound = max_point_speed(o);
        for (double t = 0.0; t < 10.0; t += 0.05) {
            const auto a = occupied_at(env, t).obstacles[0].prims[0].core;
            const auto b = occupied_at(env, t + 0.05).obstacles[0].prims[0].core;
            for (std::size_t k = 0; k < a.size(); ++k) CHECK(distance(a[k], b[k]) / 0.05 <= bound + 1e-9);
        }
    }
}

TEST_CASE("interpolate_clusters") {
    Environment env;
    env.interpolation_gap = 0.5;
    env.obstacles.push_back(disc(1, {0, 0}, 1.0));
    env.obstacles.push_back(disc(2, {2.3, 0}, 1.0));
    CHECK(interpolate_clusters(env, 0.0).size() == 1);
    env.obstacles[1].origin = {4.0, 0};
    CHECK(interpolate_clusters(env, 0.0).size() == 2);

    Environment chain;
    chain.interpolation_gap = 0.5;
    for (int i = 0; i < 3; ++i) chain.obstacles.push_back(disc(i + 1, {2.4 * i, 0}, 1.0));
    const Snapshot s = occupied_at(chain, 0.0);
    bool linked = true;
    for (std::size_t i = 0; i + 1 < s.obstacles.size(); ++i) {
        linked = linked && oracle::seg_primitive(s.obstacles[i].prims[0].core[0], s.obstacles[i].prims[0].core[0],
                                                 s.obstacles[i + 1].prims[0]) - 1.0 <= 0.5;
    }
    CHECK(linked);
    const auto groups = interpolate_clusters(chain, 0.0);
    REQUIRE(groups.size() == 1);
    CHECK(groups[0].members.size() == 3);
    CHECK(groups[0].key == 1);
}

TEST_CASE("clusters are monotone in the gap and groups are no farther than members") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> c(-6.0, 6.0), r(0.3, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        Environment env;
        for (int i = 0; i < 6; ++i) env.obstacles.push_back(disc(i, {c(rng), c(rng)}, r(rng)));
        const Snapshot s = occupied_at(env, 0.0);
        std::size_t prev = s.obstacles.size() + 1;
        for (double gap : {0.0, 0.5, 1.0, 2.0, 4.0}) {
            const auto groups = interpolate_clusters(s, gap);
            CHECK(groups.size() <= prev);
            prev = groups.size();
        }
        const Vec2 q{c(rng) * 2, c(rng) * 2};
        for (const auto& grp : interpolate_clusters(s, 1.0)) {
            double member_min = std::numeric_limits<double>::infinity();
            for (const auto& o : s.obstacles) {
                if (std::find(grp.members.begin(), grp.members.end(), o.id) != grp.members.end())
                    member_min = std::min(member_min, distance_to_obstacle(o, q));
            }
            CHECK(distance_to_group(grp, q).d <= member_min + 1e-9);
        }
    }
}

TEST_CASE("pairwise minimum distance over a horizon and merged components") {
    Environment env;
    env.obstacles.push_back(disc(1, {0, 0}, 1.0));
    env.obstacles.push_back(disc(2, {10, 0}, 1.0, {ConstantVelocity{{-1, 0}}}));
    env.obstacles.push_back(disc(3, {0, 20}, 1.0));
    const auto pd = pairwise_min_distance(env, 5.0);
    CHECK(pd.at(0, 1) == Approx(3.0).epsilon(1e-6));
    CHECK(pd.at(0, 2) == Approx(18.0));
    auto comp = merged_components(pd, 1.0);
    CHECK(comp[0] != comp[1]);
    const auto pd_long = pairwise_min_distance(env, 10.0);
    comp = merged_components(pd_long, 1.0);
    CHECK(comp[0] == comp[1]);
    CHECK(comp[2] == 2);
}

TEST_CASE("shape validation") {
    CHECK_THROWS_AS(validate_shape(DiscShape{-1.0}), std::invalid_argument);
    CHECK_THROWS_AS(validate_shape(PolygonShape{{{0, 0}, {1, 0}}}), std::invalid_argument);
    CHECK_NOTHROW(validate_shape(PolygonShape{{{0, 0}, {1, 0}, {0, 1}}}));
}
