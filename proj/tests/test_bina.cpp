#include <random>

#include "doctest.h"
#include "navkit/bina.hpp"
#include "oracles.hpp"
#include "validator_cases.hpp"

using namespace navkit;
using doctest::Approx;

namespace {

VisionConeReading cone(double a1, double a2, Vec2 v = {}) {
    VisionConeReading r;
    r.alpha1 = a1;
    r.alpha2 = a2;
    r.v_obs = v;
    r.d = 2.0;
    return r;
}

BinaParams params(double alpha0 = 0.9, double vmax = 1.0, double v = 0.5) {
    BinaParams p;
    p.alpha0 = alpha0;
    p.limits = {0.0, vmax, 1.0};
    p.v_obstacle = v;
    p.c = 2.0;
    return p;
}

}  // namespace

TEST_CASE("enlarge_cone") {
    auto [b1, b2] = enlarge_cone(cone(-0.2, 0.2), 0.9);
    CHECK(b1 == Approx(-1.1));
    CHECK(b2 == Approx(1.1));
    std::tie(b1, b2) = enlarge_cone(cone(-0.2, 0.2), 0.0);
    CHECK(b1 == Approx(-0.2));
    CHECK(b2 == Approx(0.2));
    std::tie(b1, b2) = enlarge_cone(cone(2.0, 3.0), 0.5);
    CHECK(b2 == Approx(3.5 - 2.0 * oracle::pi));
    CHECK(b2 == Approx(-2.7831).epsilon(1e-4));
}

TEST_CASE("occlusion_vectors") {
    auto [l1, l2] = occlusion_vectors(0.0, kPi / 2, 1.0, 0.5);
    CHECK(l1.x == Approx(0.5));
    CHECK(l1.y == 0.0);
    CHECK(l2.x == Approx(0.0).scale(1.0));
    CHECK(l2.y == Approx(0.5));
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> a(-kPi, kPi);
    for (int i = 0; i < 100; ++i) {
        auto [p, q] = occlusion_vectors(a(rng), a(rng), 1.3, 0.4);
        CHECK(p.norm() == Approx(0.9));
        CHECK(q.norm() == Approx(0.9));
    }
    CHECK_THROWS_AS(occlusion_vectors(0.0, 0.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("select_boundary") {
    const Vec2 ahead{1, 0};
    CHECK(select_boundary(unit_from_angle(0.4), unit_from_angle(-0.4), {}, ahead) == 1);
    CHECK(select_boundary(unit_from_angle(0.1), unit_from_angle(-0.7), {}, ahead) == 1);
    // An obstacle moving down drags candidate 2 toward the heading.
    const Vec2 l1 = unit_from_angle(0.5) * 0.5, l2 = unit_from_angle(-0.6) * 0.5;
    const Vec2 v_obs{0.0, 0.4};
    const double g1 = std::abs(oracle::wrap((v_obs + l1).bearing()));
    const double g2 = std::abs(oracle::wrap((v_obs + l2).bearing()));
    REQUIRE(g2 < g1);
    CHECK(select_boundary(l1, l2, {}, ahead) == 1);
    CHECK(select_boundary(l1, l2, v_obs, ahead) == 2);
}

TEST_CASE("select_boundary is invariant under common rotation") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> a(-kPi, kPi), m(0.1, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const Vec2 l1 = unit_from_angle(a(rng)) * m(rng), l2 = unit_from_angle(a(rng)) * m(rng);
        const Vec2 vo = unit_from_angle(a(rng)) * 0.3 * m(rng), vr = unit_from_angle(a(rng));
        const double rot = a(rng);
        const int h = select_boundary(l1, l2, vo, vr);
        const int hr = select_boundary(rotated(l1, rot), rotated(l2, rot), rotated(vo, rot), rotated(vr, rot));
        const double g1 = std::abs(ccw_angle_from_to(vo + l1, vr)), g2 = std::abs(ccw_angle_from_to(vo + l2, vr));
        if (std::abs(g1 - g2) > 1e-9) CHECK(h == hr);
    }
}

TEST_CASE("avoid_control speed and turn") {
    auto c = avoid_control(cone(-0.2, 0.2), params(0.9, 1.0, 0.5), {1, 0});
    CHECK(c.v == Approx(0.5));

    // v_obs perpendicular to l_1, |v_obs| = 0.3, |l_1| = 0.4.
    const BinaParams p = params(0.5, 1.0, 0.6);
    const Vec2 l1_dir = unit_from_angle(-0.5);
    c = avoid_control(cone(0.0, 0.0, perp(l1_dir) * 0.3), p, {1, 0}, 1);
    CHECK(c.v == Approx(std::hypot(0.3, 0.4)));

    const double dir = avoid_direction(cone(-0.2, 0.2), params(), 1);
    c = avoid_control(cone(-0.2, 0.2), params(), unit_from_angle(dir), 1, 0.1);
    CHECK(c.u == Approx(0.0).scale(1.0));
    c = avoid_control(cone(-0.2, 0.2), params(), {1, 0}, 1);
    CHECK(c.u == -1.0);
    c = avoid_control(cone(-0.2, 0.2), params(), {1, 0}, 2);
    CHECK(c.u == 1.0);
}

TEST_CASE("avoid_control respects the limits for any input") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> a(-kPi, kPi), w(0.0, 1.0);
    const BinaParams p = params(0.9, 1.0, 0.5);
    for (int i = 0; i < 5000; ++i) {
        const double a1 = a(rng);
        const auto r = cone(a1, a1 + w(rng), unit_from_angle(a(rng)) * 0.5 * w(rng));
        const auto c = avoid_control(r, p, unit_from_angle(a(rng)), std::nullopt, w(rng) > 0.5 ? 0.1 : 0.0, 0.1 * w(rng));
        CHECK(c.within(p.limits));
    }
}

TEST_CASE("pursuit_control") {
    const BinaParams p = params();
    auto c = pursuit_control(p, 0.3, 0.3);
    CHECK(c.v == 1.0);
    CHECK(c.u == 0.0);
    CHECK(pursuit_control(p, 0.5, 0.0).u == 1.0);
    CHECK(pursuit_control(p, -0.5, 0.0).u == -1.0);
}

TEST_CASE("switch_mode rules") {
    BinaParams p = params(kPi / 3);
    p.c = 2.0;
    const double a = avoidance_offset(1.0, kPi / 3);
    CHECK(a == Approx(1.0));
    BinaMode m = switch_mode({}, 1.95, 2.05, 0.0, 0.0, p, a, 3.0, 7);
    CHECK(m.avoiding());
    CHECK(m.obstacle_id == 7);
    CHECK(m.entered_at == 3.0);
    CHECK_FALSE(switch_mode({}, 1.95, std::nullopt, 0.0, 0.0, p, a).avoiding());
    CHECK_FALSE(switch_mode({}, 2.05, 2.10, 0.0, 0.0, p, a).avoiding());
    CHECK_FALSE(switch_mode({}, 1.95, 1.90, 0.0, 0.0, p, a).avoiding());
    CHECK_FALSE(switch_mode(m, 1.05, 1.0, 0.3, 0.3, p, a).avoiding());
    CHECK(switch_mode(m, 1.2, 1.0, 0.3, 0.3, p, a).avoiding());
    CHECK(switch_mode(m, 1.05, 1.0, 0.3, 0.8, p, a).avoiding());
    CHECK_FALSE(switch_mode(m, 1.05, 1.0, 0.3, 0.8, p, a, 0.0, -1, true).avoiding());
}

TEST_CASE("turn demand and alpha0 bound") {
    CHECK(turn_demand(1.0, 0.5, 1.0, 1.0) == Approx(0.4330).epsilon(1e-4));
    CHECK(turn_demand(1.0, 0.5, 1.0, 1.0) == Approx(oracle::turn_demand(1.0, 0.5, 1.0, 1.0)));
    CHECK(turn_demand(0.8, 0.3, 0.9, 0.5) == Approx(oracle::turn_demand(0.8, 0.3, 0.9, 0.5)));
    CHECK(std::acos(1.0 / 2.0) == Approx(kPi / 3));
}

TEST_CASE("validator margins on hand cases") {
    for (const auto& c : cases::bina_cases()) {
        INFO(c.label);
        CHECK(cases::mismatch(c) == "");
    }
}

TEST_CASE("validator flags non-disc obstacles") {
    Environment env;
    Obstacle o;
    o.id = 3;
    o.shape = PolygonShape{{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}};
    o.origin = {5, 0};
    env.obstacles.push_back(o);
    const auto r = validate_bina(env, {10, 0}, params(), 5.0);
    REQUIRE(r.size() == 1);
    CHECK_FALSE(r[0].applicable);
    CHECK(all_pass(r));
}

TEST_CASE("params validation") {
    BinaParams p = params();
    CHECK_NOTHROW(p.validate());
    p.alpha0 = kPi / 2;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = params(0.9, 1.0, 1.0);
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
