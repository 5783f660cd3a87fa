#include <filesystem>

#include "doctest.h"
#include "navkit/scenario_io.hpp"
#include "navkit/sim.hpp"

using namespace navkit;
using doctest::Approx;

namespace {

std::string library(const std::string& name) {
    return std::string(NAVKIT_SOURCE_DIR) + "/scenarios/library/" + name + ".yaml";
}

Scenario straight(ControllerKind kind, Vec2 target) {
    Scenario sc;
    sc.name = "straight";
    RobotSpec r;
    r.kind = kind;
    r.target = target;
    r.limits = {0.0, 1.0, 1.0};
    sc.robots.push_back(r);
    return sc;
}

}  // namespace

TEST_CASE("empty world: straight-line navigation time") {
    for (auto kind : {ControllerKind::Bina, ControllerKind::Ena, ControllerKind::Naier}) {
        const RunLog log = run(straight(kind, {5, 0}));
        CHECK(log.outcome == Outcome::TargetReached);
        CHECK(std::abs(log.end_time - 5.0) <= 0.1 + 1e-9);
    }
}

TEST_CASE("starting on the target ends at t = 0") {
    const RunLog log = run(straight(ControllerKind::Ena, {0.05, 0}));
    CHECK(log.outcome == Outcome::TargetReached);
    CHECK(log.end_time == 0.0);
}

TEST_CASE("controller All is rejected by run") {
    CHECK_THROWS_AS(run(straight(ControllerKind::All, {5, 0})), std::invalid_argument);
    CHECK(controller_from_string("naier") == ControllerKind::Naier);
    CHECK(to_string(ControllerKind::Bina) == "bina");
    CHECK_THROWS(controller_from_string("foo"));
}

TEST_CASE("ENA against a static disc keeps d_safe along the whole log") {
    const Scenario sc = with_controller(load_scenario(library("ena_static_disc")), ControllerKind::Ena);
    const RunLog log = run(sc);
    CHECK(log.outcome == Outcome::TargetReached);
    for (const auto& rec : log.ticks) {
        CHECK(collision_check(sc.env, rec.t, rec.pose.position(), sc.env.d_safe).safe);
    }
    CHECK(log.min_substep_clearance >= sc.env.d_safe);
    const Metrics m = extract_metrics(log);
    REQUIRE(m.standoff_error);
    CHECK(*m.standoff_error <= 0.15);
}

TEST_CASE("runs are deterministic") {
    const Scenario sc = with_controller(load_scenario(library("moving_disc_crossing")), ControllerKind::Bina);
    const RunLog a = run(sc), b = run(sc);
    REQUIRE(a.ticks.size() == b.ticks.size());
    for (std::size_t i = 0; i < a.ticks.size(); ++i) {
        CHECK(a.ticks[i].pose.x == b.ticks[i].pose.x);
        CHECK(a.ticks[i].pose.y == b.ticks[i].pose.y);
        CHECK(a.ticks[i].control.u == b.ticks[i].control.u);
    }
}

TEST_CASE("path length equals the integral of the commanded speed") {
    for (const char* name : {"multi_obstacle_field", "corridor", "crowd_seek"}) {
        for (auto kind : {ControllerKind::Bina, ControllerKind::Ena, ControllerKind::Naier}) {
            const Scenario sc = with_controller(load_scenario(library(name)), kind);
            const RunLog log = run(sc);
            double integral = 0.0, logged = 0.0, chords = 0.0;
            for (std::size_t i = 0; i < log.ticks.size(); ++i) {
                const auto& rec = log.ticks[i];
                integral += rec.control.v * std::min(sc.sim.ts, log.end_time - rec.t);
                if (i + 1 < log.ticks.size()) {
                    logged += rec.control.v * sc.sim.ts;
                    chords += distance(rec.pose.position(), log.ticks[i + 1].pose.position());
                }
            }
            CHECK(std::abs(log.path_length - integral) <= 1e-3 * integral);
            CHECK(std::abs(chords - logged) <= 1e-3 * logged);
        }
    }
}

TEST_CASE("halving the period barely moves the trajectory") {
    for (const char* name : {"ena_static_disc", "multi_obstacle_field"}) {
        Scenario sc = with_controller(load_scenario(library(name)), ControllerKind::Naier);
        const RunLog coarse = run(sc);
        sc.sim.ts /= 2.0;
        sc.robots[0].naier.delta /= 2.0;
        const RunLog fine = run(sc);
        CHECK(coarse.outcome == Outcome::TargetReached);
        CHECK(fine.outcome == Outcome::TargetReached);
        const Vec2 target = sc.robots[0].target;
        CHECK(distance(coarse.ticks.back().pose.position(), target) <= sc.sim.capture_radius + 0.05);
        CHECK(distance(fine.ticks.back().pose.position(), target) <= sc.sim.capture_radius + 0.05);
    }
}

TEST_CASE("controls stay inside the limits on the library") {
    for (const auto& entry : std::filesystem::directory_iterator(std::string(NAVKIT_SOURCE_DIR) + "/scenarios/library")) {
        const Scenario base = load_scenario(entry.path().string());
        for (auto kind : {ControllerKind::Bina, ControllerKind::Ena, ControllerKind::Naier}) {
            const Scenario sc = with_controller(base, kind);
            const RunLog log = run(sc);
            for (const auto& rec : log.ticks) {
                const RobotLimits lim = sc.robots[0].limits;
                CHECK(rec.control.within(lim, 1e-9));
            }
        }
    }
}

TEST_CASE("metrics") {
    RunLog log;
    for (double d : {2.0, 1.1, 0.9, 1.4}) {
        TickRecord r;
        r.clearance = d;
        r.mode = "pursuit";
        log.ticks.push_back(r);
    }
    log.ticks[1].mode = "avoid";
    const Metrics m = extract_metrics(log);
    CHECK(m.min_clearance == 0.9);
    CHECK(m.avoid_time_fraction == Approx(0.25));
}

TEST_CASE("batch determinism and shape") {
    Scenario tmpl = load_scenario(std::string(NAVKIT_SOURCE_DIR) + "/scenarios/batch/constant_velocity.yaml");
    RandomizationSpec spec = *tmpl.batch;
    spec.runs = 3;
    const BatchTable a = run_batch(tmpl, spec, 99);
    const BatchTable b = run_batch(tmpl, spec, 99);
    REQUIRE(a.rows.size() == 3);
    CHECK(a.summary.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(a.rows[i].seed == b.rows[i].seed);
        for (std::size_t k = 0; k < 3; ++k) CHECK(a.rows[i].cells[k].navigation_time == b.rows[i].cells[k].navigation_time);
    }
    spec.runs = 1;
    const BatchTable one = run_batch(tmpl, spec, 5);
    REQUIRE(one.rows.size() == 1);
    Scenario single = tmpl;
    single.env = randomize_environment(tmpl, spec, one.rows[0].seed);
    const RunLog log = run(with_controller(single, ControllerKind::Ena));
    CHECK(one.rows[0].cells[1].navigation_time == log.end_time);
}

TEST_CASE("formation run on the side-5 square converges") {
    const Scenario sc = load_scenario(std::string(NAVKIT_SOURCE_DIR) + "/scenarios/formation/square.yaml");
    const FormationResult res = run_formation(sc, 3);
    CHECK(res.converged);
    CHECK(res.permutation);
    for (double e : res.error_x) CHECK(std::abs(e) <= 0.15);
    for (double e : res.error_y) CHECK(std::abs(e) <= 0.15);
    CHECK(res.heading_spread <= 0.05);
    for (const auto& rec : res.records) {
        for (const auto& c : rec.controls) {
            const bool v_ok = c.v == sc.formation->config.limits.v_min || c.v == sc.formation->config.limits.v_max;
            const double w = sc.formation->config.limits.u_max;
            CHECK(v_ok);
            CHECK((c.u == 0.0 || c.u == w || c.u == -w));
        }
    }
}

TEST_CASE("batch runs never end in a controller error") {
    for (const char* name : {"constant_velocity", "nonlinear_velocity"}) {
        const Scenario tmpl = load_scenario(std::string(NAVKIT_SOURCE_DIR) + "/scenarios/batch/" + name + ".yaml");
        const BatchTable t = run_batch(tmpl, *tmpl.batch, tmpl.sim.seed);
        for (const auto& row : t.rows) {
            for (const auto& cell : row.cells) {
                INFO(name << " run " << row.run << ": " << cell.error);
                CHECK(cell.error.empty());
            }
        }
    }
}
