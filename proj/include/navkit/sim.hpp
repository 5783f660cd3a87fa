#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "navkit/bina.hpp"
#include "navkit/ena.hpp"
#include "navkit/formation.hpp"
#include "navkit/naier.hpp"

namespace navkit {

enum class ControllerKind { Bina, Ena, Naier, All };

std::string to_string(ControllerKind k);
ControllerKind controller_from_string(const std::string& s);

struct RobotSpec {
    int id{0};
    Pose start;
    double initial_speed{0.0};
    Vec2 target;
    RobotLimits limits{0.0, 1.0, 1.0};
    ControllerKind kind{ControllerKind::Ena};
    BinaParams bina;
    EnaParams ena;
    NaierParams naier;
};

struct SimConfig {
    double duration{0.0};  ///< 0: timeout_factor times the straight-line time
    double ts{0.1};
    int substeps{10};
    std::uint64_t seed{1};
    double capture_radius{0.1};
    double timeout_factor{10.0};
};

struct FormationSetup {
    FormationConfig config;
    bool anonymous{false};
    std::vector<int> initial_index;  ///< anonymous mode; empty: all robots start on slot 0
    std::string schedule{"complete"};  ///< complete | ring | random
    double edge_probability{0.3};
    int window{5};
    double duration{300.0};
    double ts{0.02};
    double final_window{20.0};
    int rounds_period_cap{160};
    double spawn_extent{20.0};  ///< random starts inside [0, extent]^2 when no poses are given
    std::vector<Pose> starts;
    std::vector<double> speeds;
};

struct RandomizationSpec {
    int count_min{3};
    int count_max{6};
    double radius_min{0.3};
    double radius_max{1.0};
    double speed_min{0.0};
    double speed_max{0.4};
    Vec2 region_min{2.0, -6.0};
    Vec2 region_max{18.0, 6.0};
    std::string motion{"constant"};  ///< constant | nonlinear
    double keep_clear{2.5};          ///< minimum initial distance from start and target
    int runs{25};
};

struct Scenario {
    std::string name;
    std::string description;
    bool reconstructed{true};
    Environment env;
    std::vector<RobotSpec> robots;
    SimConfig sim;
    std::optional<FormationSetup> formation;
    std::optional<RandomizationSpec> batch;
};

enum class Outcome { TargetReached, Collision, Timeout, Aborted };
std::string to_string(Outcome o);

struct TickRecord {
    double t{0.0};
    int robot_id{0};
    Pose pose;
    ControlInput control;
    std::string mode;
    double clearance{0.0};
    int engaged{-1};
    double avoid_angle{std::numeric_limits<double>::quiet_NaN()};
};

struct RunLog {
    std::string scenario;
    std::string controller;
    std::vector<TickRecord> ticks;
    Outcome outcome{Outcome::Timeout};
    double end_time{0.0};
    std::string diagnostic;
    double d_safe{0.0};
    std::optional<double> standoff;  ///< d0 of the distance-keeping controller
    std::optional<double> standoff_band;
    double min_substep_clearance{std::numeric_limits<double>::infinity()};
    double path_length{0.0};
    int blocked_decisions{0};
    ValidationReport validation;
};

struct Metrics {
    Outcome outcome{Outcome::Timeout};
    double navigation_time{0.0};
    double min_clearance{std::numeric_limits<double>::infinity()};
    double path_length{0.0};
    double avoid_time_fraction{0.0};
    std::optional<double> standoff_error;
    std::optional<double> avoid_angle_mean;
    std::optional<double> avoid_angle_std;
    int blocked_decisions{0};
};

Metrics extract_metrics(const RunLog& log);

struct DecisionEvent {
    double t{0.0};
    int robot_id{0};
    const Pose& pose;
    const NavDecision& decision;
    const Snapshot& snap;
    const Environment& env;
};
using DecisionObserver = std::function<void(const DecisionEvent&)>;

/// Builds the controller configured in `spec` (limits copied into its params).
std::unique_ptr<Navigator> make_navigator(const RobotSpec& spec, const Environment& env, double ts);

/// Validator report for one robot's controller.
ValidationReport validate_robot(const Scenario& sc, const RobotSpec& spec);

/// Closed-loop run of every robot in the scenario. Throws
/// std::invalid_argument when a robot's controller is All.
RunLog run(const Scenario& sc, const DecisionObserver& observer = {});

/// The scenario with every robot switched to `kind`.
Scenario with_controller(const Scenario& sc, ControllerKind kind);

struct ComparisonEntry {
    ControllerKind kind{ControllerKind::Bina};
    std::optional<RunLog> log;
    Metrics metrics;
    std::string error;
};
std::vector<ComparisonEntry> compare(const Scenario& sc);

struct BatchCell {
    Outcome outcome{Outcome::Timeout};
    double navigation_time{0.0};
    double min_clearance{0.0};
    std::string error;
};

struct BatchRow {
    int run{0};
    std::uint64_t seed{0};
    std::vector<BatchCell> cells;  ///< one per controller
    int best{-1};                  ///< index of the fastest successful controller
};

struct BatchSummary {
    int wins{0};
    int successes{0};
    int collisions{0};
    double mean_time{0.0};
    double std_time{0.0};
};

struct BatchTable {
    std::vector<ControllerKind> controllers;
    std::vector<BatchRow> rows;
    std::vector<BatchSummary> summary;
};

/// Environment for one randomized run, built from the template's start and target.
Environment randomize_environment(const Scenario& tmpl, const RandomizationSpec& spec, std::uint64_t seed);

/// Concurrent batch; the number of workers is capped by NAVKIT_THREADS.
BatchTable run_batch(const Scenario& tmpl, const RandomizationSpec& spec, std::uint64_t seed,
                     const std::vector<ControllerKind>& controllers = {ControllerKind::Bina, ControllerKind::Ena,
                                                                       ControllerKind::Naier});

int worker_count();

struct FormationRecord {
    double t{0.0};
    std::vector<Pose> poses;
    std::vector<ControlInput> controls;
};

struct FormationResult {
    std::vector<FormationRecord> records;
    std::vector<std::vector<int>> assignment_trace;  ///< index per robot at each round, starting with the initial one
    std::vector<int> final_index;
    std::vector<Vec2> slots;
    std::vector<Vec2> slot_points;  ///< world-frame slot positions at the end, from robot 0's consensus state
    std::vector<double> error_x;  ///< consecutive-slot differences minus their desired values
    std::vector<double> error_y;
    double heading_spread{0.0};
    bool permutation{false};
    bool stable{false};
    bool converged{false};
    int rounds_period{0};
    int attempts{1};
    int busy_events{0};
};

/// Single formation run with a fixed N.
FormationResult run_formation_once(const Scenario& sc, std::uint64_t seed, int rounds_period);

/// Runs with N doubled after each non-converged attempt, up to the cap.
FormationResult run_formation(const Scenario& sc, std::uint64_t seed);

/// Flattened per-tick log of a formation run (mode "formation").
RunLog formation_log(const Scenario& sc, const FormationResult& res);

}  // namespace navkit
