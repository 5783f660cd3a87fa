#include "navkit/scenario_io.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <memory>
#include <sstream>

namespace navkit {

namespace {

int line_of(const YAML::Node& n) { return n.Mark().is_null() ? 0 : n.Mark().line + 1; }

[[noreturn]] void fail(const YAML::Node& n, const std::string& msg) { throw ScenarioError(msg, line_of(n)); }

void allow_keys(const YAML::Node& map, std::initializer_list<const char*> keys, const std::string& where) {
    if (!map.IsMap()) fail(map, where + ": expected a mapping");
    for (const auto& kv : map) {
        const auto key = kv.first.as<std::string>();
        if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; })) {
            fail(kv.first, where + ": unknown key '" + key + "'");
        }
    }
}

const YAML::Node required(const YAML::Node& map, const char* key, const std::string& where) {
    const YAML::Node n = map[key];
    if (!n) fail(map, where + ": missing key '" + key + "'");
    return n;
}

double as_double(const YAML::Node& n, const std::string& what) {
    try {
        return n.as<double>();
    } catch (const YAML::Exception&) {
        fail(n, what + ": expected a number");
    }
}

double get(const YAML::Node& map, const char* key, double fallback, const std::string& where) {
    const YAML::Node n = map[key];
    return n ? as_double(n, where + "." + key) : fallback;
}

int get_int(const YAML::Node& map, const char* key, int fallback, const std::string& where) {
    const YAML::Node n = map[key];
    if (!n) return fallback;
    try {
        return n.as<int>();
    } catch (const YAML::Exception&) {
        fail(n, where + "." + key + ": expected an integer");
    }
}

bool get_bool(const YAML::Node& map, const char* key, bool fallback, const std::string& where) {
    const YAML::Node n = map[key];
    if (!n) return fallback;
    try {
        return n.as<bool>();
    } catch (const YAML::Exception&) {
        fail(n, where + "." + key + ": expected true or false");
    }
}

std::string get_str(const YAML::Node& map, const char* key, const std::string& fallback, const std::string& where) {
    const YAML::Node n = map[key];
    if (!n) return fallback;
    if (!n.IsScalar()) fail(n, where + "." + key + ": expected a string");
    return n.as<std::string>();
}

std::vector<double> numbers(const YAML::Node& n, std::size_t count, const std::string& what) {
    if (!n.IsSequence() || (count > 0 && n.size() != count)) {
        fail(n, what + ": expected a list of " + (count > 0 ? std::to_string(count) + " " : "") + "numbers");
    }
    std::vector<double> out;
    for (const auto& e : n) out.push_back(as_double(e, what));
    return out;
}

Vec2 vec2(const YAML::Node& n, const std::string& what) {
    const auto v = numbers(n, 2, what);
    return {v[0], v[1]};
}

std::vector<Vec2> points(const YAML::Node& n, const std::string& what) {
    if (!n.IsSequence()) fail(n, what + ": expected a list of [x, y] points");
    std::vector<Vec2> out;
    for (const auto& e : n) out.push_back(vec2(e, what));
    return out;
}

Pose pose(const YAML::Node& n, const std::string& what) {
    const auto v = numbers(n, 3, what);
    return {v[0], v[1], v[2]};
}

RobotLimits limits(const YAML::Node& n, RobotLimits base, const std::string& where) {
    allow_keys(n, {"v_min", "v_max", "u_max"}, where);
    base.v_min = get(n, "v_min", base.v_min, where);
    base.v_max = get(n, "v_max", base.v_max, where);
    base.u_max = get(n, "u_max", base.u_max, where);
    try {
        base.validate();
    } catch (const std::invalid_argument& e) {
        fail(n, where + ": " + e.what());
    }
    return base;
}

MotionLaw motion(const YAML::Node& n, const std::string& where) {
    if (!n.IsMap()) fail(n, where + ": expected a mapping");
    const std::string type = get_str(n, "type", "", where);
    MotionLaw m;
    if (type == "static") {
        allow_keys(n, {"type"}, where);
        m.law = StaticMotion{};
    } else if (type == "constant") {
        allow_keys(n, {"type", "velocity"}, where);
        m.law = ConstantVelocity{vec2(required(n, "velocity", where), where + ".velocity")};
    } else if (type == "arc") {
        allow_keys(n, {"type", "center", "rate"}, where);
        m.law = ArcMotion{vec2(required(n, "center", where), where + ".center"),
                          as_double(required(n, "rate", where), where + ".rate")};
    } else if (type == "sinusoid") {
        allow_keys(n, {"type", "base_velocity", "amplitude", "frequency"}, where);
        m.law = SinusoidMotion{vec2(required(n, "base_velocity", where), where + ".base_velocity"),
                               as_double(required(n, "amplitude", where), where + ".amplitude"),
                               as_double(required(n, "frequency", where), where + ".frequency")};
    } else if (type == "rotation") {
        allow_keys(n, {"type", "pivot", "rate"}, where);
        m.law = RotationMotion{vec2(required(n, "pivot", where), where + ".pivot"),
                               as_double(required(n, "rate", where), where + ".rate")};
    } else if (type == "leader_chain") {
        allow_keys(n, {"type", "leader", "spacing"}, where);
        auto leader = std::make_shared<const MotionLaw>(motion(required(n, "leader", where), where + ".leader"));
        m.law = LeaderChainMotion{leader, get(n, "spacing", 0.5, where)};
    } else {
        fail(n, where + ": unknown motion type '" + type + "'");
    }
    return m;
}

Shape shape(const YAML::Node& n, const std::string& where) {
    if (!n.IsMap()) fail(n, where + ": expected a mapping");
    const std::string type = get_str(n, "type", "", where);
    Shape s;
    if (type == "disc") {
        allow_keys(n, {"type", "radius"}, where);
        s = DiscShape{as_double(required(n, "radius", where), where + ".radius")};
    } else if (type == "polygon") {
        allow_keys(n, {"type", "vertices"}, where);
        s = PolygonShape{points(required(n, "vertices", where), where + ".vertices")};
    } else if (type == "chain") {
        allow_keys(n, {"type", "points", "half_width"}, where);
        s = ChainShape{points(required(n, "points", where), where + ".points"), get(n, "half_width", 0.2, where)};
    } else {
        fail(n, where + ": unknown shape type '" + type + "'");
    }
    try {
        validate_shape(s);
    } catch (const std::invalid_argument& e) {
        fail(n, where + ": " + e.what());
    }
    return s;
}

Environment world(const YAML::Node& n) {
    allow_keys(n, {"d_safe", "interpolation_gap", "obstacles"}, "world");
    Environment env;
    env.d_safe = get(n, "d_safe", env.d_safe, "world");
    env.interpolation_gap = get(n, "interpolation_gap", env.interpolation_gap, "world");
    if (const YAML::Node obs = n["obstacles"]) {
        if (!obs.IsSequence()) fail(obs, "world.obstacles: expected a list");
        int next_id = 1;
        for (const auto& o : obs) {
            const std::string where = "obstacle at line " + std::to_string(line_of(o));
            allow_keys(o, {"id", "shape", "origin", "orientation", "motion"}, where);
            Obstacle ob;
            ob.id = get_int(o, "id", next_id, where);
            next_id = ob.id + 1;
            ob.shape = shape(required(o, "shape", where), where + ".shape");
            ob.origin = o["origin"] ? vec2(o["origin"], where + ".origin") : Vec2{};
            ob.orientation0 = get(o, "orientation", 0.0, where);
            ob.motion = o["motion"] ? motion(o["motion"], where + ".motion") : MotionLaw{};
            env.obstacles.push_back(ob);
        }
    }
    try {
        env.validate();
    } catch (const std::invalid_argument& e) {
        fail(n, e.what());
    }
    return env;
}

RobotSpec robot(const YAML::Node& n, const std::string& where, const YAML::Node& target_fallback) {
    allow_keys(n, {"id", "pose", "speed", "limits", "controller", "bina", "ena", "naier", "max_range", "target"},
               where);
    RobotSpec r;
    r.id = get_int(n, "id", 1, where);
    r.start = pose(required(n, "pose", where), where + ".pose");
    r.initial_speed = get(n, "speed", 0.0, where);
    if (n["limits"]) r.limits = limits(n["limits"], r.limits, where + ".limits");
    const YAML::Node ctrl = required(n, "controller", where);
    try {
        r.kind = controller_from_string(ctrl.as<std::string>());
    } catch (const std::invalid_argument& e) {
        fail(ctrl, e.what());
    }
    if (n["target"]) {
        r.target = vec2(n["target"], where + ".target");
    } else if (target_fallback) {
        r.target = vec2(target_fallback, "target");
    } else {
        fail(n, where + ": no target given");
    }
    if (const YAML::Node b = n["bina"]) {
        const std::string w = where + ".bina";
        allow_keys(b, {"alpha0", "C", "V"}, w);
        r.bina.alpha0 = get(b, "alpha0", r.bina.alpha0, w);
        r.bina.c = get(b, "C", r.bina.c, w);
        r.bina.v_obstacle = get(b, "V", r.bina.v_obstacle, w);
    }
    if (const YAML::Node e = n["ena"]) {
        const std::string w = where + ".ena";
        allow_keys(e, {"gamma", "delta", "d0", "C", "epsilon", "speed"}, w);
        r.ena.gamma = get(e, "gamma", r.ena.gamma, w);
        r.ena.delta = get(e, "delta", r.ena.delta, w);
        r.ena.d0 = get(e, "d0", r.ena.d0, w);
        r.ena.c = get(e, "C", r.ena.c, w);
        r.ena.epsilon = get(e, "epsilon", r.ena.epsilon, w);
        r.ena.avoid_speed = get(e, "speed", r.ena.avoid_speed, w);
    }
    if (const YAML::Node a = n["naier"]) {
        const std::string w = where + ".naier";
        allow_keys(a, {"ds", "delta", "theta0", "seek_target", "resolution", "V_E"}, w);
        r.naier.ds = get(a, "ds", r.naier.ds, w);
        r.naier.delta = get(a, "delta", r.naier.delta, w);
        r.naier.theta0 = get(a, "theta0", r.naier.theta0, w);
        r.naier.seek_target = get_bool(a, "seek_target", r.naier.seek_target, w);
        r.naier.resolution = get(a, "resolution", r.naier.resolution, w);
        r.naier.v_env = get(a, "V_E", r.naier.v_env, w);
    }
    const double range = get(n, "max_range", kDefaultMaxRange, where);
    r.bina.max_range = r.ena.max_range = r.naier.max_range = range;
    return r;
}

FormationSetup formation(const YAML::Node& n) {
    const std::string w = "formation";
    allow_keys(n,
               {"slots", "c", "R", "epsilon", "N", "N_cap", "limits", "anonymous", "initial_index", "schedule",
                "edge_probability", "window", "duration", "ts", "final_window", "spawn_extent", "starts", "speeds"},
               w);
    FormationSetup f;
    f.config.slots = points(required(n, "slots", w), w + ".slots");
    f.config.c = get(n, "c", f.config.c, w);
    f.config.range = get(n, "R", f.config.range, w);
    f.config.epsilon = get(n, "epsilon", f.config.range / 10.0, w);
    f.config.rounds_period = get_int(n, "N", f.config.rounds_period, w);
    f.rounds_period_cap = get_int(n, "N_cap", f.rounds_period_cap, w);
    if (n["limits"]) f.config.limits = limits(n["limits"], f.config.limits, w + ".limits");
    f.anonymous = get_bool(n, "anonymous", false, w);
    if (const YAML::Node idx = n["initial_index"]) {
        for (double v : numbers(idx, f.config.slots.size(), w + ".initial_index")) {
            const int k = static_cast<int>(v);
            if (k < 1 || k > static_cast<int>(f.config.slots.size())) fail(idx, w + ".initial_index: out of range");
            f.initial_index.push_back(k - 1);
        }
    }
    f.schedule = get_str(n, "schedule", f.schedule, w);
    if (f.schedule != "complete" && f.schedule != "ring" && f.schedule != "random") {
        fail(n["schedule"], w + ".schedule: expected complete, ring or random");
    }
    f.edge_probability = get(n, "edge_probability", f.edge_probability, w);
    f.window = get_int(n, "window", f.window, w);
    f.duration = get(n, "duration", f.duration, w);
    f.ts = get(n, "ts", f.ts, w);
    f.final_window = get(n, "final_window", f.final_window, w);
    f.spawn_extent = get(n, "spawn_extent", f.spawn_extent, w);
    if (const YAML::Node s = n["starts"]) {
        if (!s.IsSequence()) fail(s, w + ".starts: expected a list of [x, y, theta]");
        for (const auto& p : s) f.starts.push_back(pose(p, w + ".starts"));
        if (f.starts.size() != f.config.slots.size()) fail(s, w + ".starts: one pose per slot required");
    }
    if (const YAML::Node s = n["speeds"]) f.speeds = numbers(s, f.config.slots.size(), w + ".speeds");
    return f;
}

SimConfig sim(const YAML::Node& n) {
    allow_keys(n, {"duration", "ts", "substeps", "seed", "capture_radius", "timeout_factor"}, "sim");
    SimConfig s;
    s.duration = get(n, "duration", s.duration, "sim");
    s.ts = get(n, "ts", s.ts, "sim");
    s.substeps = get_int(n, "substeps", s.substeps, "sim");
    if (const YAML::Node seed = n["seed"]) {
        try {
            s.seed = seed.as<std::uint64_t>();
        } catch (const YAML::Exception&) {
            fail(seed, "sim.seed: expected a non-negative integer");
        }
    }
    s.capture_radius = get(n, "capture_radius", s.capture_radius, "sim");
    s.timeout_factor = get(n, "timeout_factor", s.timeout_factor, "sim");
    if (!(s.ts > 0.0)) fail(n, "sim.ts must be positive");
    if (s.substeps < 1) fail(n, "sim.substeps must be >= 1");
    if (s.duration < 0.0) fail(n, "sim.duration must be >= 0");
    return s;
}

RandomizationSpec batch(const YAML::Node& n) {
    const std::string w = "batch";
    allow_keys(n, {"runs", "count", "radius", "speed", "region", "motion", "keep_clear"}, w);
    RandomizationSpec b;
    b.runs = get_int(n, "runs", b.runs, w);
    if (const YAML::Node c = n["count"]) {
        const auto v = numbers(c, 2, w + ".count");
        b.count_min = static_cast<int>(v[0]);
        b.count_max = static_cast<int>(v[1]);
    }
    if (const YAML::Node r = n["radius"]) {
        const auto v = numbers(r, 2, w + ".radius");
        b.radius_min = v[0];
        b.radius_max = v[1];
    }
    if (const YAML::Node s = n["speed"]) {
        const auto v = numbers(s, 2, w + ".speed");
        b.speed_min = v[0];
        b.speed_max = v[1];
    }
    if (const YAML::Node r = n["region"]) {
        const auto pts = points(r, w + ".region");
        if (pts.size() != 2) fail(r, w + ".region: expected [[xmin, ymin], [xmax, ymax]]");
        b.region_min = pts[0];
        b.region_max = pts[1];
    }
    b.motion = get_str(n, "motion", b.motion, w);
    if (b.motion != "constant" && b.motion != "nonlinear") fail(n["motion"], w + ".motion: expected constant or nonlinear");
    b.keep_clear = get(n, "keep_clear", b.keep_clear, w);
    if (b.runs < 1 || b.count_min < 0 || b.count_max < b.count_min) fail(n, w + ": inconsistent ranges");
    return b;
}

}  // namespace

ScenarioError::ScenarioError(const std::string& what, int line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

Scenario parse_scenario(const std::string& text, const std::string& origin) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ScenarioError(origin + ": " + e.msg, e.mark.line + 1);
    }
    if (!root.IsMap()) throw ScenarioError(origin + ": top level must be a mapping", line_of(root));
    try {
        allow_keys(root, {"name", "description", "reconstructed", "world", "robot", "robots", "target", "formation",
                          "sim", "batch"},
                   "scenario");
        Scenario sc;
        sc.name = get_str(root, "name", origin, "scenario");
        sc.description = get_str(root, "description", "", "scenario");
        sc.reconstructed = get_bool(root, "reconstructed", true, "scenario");
        if (root["world"]) sc.env = world(root["world"]);
        if (root["sim"]) sc.sim = sim(root["sim"]);
        if (root["robot"] && root["robots"]) fail(root["robots"], "use either 'robot' or 'robots', not both");
        if (const YAML::Node r = root["robot"]) sc.robots.push_back(robot(r, "robot", root["target"]));
        if (const YAML::Node rs = root["robots"]) {
            if (!rs.IsSequence()) fail(rs, "robots: expected a list");
            for (const auto& r : rs) sc.robots.push_back(robot(r, "robot at line " + std::to_string(line_of(r)), root["target"]));
        }
        if (const YAML::Node f = root["formation"]) sc.formation = formation(f);
        if (const YAML::Node b = root["batch"]) sc.batch = batch(b);
        if (sc.robots.empty() && !sc.formation) fail(root, "scenario needs a robot or a formation section");
        return sc;
    } catch (const ScenarioError&) {
        throw;
    } catch (const YAML::Exception& e) {
        throw ScenarioError(origin + ": " + e.msg, e.mark.line + 1);
    }
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot open scenario file '" + path + "'", 0);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), path);
}

}  // namespace navkit
