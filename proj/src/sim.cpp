#include "navkit/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace navkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct RobotRun {
    const RobotSpec* spec{nullptr};
    std::unique_ptr<Navigator> nav;
    Pose pose;
    double speed{0.0};
    bool done{false};
    Outcome outcome{Outcome::Timeout};
};

double auto_duration(const Scenario& sc) {
    if (sc.sim.duration > 0.0) return sc.sim.duration;
    double longest = 0.0;
    for (const auto& r : sc.robots) {
        longest = std::max(longest, distance(r.start.position(), r.target) / r.limits.v_max);
    }
    return std::max(10.0, sc.sim.timeout_factor * longest);
}

ControlInput clamp_to(const ControlInput& c, const RobotLimits& l) {
    return {std::clamp(c.v, l.v_min, l.v_max), std::clamp(c.u, -l.u_max, l.u_max)};
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t k) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (k + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

void mean_std(const std::vector<double>& xs, double& mean, double& sd) {
    mean = 0.0;
    sd = 0.0;
    if (xs.empty()) return;
    mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    double acc = 0.0;
    for (double x : xs) acc += (x - mean) * (x - mean);
    sd = std::sqrt(acc / static_cast<double>(xs.size()));
}

}  // namespace

std::string to_string(ControllerKind k) {
    switch (k) {
        case ControllerKind::Bina: return "bina";
        case ControllerKind::Ena: return "ena";
        case ControllerKind::Naier: return "naier";
        case ControllerKind::All: return "all";
    }
    return "unknown";
}

ControllerKind controller_from_string(const std::string& s) {
    if (s == "bina") return ControllerKind::Bina;
    if (s == "ena") return ControllerKind::Ena;
    if (s == "naier") return ControllerKind::Naier;
    if (s == "all") return ControllerKind::All;
    throw std::invalid_argument("unknown controller '" + s + "' (expected bina, ena, naier or all)");
}

std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::TargetReached: return "TargetReached";
        case Outcome::Collision: return "Collision";
        case Outcome::Timeout: return "Timeout";
        case Outcome::Aborted: return "Aborted";
    }
    return "unknown";
}

std::unique_ptr<Navigator> make_navigator(const RobotSpec& spec, const Environment& env, double ts) {
    switch (spec.kind) {
        case ControllerKind::Bina: {
            BinaParams p = spec.bina;
            p.limits = spec.limits;
            p.d_safe = env.d_safe;
            return std::make_unique<BinaController>(p);
        }
        case ControllerKind::Ena: {
            EnaParams p = spec.ena;
            p.limits = spec.limits;
            p.d_safe = env.d_safe;
            return std::make_unique<EnaController>(p, ts);
        }
        case ControllerKind::Naier: {
            NaierParams p = spec.naier;
            p.limits = spec.limits;
            p.d_safe = env.d_safe;
            p.delta = std::max(p.delta, ts);
            return std::make_unique<NaierController>(p);
        }
        case ControllerKind::All: break;
    }
    throw std::invalid_argument("controller 'all' is only valid for comparisons");
}

ValidationReport validate_robot(const Scenario& sc, const RobotSpec& spec) {
    const double horizon = std::min(auto_duration(sc), 60.0);
    switch (spec.kind) {
        case ControllerKind::Bina: {
            BinaParams p = spec.bina;
            p.limits = spec.limits;
            p.d_safe = sc.env.d_safe;
            return validate_bina(sc.env, spec.target, p, horizon);
        }
        case ControllerKind::Ena: {
            EnaParams p = spec.ena;
            p.limits = spec.limits;
            p.d_safe = sc.env.d_safe;
            ValidationReport r;
            r.push_back(make_check("d0 > d_safe", "parameters", p.d0, p.d_safe, true));
            r.push_back(make_check("C > d0 + epsilon", "parameters", p.c, p.d0 + p.epsilon, true));
            r.push_back(make_check("gamma delta <= v_max", "parameters", p.limits.v_max, p.saturation(), false));
            return r;
        }
        case ControllerKind::Naier: {
            NaierParams p = spec.naier;
            p.limits = spec.limits;
            p.d_safe = sc.env.d_safe;
            p.delta = std::max(p.delta, sc.sim.ts);
            return validate_naier(p, sc.env, spec.start, horizon);
        }
        case ControllerKind::All: break;
    }
    return {};
}

RunLog run(const Scenario& sc, const DecisionObserver& observer) {
    if (!(sc.sim.ts > 0.0)) throw std::invalid_argument("sim: T_s must be positive");
    if (sc.sim.substeps < 1) throw std::invalid_argument("sim: substeps must be >= 1");
    if (sc.robots.empty()) throw std::invalid_argument("sim: scenario has no robots");
    sc.env.validate();

    RunLog log;
    log.scenario = sc.name;
    log.d_safe = sc.env.d_safe;
    const double ts = sc.sim.ts;
    const double duration = auto_duration(sc);

    std::vector<RobotRun> robots;
    for (const auto& spec : sc.robots) {
        spec.limits.validate();
        RobotRun r;
        r.spec = &spec;
        r.nav = make_navigator(spec, sc.env, ts);
        r.pose = spec.start;
        r.pose.theta = wrap_angle(r.pose.theta);
        r.speed = spec.initial_speed;
        for (auto& c : validate_robot(sc, spec)) log.validation.push_back(c);
        if (distance(r.pose.position(), spec.target) <= sc.sim.capture_radius) {
            r.done = true;
            r.outcome = Outcome::TargetReached;
        }
        robots.push_back(std::move(r));
    }
    log.controller = robots.front().nav->name();
    if (sc.robots.front().kind == ControllerKind::Ena) {
        log.standoff = sc.robots.front().ena.d0;
        log.standoff_band = sc.robots.front().ena.delta;
    }

    const double dt = ts / sc.sim.substeps;
    double end_time = 0.0;
    bool stop = false;
    for (long k = 0; !stop; ++k) {
        const double t = static_cast<double>(k) * ts;
        if (std::all_of(robots.begin(), robots.end(), [](const RobotRun& r) { return r.done; })) break;
        if (t >= duration - 1e-9) {
            for (auto& r : robots) {
                if (!r.done) {
                    r.done = true;
                    r.outcome = Outcome::Timeout;
                }
            }
            end_time = duration;
            break;
        }
        const Snapshot snap = occupied_at(sc.env, t);
        const auto groups = interpolate_clusters(snap, sc.env.interpolation_gap);
        std::vector<ControlInput> controls(robots.size());
        for (std::size_t i = 0; i < robots.size(); ++i) {
            RobotRun& r = robots[i];
            if (r.done) continue;
            const NavContext ctx{sc.env, snap, groups, t, r.pose, r.speed, r.spec->target, ts};
            const NavDecision decision = r.nav->decide(ctx);
            controls[i] = clamp_to(decision.control, r.spec->limits);
            TickRecord rec;
            rec.t = t;
            rec.robot_id = r.spec->id;
            rec.pose = r.pose;
            rec.control = controls[i];
            rec.mode = decision.mode;
            rec.clearance = snap.obstacles.empty() ? kInf : distance_to_environment(snap, r.pose.position()).d;
            rec.engaged = decision.engaged;
            rec.avoid_angle = decision.avoid_angle;
            log.ticks.push_back(rec);
            if (observer) observer(DecisionEvent{t, r.spec->id, r.pose, decision, snap, sc.env});
        }
        for (int s = 0; s < sc.sim.substeps && !stop; ++s) {
            const double ts_end = t + (s + 1) * dt;
            const Snapshot sub = sc.env.obstacles.empty() ? Snapshot{} : occupied_at(sc.env, ts_end);
            for (std::size_t i = 0; i < robots.size(); ++i) {
                RobotRun& r = robots[i];
                if (r.done) continue;
                r.pose = integrate_step(r.pose, controls[i], dt);
                r.speed = controls[i].v;
                log.path_length += controls[i].v * dt;
                if (!std::isfinite(r.pose.x) || !std::isfinite(r.pose.y) || !std::isfinite(r.pose.theta)) {
                    r.done = true;
                    r.outcome = Outcome::Aborted;
                    log.diagnostic = "non-finite state at tick " + std::to_string(k) + " (t=" + std::to_string(t) + ")";
                    end_time = ts_end;
                    stop = true;
                    break;
                }
                if (!sub.obstacles.empty()) {
                    const DistanceResult d = distance_to_environment(sub, r.pose.position());
                    log.min_substep_clearance = std::min(log.min_substep_clearance, d.d);
                    if (d.penetrated) {
                        r.done = true;
                        r.outcome = Outcome::Collision;
                        log.diagnostic = "robot " + std::to_string(r.spec->id) + " entered obstacle " +
                                         std::to_string(d.obstacle_id) + " at t=" + std::to_string(ts_end);
                        end_time = ts_end;
                        stop = true;
                        break;
                    }
                }
                if (distance(r.pose.position(), r.spec->target) <= sc.sim.capture_radius) {
                    r.done = true;
                    r.outcome = Outcome::TargetReached;
                    end_time = std::max(end_time, ts_end);
                }
            }
        }
    }

    log.outcome = Outcome::TargetReached;
    for (const auto& r : robots) {
        if (r.outcome == Outcome::Collision || r.outcome == Outcome::Aborted) {
            log.outcome = r.outcome;
        } else if (r.outcome == Outcome::Timeout && log.outcome == Outcome::TargetReached) {
            log.outcome = Outcome::Timeout;
        }
        if (const auto* n = dynamic_cast<const NaierController*>(r.nav.get())) {
            log.blocked_decisions += n->blocked_decisions();
        }
    }
    log.end_time = end_time;
    return log;
}

Metrics extract_metrics(const RunLog& log) {
    Metrics m;
    m.outcome = log.outcome;
    m.navigation_time = log.end_time;
    m.path_length = log.path_length;
    m.blocked_decisions = log.blocked_decisions;
    std::size_t avoiding = 0;
    std::vector<double> standoff;
    std::vector<double> angles;
    bool settled = false;
    for (const auto& rec : log.ticks) {
        m.min_clearance = std::min(m.min_clearance, rec.clearance);
        const bool avoid = rec.mode == "avoid" || rec.mode == "interval" || rec.mode == "blocked";
        if (avoid) ++avoiding;
        if (log.standoff) {
            const double err = std::abs(rec.clearance - *log.standoff);
            if (rec.mode != "avoid") {
                settled = false;
            } else {
                if (err <= log.standoff_band.value_or(0.0)) settled = true;
                if (settled) standoff.push_back(err);
            }
        }
        if (rec.mode == "avoid" && std::isfinite(rec.avoid_angle)) angles.push_back(rec.avoid_angle);
    }
    if (!log.ticks.empty()) m.avoid_time_fraction = static_cast<double>(avoiding) / log.ticks.size();
    if (!standoff.empty()) {
        m.standoff_error = std::accumulate(standoff.begin(), standoff.end(), 0.0) / standoff.size();
    }
    if (!angles.empty()) {
        double mean = 0.0;
        double sd = 0.0;
        mean_std(angles, mean, sd);
        m.avoid_angle_mean = mean;
        m.avoid_angle_std = sd;
    }
    return m;
}

Scenario with_controller(const Scenario& sc, ControllerKind kind) {
    Scenario out = sc;
    for (auto& r : out.robots) r.kind = kind;
    return out;
}

std::vector<ComparisonEntry> compare(const Scenario& sc) {
    std::vector<ComparisonEntry> out;
    for (ControllerKind k : {ControllerKind::Bina, ControllerKind::Ena, ControllerKind::Naier}) {
        ComparisonEntry e;
        e.kind = k;
        try {
            e.log = run(with_controller(sc, k));
            e.metrics = extract_metrics(*e.log);
        } catch (const std::exception& ex) {
            e.error = ex.what();
        }
        out.push_back(std::move(e));
    }
    return out;
}

Environment randomize_environment(const Scenario& tmpl, const RandomizationSpec& spec, std::uint64_t seed) {
    if (tmpl.robots.empty()) throw std::invalid_argument("batch: template has no robot");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> count(spec.count_min, spec.count_max);
    std::uniform_real_distribution<double> radius(spec.radius_min, spec.radius_max);
    std::uniform_real_distribution<double> px(spec.region_min.x, spec.region_max.x);
    std::uniform_real_distribution<double> py(spec.region_min.y, spec.region_max.y);
    std::uniform_real_distribution<double> speed(spec.speed_min, spec.speed_max);
    std::uniform_real_distribution<double> heading(-kPi, kPi);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    Environment env = tmpl.env;
    env.obstacles.clear();
    const Vec2 start = tmpl.robots.front().start.position();
    const Vec2 target = tmpl.robots.front().target;
    const int n = count(rng);
    std::vector<std::pair<Vec2, double>> placed;
    for (int i = 0; i < n; ++i) {
        for (int attempt = 0; attempt < 1000; ++attempt) {
            const double r = radius(rng);
            const Vec2 c{px(rng), py(rng)};
            bool ok = distance(c, start) >= spec.keep_clear + r && distance(c, target) >= spec.keep_clear + r;
            for (const auto& [pc, pr] : placed) ok = ok && distance(c, pc) >= pr + r + 2.0 * env.interpolation_gap;
            if (!ok) continue;
            Obstacle o;
            o.id = i + 1;
            o.shape = DiscShape{r};
            o.origin = c;
            const double v = speed(rng);
            const Vec2 dir = unit_from_angle(heading(rng));
            if (spec.motion == "nonlinear") {
                if (unit(rng) < 0.5) {
                    const double base = v * unit(rng);
                    const double freq = 0.3 + 0.7 * unit(rng);
                    const double amp = (v - base) / freq;
                    o.motion.law = SinusoidMotion{dir * base, amp, freq};
                } else {
                    const double arm = 1.0 + 2.0 * unit(rng);
                    const double rate = (unit(rng) < 0.5 ? -1.0 : 1.0) * v / arm;
                    o.motion.law = ArcMotion{c + dir * arm, rate};
                }
            } else {
                o.motion.law = ConstantVelocity{dir * v};
            }
            env.obstacles.push_back(o);
            placed.emplace_back(c, r);
            break;
        }
    }
    return env;
}

int worker_count() {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
    if (const char* cap = std::getenv("NAVKIT_THREADS")) {
        const int c = std::atoi(cap);
        if (c > 0) n = std::min(n, c);
    }
    return n;
}

BatchTable run_batch(const Scenario& tmpl, const RandomizationSpec& spec, std::uint64_t seed,
                     const std::vector<ControllerKind>& controllers) {
    if (spec.runs < 1) throw std::invalid_argument("batch: runs must be >= 1");
    BatchTable table;
    table.controllers = controllers;
    table.rows.resize(spec.runs);
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (int i = next++; i < spec.runs; i = next++) {
            BatchRow row;
            row.run = i + 1;
            row.seed = mix_seed(seed, static_cast<std::uint64_t>(i));
            Scenario sc = tmpl;
            sc.env = randomize_environment(tmpl, spec, row.seed);
            sc.name = tmpl.name + "#" + std::to_string(i + 1);
            for (ControllerKind k : controllers) {
                BatchCell cell;
                try {
                    const RunLog log = run(with_controller(sc, k));
                    const Metrics m = extract_metrics(log);
                    cell.outcome = m.outcome;
                    cell.navigation_time = m.navigation_time;
                    cell.min_clearance = std::min(m.min_clearance, log.min_substep_clearance);
                } catch (const std::exception& ex) {
                    cell.outcome = Outcome::Aborted;
                    cell.error = ex.what();
                }
                row.cells.push_back(cell);
            }
            double best = kInf;
            for (std::size_t c = 0; c < row.cells.size(); ++c) {
                if (row.cells[c].outcome == Outcome::TargetReached && row.cells[c].navigation_time < best) {
                    best = row.cells[c].navigation_time;
                    row.best = static_cast<int>(c);
                }
            }
            table.rows[i] = std::move(row);
        }
    };
    const int workers = std::min(worker_count(), spec.runs);
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    table.summary.resize(controllers.size());
    for (std::size_t c = 0; c < controllers.size(); ++c) {
        std::vector<double> times;
        for (const auto& row : table.rows) {
            const auto& cell = row.cells[c];
            if (cell.outcome == Outcome::TargetReached) times.push_back(cell.navigation_time);
            if (cell.outcome == Outcome::Collision) ++table.summary[c].collisions;
            if (row.best == static_cast<int>(c)) ++table.summary[c].wins;
        }
        table.summary[c].successes = static_cast<int>(times.size());
        mean_std(times, table.summary[c].mean_time, table.summary[c].std_time);
    }
    return table;
}

FormationResult run_formation_once(const Scenario& sc, std::uint64_t seed, int rounds_period) {
    if (!sc.formation) throw std::invalid_argument("scenario has no formation section");
    const FormationSetup& fs = *sc.formation;
    const FormationConfig& cfg = fs.config;
    const std::size_t n = cfg.size();
    if (n < 2) throw std::invalid_argument("formation needs at least 2 slots");
    if (rounds_period < 1) throw std::invalid_argument("formation: N must be >= 1");
    cfg.limits.validate();
    const double ts = fs.ts;
    const int substeps = std::max(1, sc.sim.substeps);

    std::mt19937_64 rng(seed);
    std::vector<Pose> poses = fs.starts;
    std::vector<double> speeds = fs.speeds;
    if (poses.size() != n) {
        std::uniform_real_distribution<double> coord(0.0, fs.spawn_extent);
        std::uniform_real_distribution<double> heading(-kPi, kPi);
        poses.clear();
        for (std::size_t i = 0; i < n; ++i) poses.push_back({coord(rng), coord(rng), heading(rng)});
    }
    if (speeds.size() != n) {
        const double span = cfg.limits.v_max - cfg.limits.v_min;
        std::uniform_real_distribution<double> speed(cfg.limits.v_min + 0.1 * span, cfg.limits.v_max - 0.1 * span);
        speeds.clear();
        for (std::size_t i = 0; i < n; ++i) speeds.push_back(speed(rng));
    }

    std::vector<ConsensusState> states(n);
    std::vector<Vec2> anchors(n);
    std::vector<Vec2> at_instant(n);
    for (std::size_t i = 0; i < n; ++i) {
        double th = std::fmod(poses[i].theta, kPi);
        if (th < 0.0) th += kPi;
        states[i] = {th, 0.0, 0.0, speeds[i]};
        at_instant[i] = poses[i].position();
        anchors[i] = at_instant[i];
    }

    std::vector<int> index(n);
    if (fs.anonymous) {
        index = fs.initial_index.size() == n ? fs.initial_index : std::vector<int>(n, 0);
    } else {
        std::iota(index.begin(), index.end(), 0);
    }
    const SlotGraph slot_graph = build_slot_graph(cfg);

    // Leave room for several reassignment rounds when N has been escalated.
    const double duration = std::max(fs.duration, 8.0 * rounds_period + fs.final_window);
    const std::size_t instants = static_cast<std::size_t>(std::ceil(duration)) + 2;
    std::vector<CommGraph> graphs;
    if (fs.schedule == "complete") {
        graphs = complete_schedule(n, instants);
    } else if (fs.schedule == "ring") {
        graphs = ring_schedule(n, instants);
    } else if (fs.schedule == "random") {
        graphs = random_schedule(n, instants, fs.edge_probability, static_cast<std::size_t>(fs.window),
                                 mix_seed(seed, 7));
    } else {
        throw std::invalid_argument("unknown communication schedule '" + fs.schedule + "'");
    }

    FormationResult res;
    res.slots = cfg.slots;
    res.rounds_period = rounds_period;
    res.assignment_trace.push_back(index);

    const long steps = std::lround(duration / ts);
    const long per_instant = std::lround(1.0 / ts);
    std::vector<ControlInput> controls(n);
    for (long s = 0; s <= steps; ++s) {
        const double t = static_cast<double>(s) * ts;
        if (per_instant > 0 && s % per_instant == 0) {
            const long k = s / per_instant;
            std::vector<Vec2> now(n);
            for (std::size_t i = 0; i < n; ++i) now[i] = poses[i].position();
            if (k > 0) states = consensus_step(states, at_instant, now, graphs.at(static_cast<std::size_t>(k - 1)));
            for (std::size_t i = 0; i < n; ++i) anchors[i] = now[i] + Vec2{states[i].x, states[i].y};
            at_instant = now;
            if (fs.anonymous && k > 0 && k % rounds_period == 0) {
                const SlotAssignment a = reassign_slots(index, now, states, anchors, cfg, slot_graph, t, rng);
                res.busy_events += static_cast<int>(std::count(a.busy.begin(), a.busy.end(), 1));
                index = a.index;
                res.assignment_trace.push_back(index);
            }
        }
        FormationRecord rec;
        rec.t = t;
        rec.poses = poses;
        for (std::size_t i = 0; i < n; ++i) {
            const FictitiousTarget g =
                fictitious_target(states[i], anchors[i], poses[i].position(), cfg.slots.at(index[i]), cfg.c, t);
            controls[i] = formation_control(poses[i], poses[i].heading(), g, cfg.limits);
        }
        rec.controls = controls;
        res.records.push_back(std::move(rec));
        if (s == steps) break;
        for (int sub = 0; sub < substeps; ++sub) {
            for (std::size_t i = 0; i < n; ++i) poses[i] = integrate_step(poses[i], controls[i], ts / substeps);
        }
    }

    res.final_index = index;
    for (const Vec2& slot : cfg.slots) res.slot_points.push_back(slot_point(states[0], anchors[0], slot, duration));
    res.permutation = is_permutation_of_slots(index, n);
    const std::size_t rounds = res.assignment_trace.size();
    res.stable = res.permutation && (rounds < 2 || res.assignment_trace[rounds - 1] == res.assignment_trace[rounds - 2]);

    res.error_x.assign(n, std::numeric_limits<double>::quiet_NaN());
    res.error_y.assign(n, std::numeric_limits<double>::quiet_NaN());
    if (res.permutation) {
        double frame = 0.0;
        for (const auto& st : states) frame += st.theta;
        frame /= static_cast<double>(n);
        std::vector<std::size_t> robot_at(n);
        for (std::size_t i = 0; i < n; ++i) robot_at[index[i]] = i;
        std::vector<Vec2> acc(n);
        std::vector<Vec2> head(n);
        std::size_t samples = 0;
        for (const auto& rec : res.records) {
            if (rec.t < duration - fs.final_window - 1e-9) continue;
            ++samples;
            for (std::size_t sidx = 0; sidx < n; ++sidx) {
                const std::size_t next = (sidx + 1) % n;
                const Vec2 rel = to_frame(rec.poses[robot_at[sidx]].position() - rec.poses[robot_at[next]].position(),
                                          frame);
                acc[sidx] += rel - (cfg.slots[sidx] - cfg.slots[next]);
            }
            for (std::size_t i = 0; i < n; ++i) head[i] += rec.poses[i].heading();
        }
        if (samples > 0) {
            double lo = kInf;
            double hi = -kInf;
            for (std::size_t sidx = 0; sidx < n; ++sidx) {
                res.error_x[sidx] = acc[sidx].x / static_cast<double>(samples);
                res.error_y[sidx] = acc[sidx].y / static_cast<double>(samples);
                const double off = wrap_angle(head[sidx].bearing() - frame);
                lo = std::min(lo, off);
                hi = std::max(hi, off);
            }
            res.heading_spread = hi - lo;
        }
    }
    bool small = res.permutation;
    for (std::size_t sidx = 0; small && sidx < n; ++sidx) {
        small = std::abs(res.error_x[sidx]) <= 0.15 && std::abs(res.error_y[sidx]) <= 0.15;
    }
    res.converged = res.stable && small;
    return res;
}

FormationResult run_formation(const Scenario& sc, std::uint64_t seed) {
    if (!sc.formation) throw std::invalid_argument("scenario has no formation section");
    int period = sc.formation->config.rounds_period;
    int attempts = 0;
    while (true) {
        FormationResult res = run_formation_once(sc, seed, period);
        res.attempts = ++attempts;
        if (res.converged || !sc.formation->anonymous || period * 2 > sc.formation->rounds_period_cap) return res;
        period *= 2;
    }
}

RunLog formation_log(const Scenario& sc, const FormationResult& res) {
    RunLog log;
    log.scenario = sc.name;
    log.controller = "formation";
    log.d_safe = sc.env.d_safe;
    log.outcome = res.converged ? Outcome::TargetReached : Outcome::Timeout;
    log.end_time = res.records.empty() ? 0.0 : res.records.back().t;
    for (const auto& rec : res.records) {
        const Snapshot snap = occupied_at(sc.env, rec.t);
        for (std::size_t i = 0; i < rec.poses.size(); ++i) {
            TickRecord tr;
            tr.t = rec.t;
            tr.robot_id = static_cast<int>(i) + 1;
            tr.pose = rec.poses[i];
            tr.control = rec.controls[i];
            tr.mode = "formation";
            tr.clearance = snap.obstacles.empty() ? kInf : distance_to_environment(snap, rec.poses[i].position()).d;
            log.ticks.push_back(tr);
            log.path_length += rec.controls[i].v * (sc.formation ? sc.formation->ts : 0.0);
        }
    }
    if (sc.formation) {
        for (auto& c : validate_formation(sc.formation->config)) log.validation.push_back(c);
    }
    return log;
}

}  // namespace navkit
