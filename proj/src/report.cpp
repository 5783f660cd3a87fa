#include "navkit/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace navkit {

namespace {

using nlohmann::json;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fixed(double v, int digits) {
    if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double parse_double(const std::string& s, std::size_t row) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) {
        throw std::runtime_error("csv row " + std::to_string(row) + ": bad number '" + s + "'");
    }
    return v;
}

std::string label(ControllerKind k) {
    std::string s = to_string(k);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

std::string cell_text(const BatchCell& c) {
    if (!c.error.empty()) return "error";
    if (c.outcome == Outcome::TargetReached) return fixed(c.navigation_time, 2) + " s";
    return to_string(c.outcome);
}

struct Frame {
    double xmin{std::numeric_limits<double>::infinity()};
    double ymin{std::numeric_limits<double>::infinity()};
    double xmax{-std::numeric_limits<double>::infinity()};
    double ymax{-std::numeric_limits<double>::infinity()};
    double scale{20.0};
    double pad{1.0};

    void add(Vec2 p, double r = 0.0) {
        xmin = std::min(xmin, p.x - r);
        ymin = std::min(ymin, p.y - r);
        xmax = std::max(xmax, p.x + r);
        ymax = std::max(ymax, p.y + r);
    }
    double sx(double x) const { return (x - xmin + pad) * scale; }
    double sy(double y) const { return (ymax - y + pad) * scale; }
    double width() const { return (xmax - xmin + 2 * pad) * scale; }
    double height() const { return (ymax - ymin + 2 * pad) * scale; }
    std::string pt(Vec2 p) const { return fixed(sx(p.x), 2) + "," + fixed(sy(p.y), 2); }
};

void svg_primitive(std::ostream& out, const Frame& f, const geom::Primitive& p, const char* style) {
    if (p.core.size() == 1) {
        out << "<circle cx=\"" << fixed(f.sx(p.core[0].x), 2) << "\" cy=\"" << fixed(f.sy(p.core[0].y), 2)
            << "\" r=\"" << fixed(p.radius * f.scale, 2) << "\" " << style << "/>\n";
        return;
    }
    const auto outline = p.radius > 0.0 ? geom::convex_hull(geom::outer_samples(p, 16)) : p.core;
    out << "<polygon points=\"";
    for (std::size_t i = 0; i < outline.size(); ++i) out << (i ? " " : "") << f.pt(outline[i]);
    out << "\" " << style << "/>\n";
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"};

}  // namespace

void write_csv(std::ostream& out, const RunLog& log) {
    out << kCsvHeader << '\n';
    for (const auto& r : log.ticks) {
        out << num(r.t) << ',' << r.robot_id << ',' << num(r.pose.x) << ',' << num(r.pose.y) << ','
            << num(r.pose.theta) << ',' << num(r.control.v) << ',' << num(r.control.u) << ',' << r.mode << ','
            << num(r.clearance) << '\n';
    }
}

std::vector<TickRecord> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) throw std::runtime_error("csv: missing or unexpected header");
    std::vector<TickRecord> out;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (f.size() != 9) throw std::runtime_error("csv row " + std::to_string(row) + ": expected 9 fields");
        TickRecord r;
        r.t = parse_double(f[0], row);
        r.robot_id = static_cast<int>(parse_double(f[1], row));
        r.pose = {parse_double(f[2], row), parse_double(f[3], row), parse_double(f[4], row)};
        r.control = {parse_double(f[5], row), parse_double(f[6], row)};
        r.mode = f[7];
        r.clearance = parse_double(f[8], row);
        out.push_back(r);
    }
    return out;
}

void write_svg(std::ostream& out, const Scenario& sc, const RunLog& log, const std::vector<Vec2>& slots) {
    Frame f;
    std::map<int, std::vector<Vec2>> paths;
    for (const auto& r : log.ticks) {
        paths[r.robot_id].push_back(r.pose.position());
        f.add(r.pose.position());
    }
    for (const auto& spec : sc.robots) {
        f.add(spec.start.position());
        f.add(spec.target);
    }
    for (const Vec2& s : slots) f.add(s);

    const double horizon = std::max(log.end_time, 0.0);
    const int samples = 200;
    const Snapshot initial = occupied_at(sc.env, 0.0);
    std::vector<std::vector<Vec2>> obstacle_paths;
    for (const auto& o : sc.env.obstacles) {
        const double ext = body_extent(o);
        std::vector<Vec2> trail;
        if (!std::holds_alternative<StaticMotion>(o.motion.law) && horizon > 0.0) {
            for (int k = 0; k <= samples; ++k) {
                const Vec2 p = evaluate_motion(o.motion, o.origin, o.orientation0, horizon * k / samples).position;
                trail.push_back(p);
                f.add(p, ext);
            }
        } else {
            f.add(o.origin, ext);
        }
        obstacle_paths.push_back(std::move(trail));
    }
    if (!std::isfinite(f.xmin)) f.add({0.0, 0.0});

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(f.width(), 0) << "\" height=\""
        << fixed(f.height(), 0) << "\" viewBox=\"0 0 " << fixed(f.width(), 2) << ' ' << fixed(f.height(), 2)
        << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (const auto& po : initial.obstacles) {
        for (const auto& p : po.prims) svg_primitive(out, f, p, "fill=\"#bbbbbb\" stroke=\"#555555\" stroke-width=\"1\"");
    }
    for (std::size_t i = 0; i < obstacle_paths.size(); ++i) {
        const auto& trail = obstacle_paths[i];
        if (trail.size() < 2) continue;
        out << "<polyline class=\"obstacle-path\" data-id=\"" << sc.env.obstacles[i].id
            << "\" fill=\"none\" stroke=\"#777777\" stroke-width=\"1\" stroke-dasharray=\"4 3\" points=\"";
        for (std::size_t k = 0; k < trail.size(); ++k) out << (k ? " " : "") << f.pt(trail[k]);
        out << "\"/>\n";
    }
    for (const Vec2& s : slots) {
        out << "<rect class=\"slot\" x=\"" << fixed(f.sx(s.x) - 4, 2) << "\" y=\"" << fixed(f.sy(s.y) - 4, 2)
            << "\" width=\"8\" height=\"8\" fill=\"none\" stroke=\"#000000\"/>\n";
    }
    std::size_t colour = 0;
    for (const auto& [id, pts] : paths) {
        const char* c = kPalette[colour++ % (sizeof kPalette / sizeof kPalette[0])];
        out << "<polyline class=\"robot-path\" data-id=\"" << id << "\" fill=\"none\" stroke=\"" << c
            << "\" stroke-width=\"2\" points=\"";
        for (std::size_t k = 0; k < pts.size(); ++k) out << (k ? " " : "") << f.pt(pts[k]);
        out << "\"/>\n";
    }
    for (const auto& spec : sc.robots) {
        out << "<circle class=\"target\" cx=\"" << fixed(f.sx(spec.target.x), 2) << "\" cy=\""
            << fixed(f.sy(spec.target.y), 2) << "\" r=\"5\" fill=\"#2ca02c\"/>\n";
    }
    out << "</svg>\n";
}

std::string metrics_json(const RunLog& log, const Metrics& m) {
    json j;
    j["scenario"] = log.scenario;
    j["controller"] = log.controller;
    j["outcome"] = to_string(m.outcome);
    j["navigation_time"] = m.navigation_time;
    j["min_clearance"] = finite_or_null(m.min_clearance);
    j["min_substep_clearance"] = finite_or_null(log.min_substep_clearance);
    j["path_length"] = m.path_length;
    j["avoid_time_fraction"] = m.avoid_time_fraction;
    j["standoff_error"] = m.standoff_error ? json(*m.standoff_error) : json(nullptr);
    j["avoid_angle_mean"] = m.avoid_angle_mean ? json(*m.avoid_angle_mean) : json(nullptr);
    j["avoid_angle_std"] = m.avoid_angle_std ? json(*m.avoid_angle_std) : json(nullptr);
    j["blocked_decisions"] = m.blocked_decisions;
    j["d_safe"] = log.d_safe;
    j["diagnostic"] = log.diagnostic;
    j["validation"] = json::parse(validation_json(log.validation));
    return j.dump(2);
}

std::string validation_json(const ValidationReport& report) {
    json arr = json::array();
    for (const auto& c : report) {
        arr.push_back({{"name", c.name},
                       {"subject", c.subject},
                       {"lhs", finite_or_null(c.lhs)},
                       {"rhs", finite_or_null(c.rhs)},
                       {"strict", c.strict},
                       {"applicable", c.applicable},
                       {"pass", c.pass},
                       {"margin", finite_or_null(c.margin())},
                       {"note", c.note}});
    }
    return arr.dump(2);
}

std::string validation_text(const ValidationReport& report) {
    std::ostringstream out;
    for (const auto& c : report) {
        const char* verdict = !c.applicable ? "N/A " : (c.pass ? "OK  " : "FAIL");
        out << verdict << ' ' << std::left << std::setw(28) << c.name << ' ' << std::setw(14) << c.subject;
        if (c.applicable) {
            out << ' ' << fixed(c.lhs, 4) << (c.strict ? " > " : " >= ") << fixed(c.rhs, 4) << "  margin "
                << fixed(c.margin(), 4);
        }
        if (!c.note.empty()) out << "  (" << c.note << ')';
        out << '\n';
    }
    out << (all_pass(report) ? "all applicable checks pass\n" : "some checks fail\n");
    return out.str();
}

std::string comparison_json(const std::vector<ComparisonEntry>& entries) {
    json arr = json::array();
    for (const auto& e : entries) {
        if (!e.error.empty() || !e.log) {
            arr.push_back({{"controller", to_string(e.kind)}, {"error", e.error}});
            continue;
        }
        json j = json::parse(metrics_json(*e.log, e.metrics));
        arr.push_back(j);
    }
    return arr.dump(2);
}

std::string comparison_text(const std::vector<ComparisonEntry>& entries) {
    std::ostringstream out;
    out << std::left << std::setw(8) << "ctrl" << std::setw(16) << "outcome" << std::setw(10) << "time[s]"
        << std::setw(12) << "clearance" << std::setw(10) << "path[m]" << "avoid%\n";
    for (const auto& e : entries) {
        out << std::setw(8) << label(e.kind);
        if (!e.error.empty()) {
            out << "error: " << e.error << '\n';
            continue;
        }
        const auto& m = e.metrics;
        out << std::setw(16) << to_string(m.outcome) << std::setw(10) << fixed(m.navigation_time, 2) << std::setw(12)
            << fixed(m.min_clearance, 3) << std::setw(10) << fixed(m.path_length, 2)
            << fixed(100.0 * m.avoid_time_fraction, 1) << '\n';
    }
    return out.str();
}

void write_batch_csv(std::ostream& out, const BatchTable& table) {
    out << "run,seed";
    for (auto k : table.controllers) out << ',' << to_string(k) << "_outcome," << to_string(k) << "_time";
    out << ",best\n";
    for (const auto& row : table.rows) {
        out << row.run << ',' << row.seed;
        for (const auto& c : row.cells) {
            out << ',' << (c.error.empty() ? to_string(c.outcome) : "error") << ',' << num(c.navigation_time);
        }
        out << ',' << (row.best >= 0 ? to_string(table.controllers[static_cast<std::size_t>(row.best)]) : "none")
            << '\n';
    }
}

std::string batch_text(const BatchTable& table) {
    std::ostringstream out;
    out << std::left << std::setw(6) << "Run";
    for (auto k : table.controllers) out << std::setw(14) << label(k);
    out << "Best result\n";
    for (const auto& row : table.rows) {
        out << std::setw(6) << row.run;
        for (const auto& c : row.cells) out << std::setw(14) << cell_text(c);
        out << (row.best >= 0 ? label(table.controllers[static_cast<std::size_t>(row.best)]) : "none") << '\n';
    }
    const double runs = static_cast<double>(std::max<std::size_t>(1, table.rows.size()));
    out << '\n' << std::setw(8) << "ctrl" << std::setw(8) << "wins" << std::setw(10) << "win rate" << std::setw(10)
        << "success" << std::setw(12) << "collisions" << "time mean +- std [s]\n";
    for (std::size_t i = 0; i < table.controllers.size(); ++i) {
        const auto& s = table.summary[i];
        out << std::setw(8) << label(table.controllers[i]) << std::setw(8) << s.wins << std::setw(10)
            << (fixed(100.0 * s.wins / runs, 0) + "%") << std::setw(10) << (fixed(100.0 * s.successes / runs, 0) + "%")
            << std::setw(12) << s.collisions << fixed(s.mean_time, 2) << " +- " << fixed(s.std_time, 2) << '\n';
    }
    return out.str();
}

std::string formation_table(const FormationResult& res) {
    std::ostringstream out;
    const std::size_t n = res.slots.size();
    out << std::left << std::setw(10) << "pair" << std::setw(14) << "desired \xCE\x94X" << std::setw(14) << "error \xCE\x94X"
        << std::setw(14) << "desired \xCE\x94Y" << "error \xCE\x94Y\n";
    for (std::size_t s = 0; s < n; ++s) {
        const std::size_t t = (s + 1) % n;
        const Vec2 d = res.slots[s] - res.slots[t];
        const std::string pair = std::to_string(s + 1) + "," + std::to_string(t + 1);
        out << std::setw(10) << pair << std::setw(13) << fixed(d.x, 3) << std::setw(13)
            << fixed(s < res.error_x.size() ? res.error_x[s] : NAN, 4) << std::setw(13) << fixed(d.y, 3)
            << fixed(s < res.error_y.size() ? res.error_y[s] : NAN, 4) << '\n';
    }
    out << "converged: " << (res.converged ? "yes" : "no") << "  N = " << res.rounds_period
        << "  attempts = " << res.attempts << "  heading spread = " << fixed(res.heading_spread, 4) << " rad\n";
    return out.str();
}

std::string assignment_trace_text(const FormationResult& res) {
    std::ostringstream out;
    for (std::size_t r = 0; r < res.assignment_trace.size(); ++r) {
        out << "round " << std::setw(3) << r << ':';
        for (int idx : res.assignment_trace[r]) out << ' ' << (idx + 1);
        out << '\n';
    }
    return out.str();
}

std::string formation_json(const FormationResult& res) {
    json j;
    j["converged"] = res.converged;
    j["permutation"] = res.permutation;
    j["stable"] = res.stable;
    j["rounds_period"] = res.rounds_period;
    j["attempts"] = res.attempts;
    j["busy_events"] = res.busy_events;
    j["heading_spread"] = res.heading_spread;
    json idx = json::array();
    for (int k : res.final_index) idx.push_back(k + 1);
    j["final_index"] = idx;
    json ex = json::array();
    json ey = json::array();
    for (double v : res.error_x) ex.push_back(finite_or_null(v));
    for (double v : res.error_y) ey.push_back(finite_or_null(v));
    j["error_dx"] = ex;
    j["error_dy"] = ey;
    json trace = json::array();
    for (const auto& round : res.assignment_trace) {
        json row = json::array();
        for (int k : round) row.push_back(k + 1);
        trace.push_back(row);
    }
    j["assignment_trace"] = trace;
    return j.dump(2);
}

}  // namespace navkit
