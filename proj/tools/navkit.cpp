#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "navkit/report.hpp"
#include "navkit/scenario_io.hpp"
#include "navkit/sim.hpp"

namespace fs = std::filesystem;
using namespace navkit;

namespace {

struct Options {
    std::string command;
    std::string scenario;
    std::string out{"."};
    std::optional<std::uint64_t> seed;
    std::optional<double> ts;
    bool svg{false};
    bool csv{false};

    // With neither flag every artifact is written.
    bool want_svg() const { return svg || !csv; }
    bool want_csv() const { return csv || !svg; }
};

// Raised for problems the user can fix (exit 1).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << text;
}

fs::path prepare_out(const Options& o) {
    fs::create_directories(o.out);
    return fs::path(o.out);
}

Scenario load(const Options& o) {
    Scenario sc = load_scenario(o.scenario);
    if (o.seed) sc.sim.seed = *o.seed;
    if (o.ts) {
        if (!(*o.ts > 0.0)) throw UsageError("--ts must be positive");
        sc.sim.ts = *o.ts;
        if (sc.formation) sc.formation->ts = *o.ts;
    }
    return sc;
}

void emit_run_artifacts(const Options& o, const Scenario& sc, const RunLog& log, const std::string& stem,
                        const std::vector<Vec2>& slots = {}) {
    const fs::path dir = prepare_out(o);
    if (o.want_csv()) {
        std::ofstream f(dir / (stem + ".csv"));
        write_csv(f, log);
    }
    if (o.want_svg()) {
        std::ofstream f(dir / (stem + ".svg"));
        write_svg(f, sc, log, slots);
    }
}

int cmd_run(const Options& o) {
    const Scenario sc = load(o);
    for (const auto& r : sc.robots) {
        if (r.kind == ControllerKind::All) throw UsageError("controller 'all' needs the compare command");
    }
    const RunLog log = run(sc);
    const Metrics m = extract_metrics(log);
    emit_run_artifacts(o, sc, log, "trajectory");
    write_file(prepare_out(o) / "metrics.json", metrics_json(log, m) + "\n");
    if (!all_pass(log.validation)) {
        std::cerr << "warning: validator reports failing inequalities\n" << validation_text(log.validation);
    }
    std::cout << sc.name << " [" << log.controller << "]: " << to_string(m.outcome) << " at t = " << m.navigation_time
              << " s, min clearance " << m.min_clearance << " m\n";
    return 0;
}

int cmd_compare(const Options& o) {
    const Scenario sc = load(o);
    const auto entries = compare(sc);
    std::cout << comparison_text(entries);
    write_file(prepare_out(o) / "comparison.json", comparison_json(entries) + "\n");
    for (const auto& e : entries) {
        if (e.log) emit_run_artifacts(o, with_controller(sc, e.kind), *e.log, "trajectory_" + to_string(e.kind));
    }
    return 0;
}

int cmd_batch(const Options& o) {
    const Scenario sc = load(o);
    if (!sc.batch) throw UsageError("scenario has no batch section");
    const BatchTable table = run_batch(sc, *sc.batch, sc.sim.seed);
    const std::string text = batch_text(table);
    std::cout << text;
    const fs::path dir = prepare_out(o);
    write_file(dir / "batch.txt", text);
    std::ofstream f(dir / "batch.csv");
    write_batch_csv(f, table);
    return 0;
}

int cmd_validate(const Options& o) {
    const Scenario sc = load(o);
    for (const auto& r : sc.robots) {
        const std::vector<ControllerKind> kinds = r.kind == ControllerKind::All
                                                      ? std::vector<ControllerKind>{ControllerKind::Bina,
                                                                                    ControllerKind::Ena,
                                                                                    ControllerKind::Naier}
                                                      : std::vector<ControllerKind>{r.kind};
        for (auto k : kinds) {
            RobotSpec spec = r;
            spec.kind = k;
            std::cout << "robot " << r.id << " [" << to_string(k) << "]\n" << validation_text(validate_robot(sc, spec));
        }
    }
    if (sc.formation) {
        std::cout << "formation\n" << validation_text(validate_formation(sc.formation->config));
    }
    return 0;
}

int cmd_formation(const Options& o) {
    const Scenario sc = load(o);
    if (!sc.formation) throw UsageError("scenario has no formation section");
    const FormationResult res = run_formation(sc, sc.sim.seed);
    const RunLog log = formation_log(sc, res);
    emit_run_artifacts(o, sc, log, "trajectory", res.slot_points);
    std::string report = formation_table(res);
    if (sc.formation->anonymous) report += "\nassignment trace\n" + assignment_trace_text(res);
    std::cout << report;
    const fs::path dir = prepare_out(o);
    write_file(dir / "formation.txt", report);
    write_file(dir / "formation.json", formation_json(res) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"navkit: reactive navigation and formation simulator"};
    app.require_subcommand(1);
    Options o;
    const std::pair<const char*, const char*> commands[] = {
        {"run", "simulate the scenario and write trajectory, metrics and plot"},
        {"compare", "run BINA, ENA and NAIER on the same world"},
        {"batch", "randomized batch with per-run table and win rates"},
        {"validate", "print every applicable inequality with its margin"},
        {"formation", "run the formation section"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("scenario", o.scenario, "scenario YAML file")->required();
        sub->add_option("--out", o.out, "output directory");
        sub->add_option("--seed", o.seed, "override sim.seed");
        sub->add_option("--ts", o.ts, "override the control period in seconds");
        sub->add_flag("--svg", o.svg, "write the SVG plot");
        sub->add_flag("--csv", o.csv, "write the trajectory CSV");
        sub->callback([&o, sub] { o.command = sub->get_name(); });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (o.command == "run") return cmd_run(o);
        if (o.command == "compare") return cmd_compare(o);
        if (o.command == "batch") return cmd_batch(o);
        if (o.command == "validate") return cmd_validate(o);
        if (o.command == "formation") return cmd_formation(o);
        return 1;
    } catch (const ScenarioError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    }
}
