#include "navkit/formation.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace navkit {

namespace {

void visit_from(const CommGraph& g, int start, std::vector<char>& seen) {
    std::vector<int> stack{start};
    seen[start] = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w : g.adj[v]) {
            if (!seen[w]) {
                seen[w] = 1;
                stack.push_back(w);
            }
        }
    }
}

CommGraph union_of(const std::vector<CommGraph>& graphs, std::size_t first, std::size_t last) {
    CommGraph u = CommGraph::empty(graphs.at(first).size());
    for (std::size_t k = first; k < last; ++k) {
        for (std::size_t a = 0; a < graphs[k].size(); ++a) {
            for (int b : graphs[k].adj[a]) u.add_edge(static_cast<int>(a), b);
        }
    }
    return u;
}

}  // namespace

ValidationReport validate_formation(const FormationConfig& cfg) {
    ValidationReport r;
    const auto& l = cfg.limits;
    r.push_back(make_check("c > 2 V^M / omega^max", "formation", cfg.c, 2.0 * l.v_max / l.u_max, true));
    r.push_back(make_check("epsilon > 0", "formation", cfg.epsilon, 0.0, true));
    r.push_back(make_check("epsilon < R/2", "formation", cfg.range / 2.0, cfg.epsilon, true));
    const SlotGraph sg = build_slot_graph(cfg);
    r.push_back(make_check("slot graph connected", "formation", sg.connected ? 1.0 : 0.0, 1.0, false));
    return r;
}

void CommGraph::add_edge(int a, int b) {
    if (a == b || has_edge(a, b)) return;
    adj.at(a).push_back(b);
    adj.at(b).push_back(a);
}

bool CommGraph::has_edge(int a, int b) const {
    const auto& n = adj.at(a);
    return std::find(n.begin(), n.end(), b) != n.end();
}

bool is_connected(const CommGraph& g) {
    if (g.size() == 0) return true;
    std::vector<char> seen(g.size(), 0);
    visit_from(g, 0, seen);
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

bool jointly_connected(const std::vector<CommGraph>& graphs, std::size_t first, std::size_t last) {
    if (first >= last) return false;
    return is_connected(union_of(graphs, first, last));
}

std::vector<CommGraph> complete_schedule(std::size_t n, std::size_t instants) {
    CommGraph g = CommGraph::empty(n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) g.add_edge(static_cast<int>(a), static_cast<int>(b));
    }
    return std::vector<CommGraph>(instants, g);
}

std::vector<CommGraph> ring_schedule(std::size_t n, std::size_t instants) {
    CommGraph g = CommGraph::empty(n);
    for (std::size_t a = 0; n > 1 && a < n; ++a) g.add_edge(static_cast<int>(a), static_cast<int>((a + 1) % n));
    return std::vector<CommGraph>(instants, g);
}

std::vector<CommGraph> random_schedule(std::size_t n, std::size_t instants, double p, std::size_t window,
                                       std::uint64_t seed) {
    if (window == 0) throw std::invalid_argument("random_schedule: window must be positive");
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution edge(p);
    std::vector<CommGraph> out(instants, CommGraph::empty(n));
    for (auto& g : out) {
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a + 1; b < n; ++b) {
                if (edge(rng)) g.add_edge(static_cast<int>(a), static_cast<int>(b));
            }
        }
    }
    // Repair: join the components of each window's union with random edges
    // placed at random instants inside the window.
    for (std::size_t first = 0; first < instants; first += window) {
        const std::size_t last = std::min(instants, first + window);
        std::uniform_int_distribution<std::size_t> when(first, last - 1);
        while (true) {
            const CommGraph u = union_of(out, first, last);
            std::vector<char> seen(n, 0);
            visit_from(u, 0, seen);
            std::vector<int> inside;
            std::vector<int> outside;
            for (std::size_t v = 0; v < n; ++v) (seen[v] ? inside : outside).push_back(static_cast<int>(v));
            if (outside.empty()) break;
            std::uniform_int_distribution<std::size_t> pick_in(0, inside.size() - 1);
            std::uniform_int_distribution<std::size_t> pick_out(0, outside.size() - 1);
            out[when(rng)].add_edge(inside[pick_in(rng)], outside[pick_out(rng)]);
        }
    }
    return out;
}

std::vector<ConsensusState> consensus_step(const std::vector<ConsensusState>& states, const std::vector<Vec2>& pos_k,
                                           const std::vector<Vec2>& pos_k1, const CommGraph& graph) {
    const std::size_t n = states.size();
    if (pos_k.size() != n || pos_k1.size() != n || graph.size() != n) {
        throw std::invalid_argument("consensus_step: size mismatch");
    }
    std::vector<ConsensusState> next(n);
    for (std::size_t i = 0; i < n; ++i) {
        ConsensusState sum = states[i];
        double ax = pos_k[i].x + states[i].x;
        double ay = pos_k[i].y + states[i].y;
        for (int j : graph.adj[i]) {
            sum.theta += states[j].theta;
            sum.v += states[j].v;
            ax += pos_k[j].x + states[j].x;
            ay += pos_k[j].y + states[j].y;
        }
        const double m = 1.0 + static_cast<double>(graph.adj[i].size());
        next[i].theta = sum.theta / m;
        next[i].v = sum.v / m;
        next[i].x = ax / m - pos_k1[i].x;
        next[i].y = ay / m - pos_k1[i].y;
    }
    return next;
}

FictitiousTarget fictitious_target(const ConsensusState& s, Vec2 anchor, Vec2 position, Vec2 slot, double c,
                                   double t) {
    const Vec2 a = to_frame(anchor, s.theta);
    const Vec2 z = to_frame(position, s.theta);
    FictitiousTarget out;
    out.h = a.x + slot.x + t * s.v;
    out.x = z.x;
    out.behind = z.x <= out.h;
    out.g_frame = {out.behind ? out.h + c : z.x + c, a.y + slot.y};
    out.g_world = from_frame(out.g_frame, s.theta);
    return out;
}

ControlInput formation_control(const Pose& pose, Vec2 velocity, const FictitiousTarget& g, const RobotLimits& limits) {
    ControlInput out;
    out.v = g.behind ? limits.v_max : limits.v_min;
    const Vec2 d = g.g_world - pose.position();
    if (d.squared_norm() > 0.0 && velocity.squared_norm() > 0.0) {
        out.u = limits.u_max * turn_sign(velocity, d);
    }
    return out;
}

SlotGraph build_slot_graph(const FormationConfig& cfg) {
    SlotGraph sg;
    const std::size_t n = cfg.slots.size();
    sg.graph = CommGraph::empty(n);
    const double reach = cfg.range - 2.0 * cfg.epsilon;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            if (distance(cfg.slots[a], cfg.slots[b]) <= reach) sg.graph.add_edge(static_cast<int>(a), static_cast<int>(b));
        }
    }
    sg.connected = is_connected(sg.graph);
    return sg;
}

Vec2 slot_point(const ConsensusState& s, Vec2 anchor, Vec2 slot, double t) {
    return anchor + from_frame({slot.x + t * s.v, slot.y}, s.theta);
}

SlotAssignment reassign_slots(const std::vector<int>& index, const std::vector<Vec2>& positions,
                              const std::vector<ConsensusState>& states, const std::vector<Vec2>& anchors,
                              const FormationConfig& cfg, const SlotGraph& slot_graph, double t,
                              std::mt19937_64& rng) {
    const std::size_t n = index.size();
    auto occupied_by_other = [&](std::size_t i, Vec2 p) {
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i && distance(positions[j], p) < cfg.epsilon) return true;
        }
        return false;
    };
    SlotAssignment out{index, std::vector<int>(n, 0)};
    for (std::size_t i = 0; i < n; ++i) {
        const int own = index[i];
        out.busy[i] = occupied_by_other(i, slot_point(states[i], anchors[i], cfg.slots.at(own), t)) ? 1 : 0;
        if (!out.busy[i]) continue;
        std::vector<int> candidates{own};
        for (int j : slot_graph.graph.adj.at(own)) {
            if (!occupied_by_other(i, slot_point(states[i], anchors[i], cfg.slots[j], t))) candidates.push_back(j);
        }
        if (candidates.size() == 1) continue;
        std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
        out.index[i] = candidates[pick(rng)];
    }
    return out;
}

bool is_permutation_of_slots(const std::vector<int>& index, std::size_t n) {
    if (index.size() != n) return false;
    std::vector<int> sorted = index;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k = 0; k < n; ++k) {
        if (sorted[k] != static_cast<int>(k)) return false;
    }
    return true;
}

}  // namespace navkit
