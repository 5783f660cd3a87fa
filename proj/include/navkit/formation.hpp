#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "navkit/checks.hpp"
#include "navkit/core_math.hpp"

namespace navkit {

/// Consensus variables of one robot. x and y are world-frame offsets: the
/// anchored sum (x_i + x, y_i + y) is what the robots agree on.
struct ConsensusState {
    double theta{0.0};
    double x{0.0};
    double y{0.0};
    double v{0.0};
};

struct FormationConfig {
    std::vector<Vec2> slots;  ///< (X_i, Y_i) in the formation frame
    double c{4.0};            ///< fictitious-target lead
    double range{10.0};       ///< detection range R
    double epsilon{1.0};
    int rounds_period{20};  ///< N, in communication instants
    RobotLimits limits{0.4, 1.0, 1.0};  ///< V^m, V^M, omega^max

    std::size_t size() const { return slots.size(); }
};

/// c > 2 V^M / omega^max, 0 < epsilon < R/2, slot graph connected.
ValidationReport validate_formation(const FormationConfig& cfg);

struct CommGraph {
    std::vector<std::vector<int>> adj;

    static CommGraph empty(std::size_t n) { return {std::vector<std::vector<int>>(n)}; }
    std::size_t size() const { return adj.size(); }
    void add_edge(int a, int b);
    bool has_edge(int a, int b) const;
};

bool is_connected(const CommGraph& g);

/// Union of graphs[first, last) is connected.
bool jointly_connected(const std::vector<CommGraph>& graphs, std::size_t first, std::size_t last);

std::vector<CommGraph> complete_schedule(std::size_t n, std::size_t instants);
std::vector<CommGraph> ring_schedule(std::size_t n, std::size_t instants);

/// Each edge present with probability p at each instant; every window of
/// `window` instants is then repaired to be jointly connected.
std::vector<CommGraph> random_schedule(std::size_t n, std::size_t instants, double p, std::size_t window,
                                       std::uint64_t seed);

/// Synchronous averaging round. `pos_k` and `pos_k1` are the robot positions
/// at instants k and k+1.
std::vector<ConsensusState> consensus_step(const std::vector<ConsensusState>& states, const std::vector<Vec2>& pos_k,
                                           const std::vector<Vec2>& pos_k1, const CommGraph& graph);

/// World <-> formation frame (x axis along theta).
inline Vec2 to_frame(Vec2 world, double theta) { return rotated(world, -theta); }
inline Vec2 from_frame(Vec2 frame, double theta) { return rotated(frame, theta); }

struct FictitiousTarget {
    double h{0.0};   ///< slot abscissa in the frame
    double x{0.0};   ///< robot abscissa in the frame
    Vec2 g_frame;    ///< target in the frame
    Vec2 g_world;
    bool behind{true};  ///< x <= h
};

/// `anchor` is the held anchored sum in world coordinates.
FictitiousTarget fictitious_target(const ConsensusState& s, Vec2 anchor, Vec2 position, Vec2 slot, double c, double t);

/// v = V^M when behind the slot else V^m; omega = omega^max * turn_sign(velocity, g - position).
ControlInput formation_control(const Pose& pose, Vec2 velocity, const FictitiousTarget& g, const RobotLimits& limits);

struct SlotGraph {
    CommGraph graph;
    bool connected{false};
};

/// Edge between slots whose distance is at most R - 2 epsilon.
SlotGraph build_slot_graph(const FormationConfig& cfg);

struct SlotAssignment {
    std::vector<int> index;  ///< 0-based slot per robot
    std::vector<int> busy;   ///< b_i
};

/// World position of slot `slot` as seen by a robot with consensus state s.
Vec2 slot_point(const ConsensusState& s, Vec2 anchor, Vec2 slot, double t);

/// One round of randomized reassignment at time t = kN.
SlotAssignment reassign_slots(const std::vector<int>& index, const std::vector<Vec2>& positions,
                              const std::vector<ConsensusState>& states, const std::vector<Vec2>& anchors,
                              const FormationConfig& cfg, const SlotGraph& slot_graph, double t, std::mt19937_64& rng);

bool is_permutation_of_slots(const std::vector<int>& index, std::size_t n);

}  // namespace navkit
