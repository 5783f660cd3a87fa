#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>

#include "navkit/core_math.hpp"
#include "navkit/world.hpp"

namespace navkit {

/// Everything a controller may observe at one control tick.
struct NavContext {
    const Environment& env;
    const Snapshot& snap;
    std::span<const ObstacleGroup> groups;
    double t{0.0};
    Pose pose;
    double speed{0.0};  ///< speed commanded on the previous tick
    Vec2 target;
    double period{0.1};
};

struct NavDecision {
    ControlInput control;
    std::string mode;
    int engaged{-1};
    double avoid_angle{std::numeric_limits<double>::quiet_NaN()};
    bool decision_instant{true};
    bool interval_mode{false};               ///< sector controller: m = 1
    std::optional<double> commanded_bearing;  ///< sector controller, m = 1 only
};

class Navigator {
public:
    virtual ~Navigator() = default;
    virtual NavDecision decide(const NavContext& ctx) = 0;
    virtual std::string name() const = 0;
};

}  // namespace navkit
