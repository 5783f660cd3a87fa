#pragma once

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "navkit/geometry.hpp"
#include "navkit/vec2.hpp"

namespace navkit {

// ---------------------------------------------------------------- shapes

struct DiscShape {
    double radius{1.0};
};

/// Convex polygon, vertices in the obstacle frame, CCW.
struct PolygonShape {
    std::vector<Vec2> vertices;
};

/// Polyline of capsules. Under a LeaderChain motion only the point count
/// matters; the geometry comes from the leader's trail.
struct ChainShape {
    std::vector<Vec2> points;
    double half_width{0.2};
};

using Shape = std::variant<DiscShape, PolygonShape, ChainShape>;

/// Throws std::invalid_argument when the shape breaks its invariants.
void validate_shape(const Shape& shape);

// ----------------------------------------------------------- motion laws

struct MotionLaw;

struct StaticMotion {};
struct ConstantVelocity {
    Vec2 velocity;
};
/// Reference point travels on a circle around `center`; no body rotation.
struct ArcMotion {
    Vec2 center;
    double angular_rate{0.0};
};
/// Drift at `base_velocity` plus a lateral oscillation A*sin(w t).
struct SinusoidMotion {
    Vec2 base_velocity;
    double amplitude{0.0};
    double frequency{0.0};  ///< angular frequency, rad/s
};
/// Rigid rotation of the whole body about `pivot`.
struct RotationMotion {
    Vec2 pivot;
    double angular_rate{0.0};
};
/// Chain whose points trail the leader's past path at fixed arc spacing.
struct LeaderChainMotion {
    std::shared_ptr<const MotionLaw> leader;
    double spacing{0.5};
};

struct MotionLaw {
    std::variant<StaticMotion, ConstantVelocity, ArcMotion, SinusoidMotion, RotationMotion, LeaderChainMotion> law;
};

struct BodyState {
    Vec2 position;
    double orientation{0.0};
    Vec2 velocity;
};

/// Reference-point state of a body that starts at `origin` with `orientation0`.
BodyState evaluate_motion(const MotionLaw& m, Vec2 origin, double orientation0, double t);

// -------------------------------------------------------------- obstacles

struct Obstacle {
    int id{0};
    Shape shape;
    MotionLaw motion;
    Vec2 origin;              ///< reference point at t = 0
    double orientation0{0.0};
};

/// Upper bound on the speed of any point of the obstacle.
double max_point_speed(const Obstacle& o);

/// Covering-disc radius of the body (about its own reference frame).
double body_extent(const Obstacle& o);

struct Environment {
    std::vector<Obstacle> obstacles;
    double interpolation_gap{1.0};
    double d_safe{0.5};

    void validate() const;
};

/// Obstacle geometry placed in the world at one instant.
struct PlacedObstacle {
    int id{0};
    std::vector<geom::Primitive> prims;
    Vec2 reference;
    Vec2 velocity;
};

struct Snapshot {
    double t{0.0};
    std::vector<PlacedObstacle> obstacles;
};

Snapshot occupied_at(const Environment& env, double t);

struct DistanceResult {
    double d{0.0};
    Vec2 closest;
    int obstacle_id{-1};  ///< -1 when the environment is empty
    bool penetrated{false};
};

DistanceResult distance_to_environment(const Snapshot& snap, Vec2 r);
DistanceResult distance_to_environment(const Environment& env, double t, Vec2 r);

double distance_to_obstacle(const PlacedObstacle& o, Vec2 r);

/// Distance to the d_safe-inflated environment, floored at 0.
double enlarged_distance(const Snapshot& snap, Vec2 r, double d_safe);
double enlarged_distance(const Environment& env, double t, Vec2 r);

/// Set distance between two placed obstacles.
double obstacle_distance(const PlacedObstacle& a, const PlacedObstacle& b);

/// Obstacles merged by proximity. Single-member groups keep the member's
/// own geometry; larger groups are replaced by the convex hull of the members.
struct ObstacleGroup {
    int key{0};  ///< lowest member id
    std::vector<int> members;
    std::vector<geom::Primitive> region;
    Vec2 velocity;  ///< mean member reference velocity
};

std::vector<ObstacleGroup> interpolate_clusters(const Snapshot& snap, double gap);
std::vector<ObstacleGroup> interpolate_clusters(const Environment& env, double t);

/// Region of the group made of exactly these obstacles.
ObstacleGroup make_group(const Snapshot& snap, const std::vector<int>& member_ids);

struct GroupDistance {
    double d{0.0};
    Vec2 closest;
};
GroupDistance distance_to_group(const ObstacleGroup& g, Vec2 r);

/// Pairwise minimum set distances over [0, horizon], sampled every `step`.
/// Rows and columns follow `ids` (ascending obstacle id).
struct PairwiseDistances {
    std::vector<int> ids;
    std::vector<double> d;  ///< row-major, size ids.size()^2
    double at(std::size_t i, std::size_t j) const { return d[i * ids.size() + j]; }
};
PairwiseDistances pairwise_min_distance(const Environment& env, double horizon, double step = 0.1);

/// Component label per obstacle (index into `ids` of its lowest member).
/// Obstacles are joined when they come within the interpolation gap.
std::vector<std::size_t> merged_components(const PairwiseDistances& pd, double gap);

struct SafetyVerdict {
    bool safe{true};
    double margin{0.0};  ///< d - d_safe
    double d{0.0};
};

SafetyVerdict collision_check(const Snapshot& snap, Vec2 r, double d_safe);
SafetyVerdict collision_check(const Environment& env, double t, Vec2 r, double d_safe);

}  // namespace navkit
