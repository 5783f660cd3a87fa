#pragma once

#include <optional>
#include <span>
#include <vector>

#include "navkit/core_math.hpp"
#include "navkit/geometry.hpp"
#include "navkit/world.hpp"

namespace navkit {

/// Readings farther than this report no obstacle.
inline constexpr double kDefaultMaxRange = 20.0;

struct RangeReading {
    double d{0.0};      ///< infinity when nothing is within range
    double d_dot{0.0};  ///< finite difference over one period
    int obstacle_id{-1};
    bool detected{false};
};

/// Distance to the nearest merged obstacle group, without rate.
RangeReading measure_range(std::span<const ObstacleGroup> groups, Vec2 r, double max_range = kDefaultMaxRange);

/// Range sensor with memory of the previous sample. d_dot is 0 on the first
/// sample and whenever either sample saw nothing.
class RangeSensor {
public:
    explicit RangeSensor(double period, double max_range = kDefaultMaxRange);

    RangeReading sample(std::span<const ObstacleGroup> groups, Vec2 r);
    RangeReading sample(const Environment& env, double t, const Pose& pose);
    void reset();

    double period() const { return period_; }

private:
    double period_;
    double max_range_;
    std::optional<double> prev_d_;
};

struct VisionConeReading {
    double d{0.0};
    double alpha1{0.0};  ///< absolute bearings, alpha1 <= alpha2 unwrapped
    double alpha2{0.0};
    Vec2 v_obs;
    int group_key{-1};
};

/// Vision cone of `group` seen from `pose`. The obstacle velocity is the
/// finite difference of the group's covering-circle centre over `period`.
/// Throws std::domain_error when the robot is inside the group or the cone
/// spans pi or more.
VisionConeReading sense_vision_cone(const Environment& env, double t, const Pose& pose, const ObstacleGroup& group,
                                    double period);

/// Cone of an explicit primitive set with a given velocity estimate.
VisionConeReading vision_cone_of(std::span<const geom::Primitive> region, const Pose& pose, Vec2 v_obs);

struct SectorScan {
    double resolution{0.0};
    double theta{0.0};  ///< heading at scan time
    double ds{0.0};
    std::vector<unsigned char> m;  ///< m[k] is M at offset -pi + (k+1)*resolution

    std::size_t size() const { return m.size(); }
    double offset(std::size_t k) const;
    double bearing(std::size_t k) const { return theta + offset(k); }
};

/// Default grid: 0.5 degree.
inline constexpr double kDefaultSectorResolution = kPi / 360.0;

/// M at an arbitrary absolute bearing: true when the `inflate`-grown set
/// meets the look-ahead disc along that ray.
bool sector_value(std::span<const geom::Primitive> prims, double inflate, const Pose& pose, double ds,
                  double bearing, double max_range = kDefaultMaxRange);

/// Throws std::invalid_argument unless ds > 0 and resolution divides pi.
SectorScan scan_sectors(std::span<const geom::Primitive> prims, double inflate, const Pose& pose, double ds,
                        double resolution = kDefaultSectorResolution, double max_range = kDefaultMaxRange);

SectorScan sense_sectors(const Snapshot& snap, double d_safe, const Pose& pose, double ds,
                         double resolution = kDefaultSectorResolution, double max_range = kDefaultMaxRange);

struct TargetBearing {
    double h{0.0};
    double distance{0.0};
};

TargetBearing sense_target(const Pose& pose, Vec2 target);

}  // namespace navkit
