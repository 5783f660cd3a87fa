#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "navkit/checks.hpp"
#include "navkit/navigator.hpp"
#include "navkit/sensing.hpp"

namespace navkit {

struct NaierParams {
    double theta0{0.0};  ///< desired direction
    double ds{4.0};      ///< look-ahead disc diameter
    double d_safe{0.5};
    double delta{0.1};  ///< decision period
    RobotLimits limits{0.0, 1.0, 1.0};
    double v_env{-1.0};  ///< V_E; negative: derive from the environment
    bool seek_target{true};
    double resolution{kDefaultSectorResolution};
    double max_range{kDefaultMaxRange};

    void validate() const;
};

struct BearingRange {
    double lo{0.0};  ///< absolute, unwrapped, open interval (lo, hi)
    double hi{0.0};
};

struct FreeIntervals {
    double theta{0.0};
    bool m{false};  ///< true when something is inside the disc
    std::vector<BearingRange> intervals;
};

struct Blocked : std::runtime_error {
    Blocked() : std::runtime_error("no free bearing interval") {}
};

FreeIntervals extract_intervals(const SectorScan& scan);

/// Interval containing theta, else the one with the endpoint nearest to
/// theta; ties go to the lower interval. Throws Blocked when empty.
std::size_t nearest_interval(const FreeIntervals& fi, double theta);

double interval_middle(const FreeIntervals& fi, std::size_t j);

/// u = u_max sign(theta0 - theta) when m = 0, u_max sign(C - theta) when
/// m = 1; v = v_max. With `period` > 0 the final approach is sampled.
struct NaierCommand {
    ControlInput control;
    bool m{false};
    std::optional<double> bearing;  ///< C when m = 1
};
NaierCommand naier_command(const SectorScan& scan, const NaierParams& params, double theta, double theta0,
                           double period = 0.0);

ControlInput control(const SectorScan& scan, const NaierParams& params, double theta);

/// Inequalities on (V, V_E, u_max, delta, D_s); with an environment also
/// obstacle spacing, initial rear clearance and the initial free-disc state.
ValidationReport validate_naier(const NaierParams& params, double v_env);
ValidationReport validate_naier(const NaierParams& params, const Environment& env, const Pose& start,
                                double horizon);

/// Largest speed bound of any obstacle point.
double environment_speed_bound(const Environment& env);

/// 2 V t0.
double min_disc_diameter_for_horizon(double v, double t0);

class NaierController : public Navigator {
public:
    explicit NaierController(NaierParams params);

    NavDecision decide(const NavContext& ctx) override;
    std::string name() const override { return "naier"; }

    int blocked_decisions() const { return blocked_; }

private:
    NaierParams params_;
    std::optional<double> next_decision_;
    NavDecision held_;
    std::optional<double> last_free_bearing_;
    int blocked_{0};
};

}  // namespace navkit
