#pragma once

#include <optional>

namespace navkit {

/// Alignment tolerance on |wrap(H - theta)|.
inline constexpr double kAlignTolerance = 0.02;

/// Turn rate toward a heading error `err` under sample-and-hold: full rate
/// while the error exceeds one tick's turn, then the exact closing rate,
/// and 0 inside `tol`.
double sampled_turn(double err, double u_max, double period, double tol = kAlignTolerance);

/// Reports alignment when |err| <= tol, or when err changed sign between
/// consecutive samples without passing through the +-pi cut.
class AlignmentTracker {
public:
    explicit AlignmentTracker(double tol = kAlignTolerance) : tol_(tol) {}

    bool update(double err);
    void reset() { prev_.reset(); }

private:
    double tol_;
    std::optional<double> prev_;
};

}  // namespace navkit
