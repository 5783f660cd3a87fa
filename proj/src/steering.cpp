#include "navkit/steering.hpp"

#include <cmath>

#include "navkit/core_math.hpp"

namespace navkit {

double sampled_turn(double err, double u_max, double period, double tol) {
    if (std::abs(err) <= tol) return 0.0;
    if (std::abs(err) < u_max * period) return err / period;
    return u_max * sign_of(err);
}

bool AlignmentTracker::update(double err) {
    bool aligned = std::abs(err) <= tol_;
    if (prev_ && sign_of(*prev_) != sign_of(err) && std::abs(err - *prev_) < kPi) aligned = true;
    prev_ = err;
    return aligned;
}

}  // namespace navkit
