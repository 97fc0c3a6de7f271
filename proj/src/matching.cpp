#include "eriver/matching.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eriver {

namespace {
// floating-underflow guard on the ratio denominator only; y = 0 is handled
// before it applies
constexpr double kSupplyFloor = 1e-12;
}  // namespace

double meeting_probability(double passengers, double idle_vehicles,
                           const MatchingParams& params) {
    if (passengers < 0 || idle_vehicles < 0)
        throw std::invalid_argument("meeting_probability: negative input");
    if (idle_vehicles == 0.0) return 0.0;  // no vehicles, nothing to assign

    const double ratio = passengers / std::max(idle_vehicles, kSupplyFloor);
    const double exponent = ratio > params.threshold ? params.theta1 * ratio * ratio
                                                     : params.theta2 * ratio;
    const double m = -std::expm1(-exponent);
    return std::clamp(m, 0.0, 1.0);
}

}  // namespace eriver
