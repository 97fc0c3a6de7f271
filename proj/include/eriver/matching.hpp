#pragma once

#include "eriver/scenario.hpp"

namespace eriver {

// Per-step probability that one idle vehicle picks up a passenger, as a
// function of the local demand-supply ratio phi = q / y:
//   m = 1 - exp(-theta1 * phi^2)   if phi > threshold
//   m = 1 - exp(-theta2 * phi)     otherwise
// Returns 0 when no vehicles are idle (y = 0). Throws std::invalid_argument
// on negative inputs.
double meeting_probability(double passengers, double idle_vehicles,
                           const MatchingParams& params);

}  // namespace eriver
