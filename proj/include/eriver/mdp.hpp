#pragma once

#include <vector>

#include "eriver/scenario.hpp"
#include "eriver/types.hpp"

namespace eriver {

struct FlowField;

// Feasible actions per location and SOC. The set is time-invariant for
// decision epochs (t < T), so it is precomputed once per scenario:
//   zone i, b >= 1:  cruise(j) for j in N_i, then charge(l) for every station
//                    reachable on the remaining charge (b >= tau_il * xi)
//   zone i, b = 0:   stay_offline (forced)
//   station l (b=B): cruise(j) for j in N_l
class ActionSpace {
public:
    explicit ActionSpace(const ScenarioConfig& cfg);

    const std::vector<Action>& zone_actions(int zone, int soc) const;
    const std::vector<Action>& station_actions(int station) const;

    // Action list for any state; empty for terminal states (t >= T).
    const std::vector<Action>& actions(const State& s, const ScenarioConfig& cfg) const;

private:
    int num_zones_ = 0;
    int battery_ = 0;
    std::vector<std::vector<Action>> zone_actions_;     // [i * B + (b-1)]
    std::vector<std::vector<Action>> station_actions_;  // [l]
    std::vector<Action> offline_only_;
    std::vector<Action> none_;
};

// Flat enumeration of the choice states the mean policy ranges over: zone
// states with b in 1..B and station departure states, for every t < T.
// Forced states (zone b = 0, offline) are not part of the policy.
class DecisionIndex {
public:
    explicit DecisionIndex(const ScenarioConfig& cfg);

    int num_states() const { return horizon_ * per_step_; }
    int per_step() const { return per_step_; }
    int horizon() const { return horizon_; }

    // -1 when (loc, soc) is not a choice state or t is out of range.
    int index(int t, const Location& loc, int soc) const;
    int index(const State& s) const { return index(s.t, s.loc, s.soc); }
    State state(int index) const;

private:
    int horizon_ = 0;
    int num_zones_ = 0;
    int num_stations_ = 0;
    int battery_ = 0;
    int per_step_ = 0;
};

std::vector<Action> feasible_actions(const State& s, const ScenarioConfig& cfg);

// All successor entries of (s, a) given the aggregate flows. Probabilities
// sum to one; successor times are physical (not clamped to T). Throws
// std::invalid_argument when a is infeasible at s and std::out_of_range when
// the flows do not cover a required (t, zone) or (t, station).
std::vector<TransitionEntry> transition_support(const State& s, const Action& a,
                                                const FlowField& flows,
                                                const ScenarioConfig& cfg);

}  // namespace eriver
