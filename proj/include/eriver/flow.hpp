#pragma once

#include <cstdint>
#include <vector>

#include "eriver/mdp.hpp"
#include "eriver/scenario.hpp"
#include "eriver/station_queue.hpp"

namespace eriver {

// Fleet-wide mixture of individual policies: one probability vector per
// choice state, aligned with ActionSpace's action lists and indexed by
// DecisionIndex.
struct MeanPolicy {
    std::vector<std::vector<double>> probs;

    bool same_shape(const MeanPolicy& other) const;

    // Simplex and support checks against the scenario's action space.
    // Throws std::invalid_argument on the first violation.
    void validate(const ScenarioConfig& cfg, double tol = 1e-12) const;
};

MeanPolicy uniform_policy(const ScenarioConfig& cfg);

// Uniform weights perturbed by seeded noise, renormalized per state.
MeanPolicy random_policy(const ScenarioConfig& cfg, std::uint64_t seed);

MeanPolicy mix_policies(const MeanPolicy& base, const MeanPolicy& update, double eta);

// All fluid aggregates produced by one forward propagation. Time axes run
// over 0..extended_horizon so trips, queues, and charges that spill past T
// are tracked without clamping.
struct FlowField {
    int horizon = 0;        // T
    int extended = 0;       // last step index of the bookkeeping horizon
    int num_zones = 0;
    int num_stations = 0;
    int battery = 0;

    // pre-decision mass x[t][k][b]; k enumerates zones then stations
    std::vector<std::vector<std::vector<double>>> x;
    // idle searching mass y[t][i][b] (decision-time SOC, b >= 1)
    std::vector<std::vector<std::vector<double>>> y;
    // station arrivals z[t][l][b] (SOC on arrival)
    std::vector<std::vector<std::vector<double>>> z;
    // realized meeting probability per zone-step (0 past T)
    std::vector<std::vector<double>> meeting;
    // waiting-time pmf of the cohort arriving at (t, l)
    std::vector<std::vector<WaitDistribution>> wait;

    // compartment timelines (masses at each step)
    std::vector<double> idle_total;        // sum of y
    std::vector<double> in_service;        // delivering a passenger
    std::vector<double> to_station;        // driving to a station
    std::vector<double> waiting;           // queued at stations
    std::vector<double> charging;          // plugged in (per-class intervals)
    std::vector<double> offline;           // cumulative, incl. mass exiting this step
    std::vector<double> parked;            // cumulative post-horizon arrivals
    std::vector<std::vector<double>> station_waiting;   // [t][l]
    std::vector<std::vector<double>> station_charging;  // [t][l]

    std::vector<QueueLedger> ledgers;  // one per station

    double max_conservation_gap = 0.0;  // worst |total - M| seen over t <= T

    double pre_decision_mass(const State& s) const;
    double idle_in_zone(int t, int i) const;          // sum over SOC
    double station_arrivals(int t, int l) const;      // sum over SOC
    double total_mass(int t) const;                   // all compartments

    int k_of(const Location& loc) const;  // flat index into x's middle axis
};

// The mean-field mapping mu: loads every fluid aggregate induced by the mean
// policy from the initial distribution. Throws std::invalid_argument when the
// policy shape does not match the scenario and std::runtime_error when mass
// conservation breaks beyond 1e-6 * M (an internal error).
FlowField propagate_forward(const MeanPolicy& policy, const ScenarioConfig& cfg);

}  // namespace eriver
