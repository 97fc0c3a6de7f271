#pragma once

#include <cstdint>
#include <vector>

#include "eriver/flow.hpp"
#include "eriver/scenario.hpp"

namespace eriver {

struct TraceEvent {
    State state;
    Action action;
    State next;
    double reward = 0.0;
};

struct AgentTrace {
    std::vector<TraceEvent> events;
    double total_reward = 0.0;
};

struct SimOptions {
    int num_vehicles = 0;
    std::uint64_t seed = 0;
    bool record_traces = true;
};

struct SimResult {
    FlowField flows;  // empirical counts in the fluid layout
    std::vector<AgentTrace> traces;
};

// Discrete agent-based counterpart of propagate_forward: each vehicle samples
// actions from the mean policy, matching is resolved by Bernoulli draws with
// the meeting probability evaluated at the empirical idle counts, and each
// station runs an integer-capacity FIFO queue with seeded tie shuffling.
// Deterministic for fixed (policy, cfg, options).
SimResult simulate_agents(const MeanPolicy& policy, const ScenarioConfig& cfg,
                          const SimOptions& options);
SimResult simulate_agents(const MeanPolicy& policy, const ScenarioConfig& cfg,
                          int num_vehicles, std::uint64_t seed);

struct FlowComparison {
    // per step t: ||emp - fluid||_1 / max(||fluid||_1, 1)
    std::vector<double> idle;
    std::vector<double> station_arrivals;
    std::vector<double> offline;
    double max_idle = 0.0;
    double max_station_arrivals = 0.0;
    double max_offline = 0.0;
};

// Per-step relative L1 differences between an empirical and a fluid flow
// field. Throws std::invalid_argument on shape mismatch.
FlowComparison compare_flows(const FlowField& empirical, const FlowField& fluid);

// Averages the per-(t,i,b) idle masses, per-(t,l,b) arrivals, and offline
// timeline over several runs, for seed-averaged comparisons.
FlowField average_flow_fields(const std::vector<FlowField>& fields);

}  // namespace eriver
