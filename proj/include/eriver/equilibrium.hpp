#pragma once

#include <cstdint>
#include <vector>

#include "eriver/flow.hpp"
#include "eriver/mdp.hpp"
#include "eriver/scenario.hpp"

namespace eriver {

// Optimal values V and action values Q against fixed aggregate flows.
// V is stored for t in 0..T over zones, stations, and offline; lookups at or
// past T return 0 (terminal).
struct ValueTable {
    int horizon = 0;
    int num_zones = 0;
    int num_stations = 0;
    int battery = 0;

    std::vector<double> v;                 // [t][k][b], k = zones, stations, offline
    std::vector<std::vector<double>> q;    // per decision state, aligned with ActionSpace

    double value(const State& s) const;
    double value(int t, const Location& loc, int soc) const;
    const std::vector<double>& action_values(int decision_index) const;
};

struct BackwardResult {
    MeanPolicy policy;  // uniform over the argmax set of each choice state
    ValueTable table;
};

// Finite-horizon dynamic programming sweep (gamma = 1) against fixed flows.
BackwardResult backward_dp(const FlowField& flows, const ScenarioConfig& cfg);

struct PolicyGap {
    double raw = 0.0;         // sum_s sum_a |p1 - p2|
    double normalized = 0.0;  // raw / number of choice states
    int num_states = 0;
};

PolicyGap policy_gap(const MeanPolicy& p1, const MeanPolicy& p2);

// Flow-weighted optimality slack of `policy` under `table`:
//   sum_{s,a: x(s)>0, pi(a|s)>0} x(s) pi(a|s) (V(s) - Q(s,a))
//   / sum_{s: x(s)>0} x(s) max(|V(s)|, 1)
// Nonnegative since V = max_a Q.
double value_gap(const FlowField& flows, const ValueTable& table,
                 const MeanPolicy& policy, const ScenarioConfig& cfg);

struct SolveDiagnostics {
    std::vector<double> policy_gap_norm;
    std::vector<double> policy_gap_raw;
    std::vector<double> value_gaps;
    std::vector<double> conservation_gap;
    std::vector<double> iter_seconds;  // wall time; excluded from determinism
    int iterations = 0;
    bool converged = false;
    double final_policy_gap_norm = 0.0;
    double final_policy_gap_raw = 0.0;
    double final_value_gap = 0.0;
    double total_seconds = 0.0;
};

struct SolveOptions {
    double tol = 1e-4;      // on the normalized policy gap
    int max_iter = 500;
    std::uint64_t seed = 0;
    int threads = 0;        // 0 = auto; forwarded to inner modules
};

struct SolveResult {
    MeanPolicy policy;
    FlowField flows;       // recomputed under the final policy
    ValueTable table;      // best-response values against those flows
    SolveDiagnostics diagnostics;
};

// Fictitious-play / Frank-Wolfe iteration to a mean-field equilibrium:
// starting from a seeded random policy, alternate forward flow loading and
// backward best response, averaging with step size 1/(n+1) until the
// normalized policy gap drops below tol or max_iter is reached.
SolveResult solve_mfe(const ScenarioConfig& cfg, const SolveOptions& options);

}  // namespace eriver
