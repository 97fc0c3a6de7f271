#include "eriver/equilibrium.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace eriver {

namespace {
constexpr double kTieTolerance = 1e-10;   // argmax ties in the best response
constexpr double kFlowThreshold = 1e-14;  // "positive vehicle flows"
}  // namespace

double ValueTable::value(int t, const Location& loc, int soc) const {
    if (t >= horizon) return 0.0;  // terminal clamp
    if (t < 0) throw std::out_of_range("ValueTable::value: negative time");
    const int K = num_zones + num_stations + 1;
    int k = 0;
    if (loc.is_zone())
        k = loc.index;
    else if (loc.is_station())
        k = num_zones + loc.index;
    else
        k = K - 1;
    return v[(static_cast<std::size_t>(t) * K + k) * (battery + 1) + soc];
}

double ValueTable::value(const State& s) const { return value(s.t, s.loc, s.soc); }

const std::vector<double>& ValueTable::action_values(int decision_index) const {
    return q.at(decision_index);
}

BackwardResult backward_dp(const FlowField& flows, const ScenarioConfig& cfg) {
    const DecisionIndex index(cfg);
    const ActionSpace space(cfg);
    const int T = cfg.horizon;
    const int N = cfg.num_zones;
    const int L = cfg.num_stations;
    const int B = cfg.battery_capacity;
    const int K = N + L + 1;

    BackwardResult result;
    ValueTable& table = result.table;
    table.horizon = T;
    table.num_zones = N;
    table.num_stations = L;
    table.battery = B;
    table.v.assign(static_cast<std::size_t>(T + 1) * K * (B + 1), 0.0);
    table.q.resize(index.num_states());
    result.policy.probs.resize(index.num_states());

    auto slot = [&](int t, int k, int b) -> double& {
        return table.v[(static_cast<std::size_t>(t) * K + k) * (B + 1) + b];
    };

    for (int t = T - 1; t >= 0; --t) {
        // offline stays 0; an empty battery in a zone forfeits the rest of the
        // day and pays the offline entry penalty
        for (int i = 0; i < N; ++i) slot(t, i, 0) = cfg.offline_penalty;

        for (int local = 0; local < index.per_step(); ++local) {
            const int k = t * index.per_step() + local;
            const State s = index.state(k);
            const auto& actions = space.actions(s, cfg);
            auto& qvals = table.q[k];
            qvals.resize(actions.size());
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t a = 0; a < actions.size(); ++a) {
                double qa = 0.0;
                for (const TransitionEntry& e :
                     transition_support(s, actions[a], flows, cfg))
                    qa += e.prob * (e.reward + table.value(e.next));
                qvals[a] = qa;
                best = std::max(best, qa);
            }
            if (!std::isfinite(best))
                throw std::runtime_error("backward_dp: non-finite value at " +
                                         to_string(s));
            slot(t, s.loc.is_zone() ? s.loc.index : N + s.loc.index, s.soc) = best;

            auto& row = result.policy.probs[k];
            row.assign(actions.size(), 0.0);
            int ties = 0;
            for (std::size_t a = 0; a < actions.size(); ++a)
                if (qvals[a] >= best - kTieTolerance) ++ties;
            for (std::size_t a = 0; a < actions.size(); ++a)
                if (qvals[a] >= best - kTieTolerance) row[a] = 1.0 / ties;
        }
    }
    return result;
}

PolicyGap policy_gap(const MeanPolicy& p1, const MeanPolicy& p2) {
    if (!p1.same_shape(p2)) throw std::invalid_argument("policy_gap: shape mismatch");
    PolicyGap gap;
    gap.num_states = static_cast<int>(p1.probs.size());
    for (std::size_t k = 0; k < p1.probs.size(); ++k)
        for (std::size_t a = 0; a < p1.probs[k].size(); ++a)
            gap.raw += std::abs(p1.probs[k][a] - p2.probs[k][a]);
    gap.normalized = gap.num_states > 0 ? gap.raw / gap.num_states : 0.0;
    return gap;
}

double value_gap(const FlowField& flows, const ValueTable& table,
                 const MeanPolicy& policy, const ScenarioConfig& cfg) {
    const DecisionIndex index(cfg);
    if (static_cast<int>(policy.probs.size()) != index.num_states() ||
        static_cast<int>(table.q.size()) != index.num_states())
        throw std::invalid_argument("value_gap: inconsistent inputs");

    double numerator = 0.0;
    double denominator = 0.0;
    for (int k = 0; k < index.num_states(); ++k) {
        const State s = index.state(k);
        const double mass = flows.pre_decision_mass(s);
        if (mass <= kFlowThreshold) continue;
        const double v = table.value(s);
        denominator += mass * std::max(std::abs(v), 1.0);
        const auto& qvals = table.q[k];
        for (std::size_t a = 0; a < qvals.size(); ++a) {
            const double p = policy.probs[k][a];
            if (p <= 0.0) continue;
            numerator += mass * p * std::max(v - qvals[a], 0.0);
        }
    }
    return denominator > 0.0 ? numerator / denominator : 0.0;
}

SolveResult solve_mfe(const ScenarioConfig& cfg, const SolveOptions& options) {
    if (!(options.tol > 0)) throw std::invalid_argument("solve_mfe: tol must be positive");
    if (options.max_iter < 1)
        throw std::invalid_argument("solve_mfe: max_iter must be at least 1");
    require_valid(cfg);

    using clock = std::chrono::steady_clock;
    const auto start = clock::now();

    MeanPolicy mean = random_policy(cfg, options.seed);
    SolveDiagnostics diag;

    for (int n = 0; n < options.max_iter; ++n) {
        const auto iter_start = clock::now();
        const FlowField flows = propagate_forward(mean, cfg);
        const BackwardResult best = backward_dp(flows, cfg);
        const double vgap = value_gap(flows, best.table, mean, cfg);

        const double eta = 1.0 / (n + 1);
        MeanPolicy next = mix_policies(mean, best.policy, eta);
        next.validate(cfg);
        const PolicyGap pgap = policy_gap(next, mean);
        mean = std::move(next);

        diag.policy_gap_norm.push_back(pgap.normalized);
        diag.policy_gap_raw.push_back(pgap.raw);
        diag.value_gaps.push_back(vgap);
        diag.conservation_gap.push_back(flows.max_conservation_gap);
        diag.iter_seconds.push_back(
            std::chrono::duration<double>(clock::now() - iter_start).count());
        diag.iterations = n + 1;

        if (pgap.normalized < options.tol) {
            diag.converged = true;
            break;
        }
    }

    SolveResult result;
    result.flows = propagate_forward(mean, cfg);
    BackwardResult best = backward_dp(result.flows, cfg);
    diag.final_value_gap = value_gap(result.flows, best.table, mean, cfg);
    diag.final_policy_gap_norm = diag.policy_gap_norm.back();
    diag.final_policy_gap_raw = diag.policy_gap_raw.back();
    diag.total_seconds = std::chrono::duration<double>(clock::now() - start).count();
    result.policy = std::move(mean);
    result.table = std::move(best.table);
    result.diagnostics = std::move(diag);
    return result;
}

}  // namespace eriver
