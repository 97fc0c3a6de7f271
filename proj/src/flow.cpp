#include "eriver/flow.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "eriver/matching.hpp"

namespace eriver {

namespace {
constexpr double kFlush = 1e-14;  // sub-threshold masses are zeroed
}

bool MeanPolicy::same_shape(const MeanPolicy& other) const {
    if (probs.size() != other.probs.size()) return false;
    for (std::size_t k = 0; k < probs.size(); ++k)
        if (probs[k].size() != other.probs[k].size()) return false;
    return true;
}

void MeanPolicy::validate(const ScenarioConfig& cfg, double tol) const {
    const DecisionIndex index(cfg);
    const ActionSpace space(cfg);
    if (static_cast<int>(probs.size()) != index.num_states())
        throw std::invalid_argument("MeanPolicy: wrong number of states");
    for (int k = 0; k < index.num_states(); ++k) {
        const State s = index.state(k);
        const auto& list = space.actions(s, cfg);
        if (probs[k].size() != list.size())
            throw std::invalid_argument("MeanPolicy: action count mismatch at " +
                                        to_string(s));
        double sum = 0.0;
        for (double p : probs[k]) {
            if (p < 0)
                throw std::invalid_argument("MeanPolicy: negative probability at " +
                                            to_string(s));
            sum += p;
        }
        if (std::abs(sum - 1.0) > tol)
            throw std::invalid_argument("MeanPolicy: probabilities at " + to_string(s) +
                                        " sum to " + std::to_string(sum));
    }
}

MeanPolicy uniform_policy(const ScenarioConfig& cfg) {
    const DecisionIndex index(cfg);
    const ActionSpace space(cfg);
    MeanPolicy policy;
    policy.probs.resize(index.num_states());
    for (int k = 0; k < index.num_states(); ++k) {
        const State s = index.state(k);
        const auto& list = space.actions(s, cfg);
        policy.probs[k].assign(list.size(), 1.0 / static_cast<double>(list.size()));
    }
    return policy;
}

MeanPolicy random_policy(const ScenarioConfig& cfg, std::uint64_t seed) {
    const DecisionIndex index(cfg);
    const ActionSpace space(cfg);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> noise(0.0, 1.0);
    MeanPolicy policy;
    policy.probs.resize(index.num_states());
    for (int k = 0; k < index.num_states(); ++k) {
        const State s = index.state(k);
        const auto& list = space.actions(s, cfg);
        auto& row = policy.probs[k];
        row.resize(list.size());
        double total = 0.0;
        for (double& w : row) {
            w = 1.0 + noise(rng);
            total += w;
        }
        for (double& w : row) w /= total;
    }
    return policy;
}

MeanPolicy mix_policies(const MeanPolicy& base, const MeanPolicy& update, double eta) {
    if (!base.same_shape(update))
        throw std::invalid_argument("mix_policies: shape mismatch");
    MeanPolicy out = base;
    for (std::size_t k = 0; k < out.probs.size(); ++k)
        for (std::size_t a = 0; a < out.probs[k].size(); ++a)
            out.probs[k][a] = (1.0 - eta) * base.probs[k][a] + eta * update.probs[k][a];
    return out;
}

// ---------------------------------------------------------------------------
// FlowField
// ---------------------------------------------------------------------------

int FlowField::k_of(const Location& loc) const {
    if (loc.is_zone()) return loc.index;
    if (loc.is_station()) return num_zones + loc.index;
    throw std::invalid_argument("FlowField: offline has no pre-decision slot");
}

double FlowField::pre_decision_mass(const State& s) const {
    if (s.t < 0 || s.t > extended || s.soc < 0 || s.soc > battery) return 0.0;
    if (s.loc.is_offline()) return 0.0;
    return x[s.t][k_of(s.loc)][s.soc];
}

double FlowField::idle_in_zone(int t, int i) const {
    double sum = 0.0;
    for (int b = 1; b <= battery; ++b) sum += y[t][i][b];
    return sum;
}

double FlowField::station_arrivals(int t, int l) const {
    double sum = 0.0;
    for (int b = 0; b <= battery; ++b) sum += z[t][l][b];
    return sum;
}

double FlowField::total_mass(int t) const {
    return idle_total[t] + in_service[t] + to_station[t] + waiting[t] + charging[t] +
           offline[t] + parked[t];
}

// ---------------------------------------------------------------------------
// forward propagation
// ---------------------------------------------------------------------------

namespace {

FlowField make_field(const ScenarioConfig& cfg) {
    FlowField f;
    f.horizon = cfg.horizon;
    f.extended = cfg.extended_horizon();
    f.num_zones = cfg.num_zones;
    f.num_stations = cfg.num_stations;
    f.battery = cfg.battery_capacity;
    const int steps = f.extended + 1;
    const int K = cfg.num_zones + cfg.num_stations;
    const int socs = cfg.battery_capacity + 1;
    f.x.assign(steps, std::vector<std::vector<double>>(K, std::vector<double>(socs, 0.0)));
    f.y.assign(steps, std::vector<std::vector<double>>(cfg.num_zones,
                                                       std::vector<double>(socs, 0.0)));
    f.z.assign(steps, std::vector<std::vector<double>>(cfg.num_stations,
                                                       std::vector<double>(socs, 0.0)));
    f.meeting.assign(steps, std::vector<double>(cfg.num_zones, 0.0));
    f.wait.assign(steps, std::vector<WaitDistribution>(cfg.num_stations));
    f.idle_total.assign(steps, 0.0);
    f.in_service.assign(steps, 0.0);
    f.to_station.assign(steps, 0.0);
    f.waiting.assign(steps, 0.0);
    f.charging.assign(steps, 0.0);
    f.offline.assign(steps, 0.0);
    f.parked.assign(steps, 0.0);
    f.station_waiting.assign(steps, std::vector<double>(cfg.num_stations, 0.0));
    f.station_charging.assign(steps, std::vector<double>(cfg.num_stations, 0.0));
    f.ledgers.reserve(cfg.num_stations);
    for (int l = 0; l < cfg.num_stations; ++l)
        f.ledgers.emplace_back(l, steps, cfg.station_capacity);
    return f;
}

}  // namespace

FlowField propagate_forward(const MeanPolicy& policy, const ScenarioConfig& cfg) {
    const DecisionIndex index(cfg);
    const ActionSpace space(cfg);
    if (static_cast<int>(policy.probs.size()) != index.num_states())
        throw std::invalid_argument(
            "propagate_forward: policy does not cover the scenario's decision states");

    FlowField f = make_field(cfg);
    const int steps = f.extended + 1;
    const int N = cfg.num_zones;
    const int L = cfg.num_stations;
    const int B = cfg.battery_capacity;
    const int T = cfg.horizon;
    const int xi = cfg.consumption;

    std::vector<double> offline_entry(steps + 1, 0.0);
    std::vector<double> pending_offline(steps, 0.0);
    std::vector<double> parked_entry(steps, 0.0);

    for (const auto& atom : cfg.initial_distribution)
        f.x[0][f.k_of(atom.loc)][atom.soc] += cfg.fleet_size * atom.probability;

    auto book_interval = [steps](std::vector<double>& timeline, int from, int to,
                                 double mass) {
        for (int s = std::max(from, 0); s < std::min(to, steps); ++s) timeline[s] += mass;
    };

    for (int t = 0; t < steps; ++t) {
        // flush dust so supports stay sparse
        for (auto& per_loc : f.x[t])
            for (double& v : per_loc)
                if (v != 0.0 && std::abs(v) < kFlush) v = 0.0;
        for (auto& per_station : f.z[t])
            for (double& v : per_station)
                if (v != 0.0 && std::abs(v) < kFlush) v = 0.0;

        if (t < T) {
            // policy application: zones (SOC ascending), then stations
            for (int i = 0; i < N; ++i) {
                const double dead = f.x[t][i][0];
                if (dead > 0.0) {
                    offline_entry[t + 1] += dead;
                    pending_offline[t] += dead;
                }
                for (int b = 1; b <= B; ++b) {
                    const double mass = f.x[t][i][b];
                    if (mass == 0.0) continue;
                    const int k = index.index(t, Location::zone(i), b);
                    const auto& list = space.zone_actions(i, b);
                    const auto& probs = policy.probs[k];
                    for (std::size_t a = 0; a < list.size(); ++a) {
                        const double part = mass * probs[a];
                        if (part == 0.0) continue;
                        if (list[a].kind == ActionKind::Cruise) {
                            f.y[t][list[a].target][b] += part;
                        } else {
                            const int l = list[a].target;
                            const int tau = cfg.travel_time_station[i][l];
                            f.z[t + tau][l][b - tau * xi] += part;
                            book_interval(f.to_station, t, t + tau, part);
                        }
                    }
                }
            }
            for (int l = 0; l < L; ++l) {
                const double mass = f.x[t][N + l][B];
                if (mass == 0.0) continue;
                const int k = index.index(t, Location::station(l), B);
                const auto& list = space.station_actions(l);
                const auto& probs = policy.probs[k];
                for (std::size_t a = 0; a < list.size(); ++a) {
                    const double part = mass * probs[a];
                    if (part != 0.0) f.y[t][list[a].target][B] += part;
                }
            }

            // matching and the destination split
            for (int i = 0; i < N; ++i) {
                double idle = 0.0;
                for (int b = 1; b <= B; ++b) idle += f.y[t][i][b];
                f.idle_total[t] += idle;
                const double m =
                    meeting_probability(cfg.demand[t][i], idle, cfg.matching_at(t, i));
                f.meeting[t][i] = m;
                for (int b = 1; b <= B; ++b) {
                    const double searching = f.y[t][i][b];
                    if (searching == 0.0) continue;
                    const int soc_after = b - xi;

                    const double unmatched = (1.0 - m) * searching;
                    if (unmatched != 0.0) {
                        if (soc_after > 0)
                            f.x[t + 1][i][soc_after] += unmatched;
                        else
                            offline_entry[t + 1] += unmatched;
                    }
                    if (m == 0.0) continue;
                    const double matched = m * searching;
                    for (int dest = 0; dest < N; ++dest) {
                        const double part = matched * cfg.od_shares[t][i][dest];
                        if (part == 0.0) continue;
                        const int tau = cfg.travel_time_zone[i][dest];
                        const int soc_arrival = soc_after - tau * xi;
                        if (soc_arrival >= 0) {
                            const int arrive = t + 1 + tau;
                            if (soc_arrival > 0)
                                f.x[arrive][dest][soc_arrival] += part;
                            else
                                offline_entry[arrive] += part;
                            book_interval(f.in_service, t + 1, arrive, part);
                        } else {
                            offline_entry[t + 1] += part;  // infeasible match
                        }
                    }
                }
            }
        } else {
            // day over: pre-decision mass arriving now parks for good
            for (int k = 0; k < N + L; ++k)
                for (int b = 0; b <= B; ++b) parked_entry[t] += f.x[t][k][b];
        }

        // station cohorts arriving at t
        for (int l = 0; l < L; ++l) {
            double total = 0.0;
            for (int b = 0; b <= B; ++b) total += f.z[t][l][b];
            if (total == 0.0) {
                f.wait[t][l] = WaitDistribution{{1.0}};
                continue;
            }
            const WaitDistribution dist =
                wait_time_distribution(f.ledgers[l], t, f.z[t][l], cfg);
            f.wait[t][l] = dist;
            for (int omega = 0; omega <= dist.max_wait(); ++omega) {
                const double w = dist.pmf[omega];
                if (w == 0.0) continue;
                const int admit = t + omega;
                for (int b = 0; b <= B; ++b) {
                    const double part = f.z[t][l][b] * w;
                    if (part == 0.0) continue;
                    const int duration = cfg.charge_steps(b);
                    book_interval(f.waiting, t, admit, part);
                    book_interval(f.charging, admit, admit + duration, part);
                    for (int s = t; s < std::min(admit, steps); ++s)
                        f.station_waiting[s][l] += part;
                    for (int s = admit; s < std::min(admit + duration, steps); ++s)
                        f.station_charging[s][l] += part;
                    const int depart = admit + duration;
                    if (depart < steps)
                        f.x[depart][N + l][B] += part;
                    else
                        parked_entry[steps - 1] += part;  // horizon truncation
                }
            }
        }
    }

    double offline_cum = 0.0;
    double parked_cum = 0.0;
    for (int t = 0; t < steps; ++t) {
        offline_cum += offline_entry[t];
        parked_cum += parked_entry[t];
        f.offline[t] = offline_cum + pending_offline[t];
        f.parked[t] = parked_cum;
    }

    for (int t = 0; t < steps; ++t) {
        const double gap = std::abs(f.total_mass(t) - cfg.fleet_size);
        f.max_conservation_gap = std::max(f.max_conservation_gap, gap);
    }
    if (f.max_conservation_gap > 1e-6 * cfg.fleet_size)
        throw std::runtime_error("propagate_forward: mass conservation violated by " +
                                 std::to_string(f.max_conservation_gap));
    return f;
}

}  // namespace eriver
