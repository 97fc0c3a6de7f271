#include "eriver/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <stdexcept>

#include "eriver/matching.hpp"
#include "eriver/mdp.hpp"

namespace eriver {

namespace {

struct Vehicle {
    Location loc;
    int soc = 0;
    double reward = 0.0;
    bool offline = false;
};

FlowField make_empty_field(const ScenarioConfig& cfg) {
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

int sample_index(const std::vector<double>& weights, double u) {
    double cum = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        cum += weights[i];
        if (u < cum) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
}

}  // namespace

SimResult simulate_agents(const MeanPolicy& policy, const ScenarioConfig& cfg,
                          const SimOptions& options) {
    if (options.num_vehicles < 1)
        throw std::invalid_argument("simulate_agents: need at least one vehicle");
    policy.validate(cfg, 1e-9);

    const DecisionIndex index(cfg);
    const ActionSpace space(cfg);
    const int M = options.num_vehicles;
    const int N = cfg.num_zones;
    const int L = cfg.num_stations;
    const int B = cfg.battery_capacity;
    const int T = cfg.horizon;
    const int xi = cfg.consumption;
    const int capacity = std::max(static_cast<int>(std::floor(cfg.station_capacity)), 0);

    FlowField f = make_empty_field(cfg);
    const int steps = f.extended + 1;

    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<Vehicle> fleet(M);
    SimResult result;
    if (options.record_traces) result.traces.resize(M);
    auto record = [&](int id, const State& s, const Action& a, const State& next,
                      double reward) {
        fleet[id].reward += reward;
        if (options.record_traces) {
            result.traces[id].events.push_back({s, a, next, reward});
            result.traces[id].total_reward = fleet[id].reward;
        }
    };

    // per-step agendas
    std::vector<std::vector<int>> decide_at(steps);       // pre-decision epochs
    std::vector<std::vector<int>> release_at(steps);      // charge completions
    std::vector<std::vector<int>> arrive_at_station(steps);
    std::vector<int> arrival_station(M, -1);
    std::vector<int> arrival_time(M, -1);
    std::vector<Location> decision_loc(M);  // location at the last decision epoch

    std::vector<double> offline_entry(steps, 0.0);
    std::vector<double> parked_entry(steps, 0.0);

    auto book_interval = [steps](std::vector<double>& timeline, int from, int to,
                                 double mass) {
        for (int s = std::max(from, 0); s < std::min(to, steps); ++s) timeline[s] += mass;
    };

    // initial states from rho
    {
        std::vector<double> weights;
        for (const auto& atom : cfg.initial_distribution) weights.push_back(atom.probability);
        for (int id = 0; id < M; ++id) {
            const auto& atom = cfg.initial_distribution[sample_index(weights, unit(rng))];
            fleet[id].loc = atom.loc;
            fleet[id].soc = atom.soc;
            decide_at[0].push_back(id);
        }
    }

    std::vector<std::deque<int>> queue(L);       // FIFO of waiting vehicles
    std::vector<int> occupied(L, 0);

    std::vector<std::vector<int>> searchers(N);  // per-zone, rebuilt each step

    for (int t = 0; t < steps; ++t) {
        // 1. charge completions free their spots and decide now
        for (int id : release_at[t]) {
            const int l = fleet[id].loc.index;
            occupied[l] -= 1;
            fleet[id].soc = B;
            decide_at[t].push_back(id);
        }

        // 2. decisions
        for (auto& list : searchers) list.clear();
        for (int id : decide_at[t]) {
            Vehicle& v = fleet[id];
            const int k_flat = v.loc.is_zone() ? v.loc.index : N + v.loc.index;
            f.x[t][k_flat][v.soc] += 1.0;
            if (t >= T) {
                parked_entry[t] += 1.0;
                continue;
            }
            if (v.loc.is_zone() && v.soc == 0) {
                // counted offline from its decision epoch, like the fluid loader
                record(id, State(State{t, v.loc, 0}), Action::stay_offline(),
                       State::offline(t + 1), cfg.offline_penalty);
                v.offline = true;
                offline_entry[t] += 1.0;
                continue;
            }
            const int kk = index.index(t, v.loc, v.soc);
            const auto& actions = space.actions(State{t, v.loc, v.soc}, cfg);
            const int choice = sample_index(policy.probs[kk], unit(rng));
            const Action action = actions[choice];
            decision_loc[id] = v.loc;
            if (action.kind == ActionKind::Cruise) {
                const int j = action.target;
                // relocation is instantaneous; the search happens in j
                searchers[j].push_back(id);
                f.y[t][j][v.soc] += 1.0;
                f.idle_total[t] += 1.0;
            } else {
                const int l = action.target;
                const int tau = cfg.travel_time_station[v.loc.index][l];
                const State from{t, v.loc, v.soc};
                v.soc -= tau * xi;
                v.loc = Location::station(l);
                arrival_station[id] = l;
                arrival_time[id] = t + tau;
                arrive_at_station[t + tau].push_back(id);
                f.z[t + tau][l][v.soc] += 1.0;
                book_interval(f.to_station, t, t + tau, 1.0);
                // trace entry completed at admission, when the wait is known
                const int duration = cfg.charge_steps(v.soc);
                record(id, from, action,
                       State::station(-1, l, B),  // placeholder; fixed at admission
                       -cfg.charging_price[l] * duration);
            }
        }

        // 3. matching with the meeting probability at empirical idle counts
        if (t < T) {
            for (int i = 0; i < N; ++i) {
                const double idle = static_cast<double>(searchers[i].size());
                const double m =
                    meeting_probability(cfg.demand[t][i], idle, cfg.matching_at(t, i));
                f.meeting[t][i] = m;
                for (int id : searchers[i]) {
                    Vehicle& v = fleet[id];
                    const State from{t, decision_loc[id], v.soc};
                    const Action action = Action::cruise(i);
                    const int soc_after = v.soc - xi;
                    const bool matched = unit(rng) < m;
                    if (!matched) {
                        if (soc_after > 0) {
                            v.loc = Location::zone(i);
                            v.soc = soc_after;
                            decide_at[t + 1].push_back(id);
                            record(id, from, action, State::zone(t + 1, i, soc_after), 0.0);
                        } else {
                            v.offline = true;
                            offline_entry[t + 1] += 1.0;
                            record(id, from, action, State::offline(t + 1),
                                   cfg.offline_penalty);
                        }
                        continue;
                    }
                    const int dest = sample_index(cfg.od_shares[t][i], unit(rng));
                    const int tau = cfg.travel_time_zone[i][dest];
                    const int soc_arrival = soc_after - tau * xi;
                    if (soc_arrival >= 0) {
                        const int arrive = t + 1 + tau;
                        book_interval(f.in_service, t + 1, arrive, 1.0);
                        if (soc_arrival > 0) {
                            v.loc = Location::zone(dest);
                            v.soc = soc_arrival;
                            decide_at[arrive].push_back(id);
                            record(id, from, action, State::zone(arrive, dest, soc_arrival),
                                   cfg.fare[i][dest]);
                        } else {
                            v.offline = true;
                            offline_entry[arrive] += 1.0;
                            record(id, from, action, State::offline(arrive),
                                   cfg.fare[i][dest] + cfg.offline_penalty);
                        }
                    } else {
                        v.offline = true;
                        offline_entry[t + 1] += 1.0;
                        record(id, from, action, State::offline(t + 1),
                               cfg.offline_penalty);
                    }
                }
            }
        }

        // 4. station arrivals join the FIFO (ties shuffled), then admission
        for (int l = 0; l < L; ++l) {
            std::vector<int> arrivals;
            for (int id : arrive_at_station[t])
                if (arrival_station[id] == l && arrival_time[id] == t)
                    arrivals.push_back(id);
            std::shuffle(arrivals.begin(), arrivals.end(), rng);
            for (int id : arrivals) queue[l].push_back(id);

            while (occupied[l] < capacity && !queue[l].empty()) {
                const int id = queue[l].front();
                queue[l].pop_front();
                Vehicle& v = fleet[id];
                const int omega = t - arrival_time[id];
                const int duration = cfg.charge_steps(v.soc);
                occupied[l] += 1;
                book_interval(f.waiting, arrival_time[id], t, 1.0);
                book_interval(f.charging, t, t + duration, 1.0);
                for (int s = arrival_time[id]; s < std::min(t, steps); ++s)
                    f.station_waiting[s][l] += 1.0;
                for (int s = t; s < std::min(t + duration, steps); ++s)
                    f.station_charging[s][l] += 1.0;
                const int depart = t + duration;
                if (depart < steps) {
                    release_at[depart].push_back(id);
                } else {
                    parked_entry[steps - 1] += 1.0;  // horizon truncation
                    occupied[l] -= 1;
                }
                if (options.record_traces && !result.traces[id].events.empty()) {
                    // complete the pending charge transition with the realized wait
                    auto& ev = result.traces[id].events.back();
                    ev.next.t = arrival_time[id] + omega + duration;
                }
                (void)omega;
            }
        }
    }

    double offline_cum = 0.0;
    double parked_cum = 0.0;
    for (int t = 0; t < steps; ++t) {
        offline_cum += offline_entry[t];
        parked_cum += parked_entry[t];
        f.offline[t] = offline_cum;
        f.parked[t] = parked_cum;
    }
    for (int l = 0; l < L; ++l) {
        std::vector<double> occ(steps, 0.0);
        for (int s = 0; s < steps; ++s) occ[s] = f.station_charging[s][l];
        f.ledgers[l].seed_occupancy(std::move(occ));
    }

    result.flows = std::move(f);
    return result;
}

SimResult simulate_agents(const MeanPolicy& policy, const ScenarioConfig& cfg,
                          int num_vehicles, std::uint64_t seed) {
    return simulate_agents(policy, cfg, SimOptions{num_vehicles, seed, true});
}

FlowComparison compare_flows(const FlowField& empirical, const FlowField& fluid) {
    if (empirical.num_zones != fluid.num_zones ||
        empirical.num_stations != fluid.num_stations ||
        empirical.battery != fluid.battery || empirical.horizon != fluid.horizon ||
        empirical.extended != fluid.extended)
        throw std::invalid_argument("compare_flows: shape mismatch");

    FlowComparison report;
    const int steps = fluid.extended + 1;
    report.idle.resize(steps);
    report.station_arrivals.resize(steps);
    report.offline.resize(steps);
    for (int t = 0; t < steps; ++t) {
        double diff_y = 0.0, norm_y = 0.0;
        for (int i = 0; i < fluid.num_zones; ++i)
            for (int b = 0; b <= fluid.battery; ++b) {
                diff_y += std::abs(empirical.y[t][i][b] - fluid.y[t][i][b]);
                norm_y += std::abs(fluid.y[t][i][b]);
            }
        report.idle[t] = diff_y / std::max(norm_y, 1.0);

        double diff_z = 0.0, norm_z = 0.0;
        for (int l = 0; l < fluid.num_stations; ++l)
            for (int b = 0; b <= fluid.battery; ++b) {
                diff_z += std::abs(empirical.z[t][l][b] - fluid.z[t][l][b]);
                norm_z += std::abs(fluid.z[t][l][b]);
            }
        report.station_arrivals[t] = diff_z / std::max(norm_z, 1.0);

        report.offline[t] = std::abs(empirical.offline[t] - fluid.offline[t]) /
                            std::max(std::abs(fluid.offline[t]), 1.0);

        report.max_idle = std::max(report.max_idle, report.idle[t]);
        report.max_station_arrivals =
            std::max(report.max_station_arrivals, report.station_arrivals[t]);
        report.max_offline = std::max(report.max_offline, report.offline[t]);
    }
    return report;
}

FlowField average_flow_fields(const std::vector<FlowField>& fields) {
    if (fields.empty())
        throw std::invalid_argument("average_flow_fields: no fields given");
    FlowField avg = fields.front();
    const double n = static_cast<double>(fields.size());
    auto add3 = [](auto& acc, const auto& other) {
        for (std::size_t a = 0; a < acc.size(); ++a)
            for (std::size_t b = 0; b < acc[a].size(); ++b)
                for (std::size_t c = 0; c < acc[a][b].size(); ++c)
                    acc[a][b][c] += other[a][b][c];
    };
    auto add2 = [](auto& acc, const auto& other) {
        for (std::size_t a = 0; a < acc.size(); ++a)
            for (std::size_t b = 0; b < acc[a].size(); ++b) acc[a][b] += other[a][b];
    };
    auto add1 = [](auto& acc, const auto& other) {
        for (std::size_t a = 0; a < acc.size(); ++a) acc[a] += other[a];
    };
    for (std::size_t i = 1; i < fields.size(); ++i) {
        const FlowField& f = fields[i];
        if (f.extended != avg.extended || f.num_zones != avg.num_zones ||
            f.num_stations != avg.num_stations || f.battery != avg.battery)
            throw std::invalid_argument("average_flow_fields: shape mismatch");
        add3(avg.x, f.x);
        add3(avg.y, f.y);
        add3(avg.z, f.z);
        add2(avg.meeting, f.meeting);
        add2(avg.station_waiting, f.station_waiting);
        add2(avg.station_charging, f.station_charging);
        add1(avg.idle_total, f.idle_total);
        add1(avg.in_service, f.in_service);
        add1(avg.to_station, f.to_station);
        add1(avg.waiting, f.waiting);
        add1(avg.charging, f.charging);
        add1(avg.offline, f.offline);
        add1(avg.parked, f.parked);
    }
    auto div3 = [n](auto& acc) {
        for (auto& a : acc)
            for (auto& b : a)
                for (auto& c : b) c /= n;
    };
    auto div2 = [n](auto& acc) {
        for (auto& a : acc)
            for (auto& b : a) b /= n;
    };
    auto div1 = [n](auto& acc) {
        for (auto& a : acc) a /= n;
    };
    div3(avg.x);
    div3(avg.y);
    div3(avg.z);
    div2(avg.meeting);
    div2(avg.station_waiting);
    div2(avg.station_charging);
    div1(avg.idle_total);
    div1(avg.in_service);
    div1(avg.to_station);
    div1(avg.waiting);
    div1(avg.charging);
    div1(avg.offline);
    div1(avg.parked);
    // queue ledgers are left as the first run's; they are diagnostics only
    return avg;
}

}  // namespace eriver
