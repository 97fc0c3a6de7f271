#include "eriver/mdp.hpp"

#include <algorithm>
#include <stdexcept>

#include "eriver/flow.hpp"

namespace eriver {

ActionSpace::ActionSpace(const ScenarioConfig& cfg)
    : num_zones_(cfg.num_zones), battery_(cfg.battery_capacity) {
    zone_actions_.resize(static_cast<std::size_t>(num_zones_) * battery_);
    for (int i = 0; i < num_zones_; ++i)
        for (int b = 1; b <= battery_; ++b) {
            auto& list = zone_actions_[i * battery_ + (b - 1)];
            for (int j : cfg.zone_neighbors[i]) list.push_back(Action::cruise(j));
            for (int l = 0; l < cfg.num_stations; ++l)
                if (b >= cfg.travel_time_station[i][l] * cfg.consumption)
                    list.push_back(Action::charge(l));
        }
    station_actions_.resize(cfg.num_stations);
    for (int l = 0; l < cfg.num_stations; ++l)
        for (int j : cfg.station_neighbors[l])
            station_actions_[l].push_back(Action::cruise(j));
    offline_only_ = {Action::stay_offline()};
}

const std::vector<Action>& ActionSpace::zone_actions(int zone, int soc) const {
    if (zone < 0 || zone >= num_zones_ || soc < 0 || soc > battery_)
        throw std::out_of_range("ActionSpace::zone_actions: invalid (zone, soc)");
    if (soc == 0) return offline_only_;
    return zone_actions_[zone * battery_ + (soc - 1)];
}

const std::vector<Action>& ActionSpace::station_actions(int station) const {
    if (station < 0 || station >= static_cast<int>(station_actions_.size()))
        throw std::out_of_range("ActionSpace::station_actions: invalid station");
    return station_actions_[station];
}

const std::vector<Action>& ActionSpace::actions(const State& s,
                                                const ScenarioConfig& cfg) const {
    if (s.t >= cfg.horizon) return none_;
    if (s.loc.is_offline()) return offline_only_;
    if (s.loc.is_zone()) return zone_actions(s.loc.index, s.soc);
    if (s.soc != cfg.battery_capacity)
        throw std::invalid_argument("station states exist only with a full battery");
    return station_actions(s.loc.index);
}

DecisionIndex::DecisionIndex(const ScenarioConfig& cfg)
    : horizon_(cfg.horizon),
      num_zones_(cfg.num_zones),
      num_stations_(cfg.num_stations),
      battery_(cfg.battery_capacity),
      per_step_(cfg.num_zones * cfg.battery_capacity + cfg.num_stations) {}

int DecisionIndex::index(int t, const Location& loc, int soc) const {
    if (t < 0 || t >= horizon_) return -1;
    if (loc.is_zone()) {
        if (loc.index < 0 || loc.index >= num_zones_ || soc < 1 || soc > battery_)
            return -1;
        return t * per_step_ + loc.index * battery_ + (soc - 1);
    }
    if (loc.is_station()) {
        if (loc.index < 0 || loc.index >= num_stations_ || soc != battery_) return -1;
        return t * per_step_ + num_zones_ * battery_ + loc.index;
    }
    return -1;
}

State DecisionIndex::state(int index) const {
    if (index < 0 || index >= num_states())
        throw std::out_of_range("DecisionIndex::state: index out of range");
    const int t = index / per_step_;
    int rem = index % per_step_;
    if (rem < num_zones_ * battery_)
        return State::zone(t, rem / battery_, rem % battery_ + 1);
    return State::station(t, rem - num_zones_ * battery_, battery_);
}

std::vector<Action> feasible_actions(const State& s, const ScenarioConfig& cfg) {
    if (s.t < 0) throw std::invalid_argument("feasible_actions: negative time");
    if (s.t >= cfg.horizon) return {};
    if (s.loc.is_offline()) return {Action::stay_offline()};
    if (s.loc.is_zone()) {
        if (s.loc.index < 0 || s.loc.index >= cfg.num_zones || s.soc < 0 ||
            s.soc > cfg.battery_capacity)
            throw std::invalid_argument("feasible_actions: invalid zone state");
        if (s.soc == 0) return {Action::stay_offline()};
        std::vector<Action> list;
        for (int j : cfg.zone_neighbors[s.loc.index]) list.push_back(Action::cruise(j));
        for (int l = 0; l < cfg.num_stations; ++l)
            if (s.soc >= cfg.travel_time_station[s.loc.index][l] * cfg.consumption)
                list.push_back(Action::charge(l));
        return list;
    }
    if (s.loc.index < 0 || s.loc.index >= cfg.num_stations ||
        s.soc != cfg.battery_capacity)
        throw std::invalid_argument("feasible_actions: invalid station state");
    std::vector<Action> list;
    for (int j : cfg.station_neighbors[s.loc.index]) list.push_back(Action::cruise(j));
    return list;
}

namespace {

bool action_feasible(const State& s, const Action& a, const ScenarioConfig& cfg) {
    const auto list = feasible_actions(s, cfg);
    return std::find(list.begin(), list.end(), a) != list.end();
}

}  // namespace

std::vector<TransitionEntry> transition_support(const State& s, const Action& a,
                                                const FlowField& flows,
                                                const ScenarioConfig& cfg) {
    if (!action_feasible(s, a, cfg))
        throw std::invalid_argument("transition_support: action " + to_string(a) +
                                    " infeasible at " + to_string(s));

    std::vector<TransitionEntry> entries;
    const int xi = cfg.consumption;
    const double kappa = cfg.offline_penalty;

    if (a.kind == ActionKind::StayOffline) {
        // From a zone with an empty battery this is the offline entry and
        // carries the one-time penalty; from offline it is the free self-loop.
        const double reward = s.loc.is_zone() ? kappa : 0.0;
        entries.push_back({State::offline(s.t + 1), 1.0, reward});
        return entries;
    }

    if (a.kind == ActionKind::Cruise) {
        const int j = a.target;
        if (s.t >= static_cast<int>(flows.meeting.size()))
            throw std::out_of_range("transition_support: flows missing step " +
                                    std::to_string(s.t));
        const double m = flows.meeting[s.t][j];
        const int soc_after_search = s.soc - xi;

        if (soc_after_search > 0)
            entries.push_back({State::zone(s.t + 1, j, soc_after_search), 1.0 - m, 0.0});
        else
            entries.push_back({State::offline(s.t + 1), 1.0 - m, kappa});

        for (int k = 0; k < cfg.num_zones; ++k) {
            const double share = cfg.od_shares[s.t][j][k];
            if (share == 0.0) continue;
            const double prob = m * share;
            const int tau = cfg.travel_time_zone[j][k];
            const int soc_arrival = soc_after_search - tau * xi;
            const double fare = cfg.fare[j][k];
            if (soc_arrival > 0) {
                entries.push_back({State::zone(s.t + 1 + tau, k, soc_arrival), prob, fare});
            } else if (soc_arrival == 0) {
                // trip completes, fare earned, then out of battery
                entries.push_back({State::offline(s.t + 1 + tau), prob, fare + kappa});
            } else {
                // matched but the trip is infeasible: the match consumes the
                // vehicle, no fare, offline after the search step
                entries.push_back({State::offline(s.t + 1), prob, kappa});
            }
        }
        return entries;
    }

    // charge(l): travel, wait per the cohort's pmf, charge to full
    const int l = a.target;
    const int tau = cfg.travel_time_station[s.loc.index][l];
    const int arrival = s.t + tau;
    const int soc_arrival = s.soc - tau * xi;
    const int duration = cfg.charge_steps(soc_arrival);
    const double reward = -cfg.charging_price[l] * duration;
    if (arrival >= static_cast<int>(flows.wait.size()))
        throw std::out_of_range("transition_support: flows missing station step " +
                                std::to_string(arrival));
    const WaitDistribution& wait = flows.wait[arrival][l];
    for (int omega = 0; omega <= wait.max_wait(); ++omega) {
        const double p = wait.mass(omega);
        if (p == 0.0) continue;
        entries.push_back({State::station(arrival + omega + duration, l,
                                          cfg.battery_capacity),
                           p, reward});
    }
    return entries;
}

}  // namespace eriver
