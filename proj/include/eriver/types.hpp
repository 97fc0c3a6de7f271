#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace eriver {

inline constexpr const char* kVersion = "0.1.0";

// Where a vehicle can be. Offline is the absorbing out-of-battery location.
enum class LocKind : std::uint8_t { Zone, Station, Offline };

struct Location {
    LocKind kind = LocKind::Offline;
    int index = 0;  // zone or station index; 0 for offline

    static Location zone(int i) { return {LocKind::Zone, i}; }
    static Location station(int l) { return {LocKind::Station, l}; }
    static Location offline() { return {LocKind::Offline, 0}; }

    bool is_zone() const { return kind == LocKind::Zone; }
    bool is_station() const { return kind == LocKind::Station; }
    bool is_offline() const { return kind == LocKind::Offline; }

    friend bool operator==(const Location&, const Location&) = default;
};

// MDP state: time step, location, state of charge in step units.
// SOC is stored as 0 for the offline location.
struct State {
    int t = 0;
    Location loc;
    int soc = 0;

    static State zone(int t, int i, int b) { return {t, Location::zone(i), b}; }
    static State station(int t, int l, int b) { return {t, Location::station(l), b}; }
    static State offline(int t) { return {t, Location::offline(), 0}; }

    friend bool operator==(const State&, const State&) = default;
};

enum class ActionKind : std::uint8_t { Cruise, Charge, StayOffline };

// Cruise targets a zone, Charge targets a station, StayOffline has no target.
struct Action {
    ActionKind kind = ActionKind::StayOffline;
    int target = 0;

    static Action cruise(int zone) { return {ActionKind::Cruise, zone}; }
    static Action charge(int station) { return {ActionKind::Charge, station}; }
    static Action stay_offline() { return {ActionKind::StayOffline, 0}; }

    friend bool operator==(const Action&, const Action&) = default;
};

// One outcome of taking an action: successor state with its probability and
// the immediate reward. The successor time is the physical event time; values
// past the horizon are clamped to zero at lookup, not here.
struct TransitionEntry {
    State next;
    double prob = 0.0;
    double reward = 0.0;
};

std::string to_string(const Location& loc);
std::string to_string(const State& s);
std::string to_string(const Action& a);

}  // namespace eriver
