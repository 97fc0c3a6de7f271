#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "eriver/types.hpp"

namespace eriver {

// Parameters of the piecewise meeting-probability curve. theta1 drives the
// oversupplied branch (ratio above threshold), theta2 the undersupplied one.
struct MatchingParams {
    double theta1 = 2.0;
    double theta2 = 2.0;
    double threshold = 1.0;

    bool continuous() const { return theta2 == theta1 * threshold; }
    friend bool operator==(const MatchingParams&, const MatchingParams&) = default;
};

// Per-(t, zone) override of the matching parameters.
struct MatchingOverride {
    int t = 0;
    int zone = 0;
    MatchingParams params;
    friend bool operator==(const MatchingOverride&, const MatchingOverride&) = default;
};

// One support atom of the initial state distribution at t = 0.
struct InitialMass {
    Location loc;
    int soc = 0;
    double probability = 0.0;
    friend bool operator==(const InitialMass&, const InitialMass&) = default;
};

struct ValidationIssue {
    bool error = true;  // false -> warning
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;

    bool ok() const;
    std::vector<std::string> errors() const;
    std::vector<std::string> warnings() const;
};

class ScenarioError : public std::runtime_error {
public:
    explicit ScenarioError(const std::string& what,
                           std::vector<std::string> violations = {});
    const std::vector<std::string>& violations() const { return violations_; }

private:
    std::vector<std::string> violations_;
};

// Complete market description. Immutable by convention after construction;
// every solver component takes it by const reference.
struct ScenarioConfig {
    // network
    int num_zones = 0;
    int num_stations = 0;
    int horizon = 0;                  // T, number of decision steps
    double step_length_hours = 0.25;  // metadata only, never used in math
    double station_capacity = 0.0;    // C, spots per station (homogeneous)
    std::vector<std::vector<int>> zone_neighbors;      // per zone, includes self
    std::vector<std::vector<int>> station_neighbors;   // per station: zones served on departure
    std::vector<std::vector<int>> boundary_stations;   // per zone: stations on its boundary
    std::vector<std::vector<int>> travel_time_zone;    // [i][j], steps
    std::vector<std::vector<int>> travel_time_station; // [i][l], steps
    std::vector<std::string> station_labels;

    // fleet
    double fleet_size = 0.0;   // M, fluid mass
    int battery_capacity = 0;  // B, SOC units
    int charge_rate = 1;       // e, SOC units gained per charging step
    int consumption = 1;       // xi, SOC units burned per driving step

    // economics
    std::vector<std::vector<double>> fare;  // [i][j]
    std::vector<double> charging_price;     // per station, per charging step
    double offline_penalty = 0.0;           // kappa, negative

    // demand
    std::vector<std::vector<double>> demand;                  // [t][i]
    std::vector<std::vector<std::vector<double>>> od_shares;  // [t][i][j]

    // matching
    MatchingParams matching_default;
    std::vector<MatchingOverride> matching_overrides;

    // queue
    double queue_epsilon = 1e-6;
    bool queue_avg_duration = false;

    // initial distribution over states at t = 0
    std::vector<InitialMass> initial_distribution;

    // -- accessors -----------------------------------------------------

    // Passenger arrivals in zone i at step t. Throws std::out_of_range for
    // t outside [0, T) or an invalid zone.
    double demand_at(int t, int i) const;

    const MatchingParams& matching_at(int t, int i) const;

    // Steps needed to fill from SOC b: ceil((B - b) / e).
    int charge_steps(int soc) const;

    int max_travel_zone() const;
    int max_travel_station() const;
    int max_charge_steps() const { return charge_steps(0); }

    // Last step index of the extended bookkeeping horizon: generous enough
    // that trips, queues, and charges scheduled before T resolve without
    // clamping.
    int extended_horizon() const;

    std::string station_label(int l) const;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;

    // Rebuilds the materialized per-(t, zone) matching table from the default
    // and overrides. Called by the loaders and builders; call it again after
    // editing matching fields by hand.
    void finalize();

private:
    std::vector<MatchingParams> matching_table_;  // [t * N + i]
};

ValidationReport validate_scenario(const ScenarioConfig& cfg);

// Throws ScenarioError listing every violated invariant.
void require_valid(const ScenarioConfig& cfg);

enum class DemandProfile { Uniform, PeakOffpeak, CentralPeripheral };

DemandProfile demand_profile_from_string(const std::string& name);
std::string to_string(DemandProfile profile);

// The seven-zone / six-station benchmark market: central zone 6 adjacent to
// all peripheral zones 0..5, peripheral zones forming a ring, stations A..F
// alternating outer (between two peripheral zones) and inner (between a
// peripheral zone and the center), fleet of 500 with battery 4.
ScenarioConfig build_stylized_scenario(DemandProfile profile);

ScenarioConfig load_scenario(const std::filesystem::path& file);
ScenarioConfig load_scenario_string(const std::string& text);
std::string scenario_to_string(const ScenarioConfig& cfg);
void save_scenario(const ScenarioConfig& cfg, const std::filesystem::path& file);

}  // namespace eriver
