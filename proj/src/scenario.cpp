#include "eriver/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace eriver {

using nlohmann::json;

namespace {

constexpr double kSumTol = 1e-9;

std::string loc_name(const Location& loc) {
    if (loc.is_zone()) return "zone " + std::to_string(loc.index);
    if (loc.is_station()) return "station " + std::to_string(loc.index);
    return "offline";
}

}  // namespace

std::string to_string(const Location& loc) { return loc_name(loc); }

std::string to_string(const State& s) {
    return "(t=" + std::to_string(s.t) + ", " + loc_name(s.loc) +
           ", b=" + std::to_string(s.soc) + ")";
}

std::string to_string(const Action& a) {
    switch (a.kind) {
        case ActionKind::Cruise: return "cruise(" + std::to_string(a.target) + ")";
        case ActionKind::Charge: return "charge(" + std::to_string(a.target) + ")";
        case ActionKind::StayOffline: return "stay_offline";
    }
    return "?";
}

bool ValidationReport::ok() const {
    return std::none_of(issues.begin(), issues.end(),
                        [](const ValidationIssue& i) { return i.error; });
}

std::vector<std::string> ValidationReport::errors() const {
    std::vector<std::string> out;
    for (const auto& i : issues)
        if (i.error) out.push_back(i.message);
    return out;
}

std::vector<std::string> ValidationReport::warnings() const {
    std::vector<std::string> out;
    for (const auto& i : issues)
        if (!i.error) out.push_back(i.message);
    return out;
}

ScenarioError::ScenarioError(const std::string& what, std::vector<std::string> violations)
    : std::runtime_error(violations.empty()
                             ? what
                             : what + ": " + [&violations] {
                                   std::string joined;
                                   for (const auto& v : violations) {
                                       if (!joined.empty()) joined += "; ";
                                       joined += v;
                                   }
                                   return joined;
                               }()),
      violations_(std::move(violations)) {}

double ScenarioConfig::demand_at(int t, int i) const {
    if (t < 0 || t >= horizon)
        throw std::out_of_range("demand_at: step " + std::to_string(t) +
                                " outside [0, " + std::to_string(horizon) + ")");
    if (i < 0 || i >= num_zones)
        throw std::out_of_range("demand_at: zone " + std::to_string(i) + " invalid");
    return demand[t][i];
}

const MatchingParams& ScenarioConfig::matching_at(int t, int i) const {
    if (t < 0 || t >= horizon || i < 0 || i >= num_zones)
        throw std::out_of_range("matching_at: invalid (t, zone)");
    if (!matching_table_.empty()) return matching_table_[t * num_zones + i];
    return matching_default;
}

int ScenarioConfig::charge_steps(int soc) const {
    if (soc < 0 || soc > battery_capacity)
        throw std::out_of_range("charge_steps: SOC " + std::to_string(soc) +
                                " outside [0, " + std::to_string(battery_capacity) + "]");
    const int deficit = battery_capacity - soc;
    return (deficit + charge_rate - 1) / charge_rate;
}

int ScenarioConfig::max_travel_zone() const {
    int m = 1;
    for (const auto& row : travel_time_zone)
        for (int v : row) m = std::max(m, v);
    return m;
}

int ScenarioConfig::max_travel_station() const {
    int m = 1;
    for (const auto& row : travel_time_station)
        for (int v : row) m = std::max(m, v);
    return m;
}

int ScenarioConfig::extended_horizon() const {
    // Worst-case queue backlog: the whole fleet stacked at one station,
    // drained at C per max-charge-duration wave, plus the day itself.
    const double cap = std::max(station_capacity, 1e-9);
    const int tau_hat = std::max(max_charge_steps(), 1);
    const int backlog = static_cast<int>(std::ceil(std::max(fleet_size, 1.0) / cap)) * tau_hat;
    return horizon + max_travel_zone() + 1 + backlog + horizon + tau_hat;
}

std::string ScenarioConfig::station_label(int l) const {
    if (l >= 0 && l < static_cast<int>(station_labels.size()) && !station_labels[l].empty())
        return station_labels[l];
    return "S" + std::to_string(l);
}

void ScenarioConfig::finalize() {
    matching_table_.assign(static_cast<std::size_t>(std::max(horizon, 0)) *
                               static_cast<std::size_t>(std::max(num_zones, 0)),
                           matching_default);
    for (const auto& ov : matching_overrides) {
        if (ov.t >= 0 && ov.t < horizon && ov.zone >= 0 && ov.zone < num_zones)
            matching_table_[ov.t * num_zones + ov.zone] = ov.params;
    }
}

// ---------------------------------------------------------------------------
// validation
// ---------------------------------------------------------------------------

ValidationReport validate_scenario(const ScenarioConfig& cfg) {
    ValidationReport report;
    auto error = [&report](std::string msg) {
        report.issues.push_back({true, std::move(msg)});
    };
    auto warn = [&report](std::string msg) {
        report.issues.push_back({false, std::move(msg)});
    };

    const int N = cfg.num_zones;
    const int L = cfg.num_stations;
    const int T = cfg.horizon;

    if (N <= 0) error("num_zones must be positive");
    if (L < 0) error("num_stations must be nonnegative");
    if (T < 1) error("horizon T must be at least 1");
    if (!(cfg.fleet_size > 0)) error("fleet_size M must be positive");
    if (cfg.battery_capacity < 1) error("battery_capacity B must be at least 1");
    if (cfg.charge_rate < 1) error("charge_rate e must be at least 1");
    if (cfg.consumption < 1) error("consumption xi must be at least 1");
    if (!(cfg.station_capacity > 0) && L > 0) error("station_capacity C must be positive");
    if (!(cfg.queue_epsilon > 0)) error("queue epsilon must be positive");
    if (N <= 0 || T < 1) return report;  // shape checks below need valid sizes

    auto shape2 = [&](const auto& m, int rows, int cols, const std::string& name) {
        if (static_cast<int>(m.size()) != rows) {
            error(name + " must have " + std::to_string(rows) + " rows");
            return false;
        }
        for (const auto& row : m)
            if (static_cast<int>(row.size()) != cols) {
                error(name + " rows must have " + std::to_string(cols) + " entries");
                return false;
            }
        return true;
    };

    bool shapes_ok = true;
    if (static_cast<int>(cfg.zone_neighbors.size()) != N) {
        error("zone_neighbors must list every zone");
        shapes_ok = false;
    }
    if (static_cast<int>(cfg.station_neighbors.size()) != L) {
        error("station_neighbors must list every station");
        shapes_ok = false;
    }
    if (static_cast<int>(cfg.boundary_stations.size()) != N) {
        error("boundary_stations must list every zone");
        shapes_ok = false;
    }
    shapes_ok &= shape2(cfg.travel_time_zone, N, N, "travel_time_zone");
    if (L > 0) shapes_ok &= shape2(cfg.travel_time_station, N, L, "travel_time_station");
    shapes_ok &= shape2(cfg.fare, N, N, "fare");
    if (static_cast<int>(cfg.charging_price.size()) != L) {
        error("charging_price must have one entry per station");
        shapes_ok = false;
    }
    shapes_ok &= shape2(cfg.demand, T, N, "demand");
    if (static_cast<int>(cfg.od_shares.size()) != T) {
        error("od_shares must have one row block per step");
        shapes_ok = false;
    } else {
        for (const auto& block : cfg.od_shares)
            if (!shape2(block, N, N, "od_shares[t]")) {
                shapes_ok = false;
                break;
            }
    }
    if (!shapes_ok) return report;

    for (int i = 0; i < N; ++i) {
        const auto& nb = cfg.zone_neighbors[i];
        if (std::find(nb.begin(), nb.end(), i) == nb.end())
            error("zone " + std::to_string(i) + " must be its own neighbor");
        for (int j : nb) {
            if (j < 0 || j >= N) {
                error("zone_neighbors[" + std::to_string(i) + "] has invalid zone " +
                      std::to_string(j));
                continue;
            }
            const auto& back = cfg.zone_neighbors[j];
            if (std::find(back.begin(), back.end(), i) == back.end())
                error("zone adjacency not symmetric between " + std::to_string(i) +
                      " and " + std::to_string(j));
        }
    }

    for (int l = 0; l < L; ++l)
        for (int i : cfg.station_neighbors[l])
            if (i < 0 || i >= N)
                error("station_neighbors[" + std::to_string(l) + "] has invalid zone " +
                      std::to_string(i));
    for (int i = 0; i < N; ++i)
        for (int l : cfg.boundary_stations[i])
            if (l < 0 || l >= L)
                error("boundary_stations[" + std::to_string(i) + "] has invalid station " +
                      std::to_string(l));

    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j)
            if (cfg.travel_time_zone[i][j] < 1)
                error("travel_time_zone[" + std::to_string(i) + "][" + std::to_string(j) +
                      "] must be at least 1");
        for (int l = 0; l < L; ++l)
            if (cfg.travel_time_station[i][l] < 1)
                error("travel_time_station[" + std::to_string(i) + "][" +
                      std::to_string(l) + "] must be at least 1");
    }

    // reachability consistency; the flow loader treats station_neighbors as
    // authoritative if violated, so these are warnings
    for (int i = 0; i < N; ++i)
        for (int l : cfg.boundary_stations[i]) {
            if (l < 0 || l >= L) continue;
            if (cfg.travel_time_station[i][l] != 1)
                warn("station " + std::to_string(l) + " on the boundary of zone " +
                     std::to_string(i) + " has travel time " +
                     std::to_string(cfg.travel_time_station[i][l]) + " (expected 1)");
            const auto& snb = cfg.station_neighbors[l];
            if (std::find(snb.begin(), snb.end(), i) == snb.end())
                warn("zone " + std::to_string(i) + " lists station " + std::to_string(l) +
                     " as boundary but is not in its neighbor set");
        }
    for (int l = 0; l < L; ++l)
        for (int i : cfg.station_neighbors[l]) {
            if (i < 0 || i >= N) continue;
            const auto& bs = cfg.boundary_stations[i];
            if (std::find(bs.begin(), bs.end(), l) == bs.end())
                warn("station " + std::to_string(l) + " serves zone " + std::to_string(i) +
                     " but is not on its boundary list");
        }

    for (int t = 0; t < T; ++t)
        for (int i = 0; i < N; ++i) {
            if (cfg.demand[t][i] < 0)
                error("demand[" + std::to_string(t) + "][" + std::to_string(i) +
                      "] is negative");
            double sum = 0.0;
            bool negative = false;
            for (int j = 0; j < N; ++j) {
                sum += cfg.od_shares[t][i][j];
                negative |= cfg.od_shares[t][i][j] < 0;
            }
            if (negative)
                error("od_shares[" + std::to_string(t) + "][" + std::to_string(i) +
                      "] has negative entries");
            if (std::abs(sum - 1.0) > kSumTol)
                error("od_shares[t=" + std::to_string(t) + "][i=" + std::to_string(i) +
                      "] sum to " + std::to_string(sum) + ", expected 1");
        }

    auto check_matching = [&](const MatchingParams& p, const std::string& where) {
        if (!(p.theta1 > 0) || !(p.theta2 > 0) || !(p.threshold > 0))
            error("matching parameters must be positive (" + where + ")");
        else if (std::abs(p.theta2 - p.theta1 * p.threshold) > kSumTol)
            warn("matching branches are discontinuous at the threshold (" + where +
                 "): theta2 != theta1 * threshold");
    };
    check_matching(cfg.matching_default, "default");
    for (const auto& ov : cfg.matching_overrides) {
        if (ov.t < 0 || ov.t >= T || ov.zone < 0 || ov.zone >= N)
            error("matching override outside the (t, zone) grid");
        check_matching(ov.params, "override t=" + std::to_string(ov.t) +
                                      " zone=" + std::to_string(ov.zone));
    }

    if (cfg.offline_penalty > 0)
        warn("offline_penalty is positive; it is meant to be a penalty");

    double rho_sum = 0.0;
    for (const auto& atom : cfg.initial_distribution) {
        rho_sum += atom.probability;
        if (atom.probability < 0) error("initial_distribution has a negative probability");
        if (atom.soc < 0 || atom.soc > cfg.battery_capacity)
            error("initial_distribution SOC " + std::to_string(atom.soc) +
                  " outside [0, B]");
        if (atom.loc.is_zone() && (atom.loc.index < 0 || atom.loc.index >= N))
            error("initial_distribution references invalid zone " +
                  std::to_string(atom.loc.index));
        if (atom.loc.is_station()) {
            if (atom.loc.index < 0 || atom.loc.index >= L)
                error("initial_distribution references invalid station " +
                      std::to_string(atom.loc.index));
            else if (atom.soc != cfg.battery_capacity)
                error("initial mass at a station must have a full battery");
        }
        if (atom.loc.is_offline()) error("initial_distribution cannot place mass offline");
    }
    if (cfg.initial_distribution.empty())
        error("initial_distribution is empty");
    else if (std::abs(rho_sum - 1.0) > kSumTol)
        error("initial_distribution sums to " + std::to_string(rho_sum) + ", expected 1");

    return report;
}

void require_valid(const ScenarioConfig& cfg) {
    const auto report = validate_scenario(cfg);
    if (!report.ok()) throw ScenarioError("scenario validation failed", report.errors());
}

// ---------------------------------------------------------------------------
// benchmark builder
// ---------------------------------------------------------------------------

DemandProfile demand_profile_from_string(const std::string& name) {
    if (name == "uniform") return DemandProfile::Uniform;
    if (name == "peak_offpeak") return DemandProfile::PeakOffpeak;
    if (name == "central_peripheral") return DemandProfile::CentralPeripheral;
    throw ScenarioError("unknown builtin demand profile: " + name);
}

std::string to_string(DemandProfile profile) {
    switch (profile) {
        case DemandProfile::Uniform: return "uniform";
        case DemandProfile::PeakOffpeak: return "peak_offpeak";
        case DemandProfile::CentralPeripheral: return "central_peripheral";
    }
    return "?";
}

ScenarioConfig build_stylized_scenario(DemandProfile profile) {
    ScenarioConfig cfg;
    const int N = 7;   // zones 0..5 on a ring around central zone 6
    const int L = 6;   // stations A..F
    const int T = 12;
    cfg.num_zones = N;
    cfg.num_stations = L;
    cfg.horizon = T;
    cfg.step_length_hours = 0.25;
    cfg.station_capacity = 20.0;
    cfg.fleet_size = 500.0;
    cfg.battery_capacity = 4;
    cfg.charge_rate = 3;
    cfg.consumption = 1;
    cfg.offline_penalty = -10.0;
    cfg.charging_price.assign(L, 0.5);
    cfg.station_labels = {"A", "B", "C", "D", "E", "F"};

    cfg.zone_neighbors.assign(N, {});
    for (int i = 0; i < 6; ++i) {
        cfg.zone_neighbors[i] = {i, (i + 1) % 6, (i + 5) % 6, 6};
        std::sort(cfg.zone_neighbors[i].begin(), cfg.zone_neighbors[i].end());
    }
    cfg.zone_neighbors[6] = {0, 1, 2, 3, 4, 5, 6};

    // Stations alternate outer/inner around the ring: outer stations sit on a
    // ring edge, inner ones on a peripheral-center edge.
    //   A = {0,1}  B = {1,6}  C = {2,3}  D = {3,6}  E = {4,5}  F = {5,6}
    cfg.station_neighbors = {{0, 1}, {1, 6}, {2, 3}, {3, 6}, {4, 5}, {5, 6}};
    cfg.boundary_stations.assign(N, {});
    for (int l = 0; l < L; ++l)
        for (int i : cfg.station_neighbors[l]) cfg.boundary_stations[i].push_back(l);

    cfg.travel_time_zone.assign(N, std::vector<int>(N, 2));
    for (int i = 0; i < N; ++i)
        for (int j : cfg.zone_neighbors[i]) cfg.travel_time_zone[i][j] = 1;

    cfg.travel_time_station.assign(N, std::vector<int>(L, 3));
    for (int i = 0; i < N; ++i)
        for (int l = 0; l < L; ++l) {
            const auto& bs = cfg.boundary_stations[i];
            if (std::find(bs.begin(), bs.end(), l) != bs.end()) {
                cfg.travel_time_station[i][l] = 1;
                continue;
            }
            for (int j : cfg.zone_neighbors[i]) {
                if (j == i) continue;
                const auto& jbs = cfg.boundary_stations[j];
                if (std::find(jbs.begin(), jbs.end(), l) != jbs.end()) {
                    cfg.travel_time_station[i][l] = 2;
                    break;
                }
            }
        }

    cfg.fare.assign(N, std::vector<double>(N, 2.0));
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            if (cfg.travel_time_zone[i][j] == 1) cfg.fare[i][j] = 1.0;

    cfg.demand.assign(T, std::vector<double>(N, 0.0));
    switch (profile) {
        case DemandProfile::Uniform:
            for (auto& row : cfg.demand) row.assign(N, 20.0);
            break;
        case DemandProfile::CentralPeripheral:
            for (auto& row : cfg.demand) {
                row.assign(N, 15.0);
                row[6] = 40.0;
            }
            break;
        case DemandProfile::PeakOffpeak: {
            // Two-peak stand-in profile; a configuration default, overridable
            // in scenario files.
            const double peaks[12] = {10, 20, 40, 40, 20, 10, 10, 20, 40, 40, 20, 10};
            for (int t = 0; t < T; ++t) cfg.demand[t].assign(N, peaks[t]);
            break;
        }
    }

    cfg.od_shares.assign(
        T, std::vector<std::vector<double>>(N, std::vector<double>(N, 1.0 / N)));

    cfg.matching_default = MatchingParams{2.0, 2.0, 1.0};
    cfg.queue_epsilon = 1e-6;

    for (int i = 0; i < N; ++i)
        cfg.initial_distribution.push_back(
            {Location::zone(i), cfg.battery_capacity, 1.0 / N});

    cfg.finalize();
    return cfg;
}

// ---------------------------------------------------------------------------
// JSON (de)serialization
// ---------------------------------------------------------------------------

namespace {

json location_to_json(const Location& loc) {
    json j;
    j["kind"] = loc.is_zone() ? "zone" : (loc.is_station() ? "station" : "offline");
    j["index"] = loc.index;
    return j;
}

Location location_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const int index = j.value("index", 0);
    if (kind == "zone") return Location::zone(index);
    if (kind == "station") return Location::station(index);
    if (kind == "offline") return Location::offline();
    throw ScenarioError("unknown location kind: " + kind);
}

// demand may be a scalar (constant in t and i), a per-zone row (constant in
// t), or the full [t][i] table
std::vector<std::vector<double>> expand_demand(const json& j, int T, int N) {
    std::vector<std::vector<double>> out(T, std::vector<double>(N, 0.0));
    if (j.is_number()) {
        for (auto& row : out) row.assign(N, j.get<double>());
        return out;
    }
    if (!j.is_array()) throw ScenarioError("demand.passengers must be a number or array");
    if (!j.empty() && j.front().is_number()) {
        auto row = j.get<std::vector<double>>();
        if (static_cast<int>(row.size()) != N)
            throw ScenarioError("demand row must have one entry per zone");
        for (auto& r : out) r = row;
        return out;
    }
    return j.get<std::vector<std::vector<double>>>();
}

std::vector<std::vector<std::vector<double>>> expand_od(const json& j, int T, int N) {
    if (j.is_string() && j.get<std::string>() == "uniform") {
        return std::vector<std::vector<std::vector<double>>>(
            T, std::vector<std::vector<double>>(N, std::vector<double>(N, 1.0 / N)));
    }
    if (!j.is_array()) throw ScenarioError("demand.od_shares must be an array or \"uniform\"");
    // full [t][i][j] vs a single [i][j] matrix broadcast over t
    if (!j.empty() && !j.front().empty() && j.front().front().is_number()) {
        auto mat = j.get<std::vector<std::vector<double>>>();
        return std::vector<std::vector<std::vector<double>>>(T, mat);
    }
    return j.get<std::vector<std::vector<std::vector<double>>>>();
}

}  // namespace

ScenarioConfig load_scenario_string(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ScenarioError(std::string("scenario parse failure: ") + e.what());
    }

    ScenarioConfig cfg;
    try {
        const json& net = doc.at("network");
        cfg.num_zones = net.at("num_zones").get<int>();
        cfg.num_stations = net.at("num_stations").get<int>();
        cfg.horizon = net.at("horizon").get<int>();
        cfg.step_length_hours = net.value("step_length_hours", 0.25);
        cfg.station_capacity = net.at("station_capacity").get<double>();
        cfg.zone_neighbors = net.at("zone_neighbors").get<std::vector<std::vector<int>>>();
        cfg.station_neighbors =
            net.at("station_neighbors").get<std::vector<std::vector<int>>>();
        if (net.contains("boundary_stations")) {
            cfg.boundary_stations =
                net.at("boundary_stations").get<std::vector<std::vector<int>>>();
        } else {
            cfg.boundary_stations.assign(cfg.num_zones, {});
            for (int l = 0; l < static_cast<int>(cfg.station_neighbors.size()); ++l)
                for (int i : cfg.station_neighbors[l])
                    if (i >= 0 && i < cfg.num_zones) cfg.boundary_stations[i].push_back(l);
        }
        cfg.travel_time_zone =
            net.at("travel_time_zone").get<std::vector<std::vector<int>>>();
        cfg.travel_time_station =
            net.at("travel_time_station").get<std::vector<std::vector<int>>>();
        if (net.contains("station_labels"))
            cfg.station_labels = net.at("station_labels").get<std::vector<std::string>>();

        const json& fleet = doc.at("fleet");
        cfg.fleet_size = fleet.at("size").get<double>();
        cfg.battery_capacity = fleet.at("battery_capacity").get<int>();
        cfg.charge_rate = fleet.at("charge_rate").get<int>();
        cfg.consumption = fleet.value("consumption", 1);

        const json& eco = doc.at("economics");
        cfg.fare = eco.at("fare").get<std::vector<std::vector<double>>>();
        if (eco.at("charging_price").is_number())
            cfg.charging_price.assign(cfg.num_stations, eco.at("charging_price").get<double>());
        else
            cfg.charging_price = eco.at("charging_price").get<std::vector<double>>();
        cfg.offline_penalty = eco.at("offline_penalty").get<double>();

        const json& dem = doc.at("demand");
        cfg.demand = expand_demand(dem.at("passengers"), cfg.horizon, cfg.num_zones);
        cfg.od_shares = expand_od(dem.at("od_shares"), cfg.horizon, cfg.num_zones);

        const json& match = doc.at("matching");
        cfg.matching_default.theta1 = match.at("theta1").get<double>();
        cfg.matching_default.theta2 = match.at("theta2").get<double>();
        cfg.matching_default.threshold = match.at("threshold").get<double>();
        if (match.contains("overrides"))
            for (const json& ov : match.at("overrides")) {
                MatchingOverride o;
                o.t = ov.at("t").get<int>();
                o.zone = ov.at("zone").get<int>();
                o.params.theta1 = ov.value("theta1", cfg.matching_default.theta1);
                o.params.theta2 = ov.value("theta2", cfg.matching_default.theta2);
                o.params.threshold = ov.value("threshold", cfg.matching_default.threshold);
                cfg.matching_overrides.push_back(o);
            }

        if (doc.contains("queue")) {
            cfg.queue_epsilon = doc["queue"].value("epsilon", 1e-6);
            cfg.queue_avg_duration = doc["queue"].value("avg_duration", false);
        }

        for (const json& atom : doc.at("initial_distribution")) {
            InitialMass m;
            m.loc = location_from_json(atom);
            m.soc = atom.at("soc").get<int>();
            m.probability = atom.at("probability").get<double>();
            cfg.initial_distribution.push_back(m);
        }
    } catch (const json::exception& e) {
        throw ScenarioError(std::string("scenario parse failure: ") + e.what());
    }

    cfg.finalize();
    require_valid(cfg);
    return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ScenarioError("cannot open scenario file: " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_scenario_string(buf.str());
}

std::string scenario_to_string(const ScenarioConfig& cfg) {
    json doc;
    json& net = doc["network"];
    net["num_zones"] = cfg.num_zones;
    net["num_stations"] = cfg.num_stations;
    net["horizon"] = cfg.horizon;
    net["step_length_hours"] = cfg.step_length_hours;
    net["station_capacity"] = cfg.station_capacity;
    net["zone_neighbors"] = cfg.zone_neighbors;
    net["station_neighbors"] = cfg.station_neighbors;
    net["boundary_stations"] = cfg.boundary_stations;
    net["travel_time_zone"] = cfg.travel_time_zone;
    net["travel_time_station"] = cfg.travel_time_station;
    if (!cfg.station_labels.empty()) net["station_labels"] = cfg.station_labels;

    json& fleet = doc["fleet"];
    fleet["size"] = cfg.fleet_size;
    fleet["battery_capacity"] = cfg.battery_capacity;
    fleet["charge_rate"] = cfg.charge_rate;
    fleet["consumption"] = cfg.consumption;

    json& eco = doc["economics"];
    eco["fare"] = cfg.fare;
    eco["charging_price"] = cfg.charging_price;
    eco["offline_penalty"] = cfg.offline_penalty;

    json& dem = doc["demand"];
    dem["passengers"] = cfg.demand;
    dem["od_shares"] = cfg.od_shares;

    json& match = doc["matching"];
    match["theta1"] = cfg.matching_default.theta1;
    match["theta2"] = cfg.matching_default.theta2;
    match["threshold"] = cfg.matching_default.threshold;
    if (!cfg.matching_overrides.empty()) {
        json ovs = json::array();
        for (const auto& ov : cfg.matching_overrides) {
            json o;
            o["t"] = ov.t;
            o["zone"] = ov.zone;
            o["theta1"] = ov.params.theta1;
            o["theta2"] = ov.params.theta2;
            o["threshold"] = ov.params.threshold;
            ovs.push_back(o);
        }
        match["overrides"] = ovs;
    }

    json& queue = doc["queue"];
    queue["epsilon"] = cfg.queue_epsilon;
    queue["avg_duration"] = cfg.queue_avg_duration;

    json atoms = json::array();
    for (const auto& atom : cfg.initial_distribution) {
        json a = location_to_json(atom.loc);
        a["soc"] = atom.soc;
        a["probability"] = atom.probability;
        atoms.push_back(a);
    }
    doc["initial_distribution"] = atoms;

    return doc.dump(2) + "\n";
}

void save_scenario(const ScenarioConfig& cfg, const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw ScenarioError("cannot write scenario file: " + file.string());
    out << scenario_to_string(cfg);
}

}  // namespace eriver
