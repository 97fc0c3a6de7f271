#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "eriver/equilibrium.hpp"
#include "eriver/flow.hpp"
#include "eriver/monte_carlo.hpp"
#include "eriver/scenario.hpp"

namespace eriver {

// All exports are tab-separated text with one header row; doubles are written
// with enough digits to round-trip.
std::string format_double(double v);

// Writes zone_flows.tsv, station_flows.tsv, summary.tsv, and
// normalized_flows.tsv under dest. Returns the file names written.
std::vector<std::string> export_flows(const FlowField& flows, const ScenarioConfig& cfg,
                                      const std::filesystem::path& dest);

// queue_ledgers.tsv: station, t, occupancy, free
std::string export_ledgers(const FlowField& flows, const ScenarioConfig& cfg,
                           const std::filesystem::path& dest);

// gap_trace.tsv: iteration, policy gaps, value gap, conservation gap, seconds
std::string export_gap_trace(const SolveDiagnostics& diag, const std::filesystem::path& dest);

// comparison.tsv: per-step relative L1 report plus a summary row
std::string export_comparison(const FlowComparison& report, const std::filesystem::path& dest);

void save_policy(const MeanPolicy& policy, const ScenarioConfig& cfg,
                 const std::filesystem::path& file);
MeanPolicy load_policy(const std::filesystem::path& file, const ScenarioConfig& cfg);

// Everything needed to reproduce a run: the resolved scenario, solver
// settings, and the output inventory. Timestamps live only here.
struct RunManifest {
    std::string command;
    std::string builtin_name;  // empty when the scenario came from a file
    ScenarioConfig scenario;
    SolveOptions solve_options;
    int mc_vehicles = 0;
    int mc_seeds = 0;
    SolveDiagnostics diagnostics;
    std::vector<std::string> outputs;
};

void save_manifest(const RunManifest& manifest, const std::filesystem::path& file);
RunManifest load_manifest(const std::filesystem::path& file);

}  // namespace eriver
