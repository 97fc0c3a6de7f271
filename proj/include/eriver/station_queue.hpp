#pragma once

#include <span>
#include <vector>

#include "eriver/scenario.hpp"

namespace eriver {

// Steps a vehicle starting to charge at SOC b needs before it leaves full:
// ceil((B - b) / e). Throws std::out_of_range for b outside [0, B].
int charge_duration(int soc, const ScenarioConfig& cfg);

// Probability mass function over waiting steps for one arrival cohort.
struct WaitDistribution {
    std::vector<double> pmf;  // pmf[omega], trimmed after the last support point

    double mass(int omega) const {
        return omega >= 0 && omega < static_cast<int>(pmf.size()) ? pmf[omega] : 0.0;
    }
    int max_wait() const { return static_cast<int>(pmf.size()) - 1; }
    double total() const;
};

// One processed arrival cohort, kept so the occupancy curve can be replayed.
struct CohortRecord {
    int arrival_step = 0;
    std::vector<double> mass_by_soc;  // arrival SOC classes 0..B
    std::vector<double> wait_pmf;
    std::vector<int> charge_steps_by_soc;
    double avg_duration = -1.0;  // >= 0 only under the average-duration switch
};

// Fluid occupancy ledger of one charging station over the extended horizon.
// Mutated only by wait_time_distribution, in arrival-time order.
class QueueLedger {
public:
    QueueLedger(int station, int num_steps, double capacity);

    int station() const { return station_; }
    double capacity() const { return capacity_; }
    int num_steps() const { return static_cast<int>(occupancy_.size()); }

    double occupancy(int step) const;
    double free_spots(int step) const;  // zeta(step) = C - occupancy(step)
    const std::vector<double>& occupancy_curve() const { return occupancy_; }

    // Pre-existing load, e.g. the fixed-free-spots fixtures of the continuity
    // probes. Rejects baselines outside [0, C].
    void seed_occupancy(std::vector<double> baseline);

    const std::vector<CohortRecord>& cohorts() const { return cohorts_; }

    // Recomputes occupancy from the baseline plus the cohort records. Equal
    // to occupancy_curve() bit for bit when bookings are per SOC class.
    std::vector<double> replay_occupancy() const;

private:
    friend WaitDistribution wait_time_distribution(QueueLedger&, int,
                                                   std::span<const double>,
                                                   const ScenarioConfig&);
    void book(int start, int duration_steps, double fractional_tail, double mass);

    int station_ = 0;
    double capacity_ = 0.0;
    std::vector<double> occupancy_;
    std::vector<double> baseline_;
    std::vector<CohortRecord> cohorts_;
};

// Waiting-time pmf for the cohort of mass_by_soc[b] vehicles arriving at
// `arrival_step` with SOC b, against the station's current ledger.
//
//   w(omega) = min( zeta(t+omega) / (z + eps),  max(0, 1 - sum_{w' < omega} w(w')) )
//
// computed sequentially in omega; each admitted wave is booked into the
// ledger before the next omega is evaluated (per SOC class for exactly
// charge_duration(b) steps, or for the cohort-average duration when
// cfg.queue_avg_duration is set). Iteration stops when the unadmitted mass
// drops below 1e-12 or the ledger horizon is reached; any residual goes into
// the final omega so the pmf always sums to one. A zero-mass cohort yields
// the degenerate pmf {1} and leaves the ledger untouched.
WaitDistribution wait_time_distribution(QueueLedger& ledger, int arrival_step,
                                        std::span<const double> mass_by_soc,
                                        const ScenarioConfig& cfg);

}  // namespace eriver
