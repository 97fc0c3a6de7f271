#include "eriver/station_queue.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eriver {

namespace {
// unadmitted mass below this is folded into the final wait
constexpr double kResidual = 1e-12;
constexpr double kCapacityTol = 1e-9;
}  // namespace

int charge_duration(int soc, const ScenarioConfig& cfg) { return cfg.charge_steps(soc); }

double WaitDistribution::total() const {
    double s = 0.0;
    for (double w : pmf) s += w;
    return s;
}

QueueLedger::QueueLedger(int station, int num_steps, double capacity)
    : station_(station),
      capacity_(capacity),
      occupancy_(static_cast<std::size_t>(std::max(num_steps, 1)), 0.0),
      baseline_(occupancy_) {
    if (capacity < 0) throw std::invalid_argument("QueueLedger: negative capacity");
}

double QueueLedger::occupancy(int step) const {
    if (step < 0 || step >= num_steps())
        throw std::out_of_range("QueueLedger::occupancy: step out of range");
    return occupancy_[step];
}

double QueueLedger::free_spots(int step) const {
    return std::max(capacity_ - occupancy(step), 0.0);
}

void QueueLedger::seed_occupancy(std::vector<double> baseline) {
    if (!cohorts_.empty())
        throw std::logic_error("QueueLedger: cannot seed after cohorts were processed");
    if (static_cast<int>(baseline.size()) != num_steps())
        throw std::invalid_argument("QueueLedger: baseline size mismatch");
    for (double v : baseline)
        if (v < -kCapacityTol || v > capacity_ + kCapacityTol)
            throw std::invalid_argument("QueueLedger: baseline outside [0, C]");
    baseline_ = std::move(baseline);
    occupancy_ = baseline_;
}

void QueueLedger::book(int start, int duration_steps, double fractional_tail, double mass) {
    const int n = num_steps();
    for (int s = start; s < start + duration_steps && s < n; ++s) occupancy_[s] += mass;
    if (fractional_tail > 0.0) {
        const int s = start + duration_steps;
        if (s < n) occupancy_[s] += mass * fractional_tail;
    }
}

std::vector<double> QueueLedger::replay_occupancy() const {
    QueueLedger replayed(station_, num_steps(), capacity_);
    replayed.occupancy_ = baseline_;
    for (const auto& cohort : cohorts_) {
        for (int omega = 0; omega < static_cast<int>(cohort.wait_pmf.size()); ++omega) {
            const double w = cohort.wait_pmf[omega];
            const int admit_step = cohort.arrival_step + omega;
            for (int b = 0; b < static_cast<int>(cohort.mass_by_soc.size()); ++b) {
                const double class_mass = cohort.mass_by_soc[b] * w;
                if (class_mass == 0.0) continue;
                if (cohort.avg_duration >= 0.0) {
                    const int whole = static_cast<int>(std::floor(cohort.avg_duration));
                    replayed.book(admit_step, whole, cohort.avg_duration - whole, class_mass);
                } else {
                    replayed.book(admit_step, cohort.charge_steps_by_soc[b], 0.0, class_mass);
                }
            }
        }
    }
    return replayed.occupancy_;
}

WaitDistribution wait_time_distribution(QueueLedger& ledger, int arrival_step,
                                        std::span<const double> mass_by_soc,
                                        const ScenarioConfig& cfg) {
    if (arrival_step < 0 || arrival_step >= ledger.num_steps())
        throw std::out_of_range("wait_time_distribution: arrival step out of range");

    double total = 0.0;
    for (double m : mass_by_soc) {
        if (m < 0) throw std::invalid_argument("wait_time_distribution: negative mass");
        total += m;
    }
    if (total == 0.0) return WaitDistribution{{1.0}};

    CohortRecord record;
    record.arrival_step = arrival_step;
    record.mass_by_soc.assign(mass_by_soc.begin(), mass_by_soc.end());
    const int classes = static_cast<int>(record.mass_by_soc.size());
    record.charge_steps_by_soc.resize(classes);
    for (int b = 0; b < classes; ++b) record.charge_steps_by_soc[b] = cfg.charge_steps(b);

    int avg_whole = 0;
    double avg_tail = 0.0;
    if (cfg.queue_avg_duration) {
        double weighted = 0.0;
        for (int b = 0; b < classes; ++b)
            weighted += record.mass_by_soc[b] * record.charge_steps_by_soc[b];
        record.avg_duration = weighted / total;
        avg_whole = static_cast<int>(std::floor(record.avg_duration));
        avg_tail = record.avg_duration - avg_whole;
    }

    WaitDistribution dist;
    const double admit_fraction = total / (total + cfg.queue_epsilon);
    double remaining = total;

    for (int omega = 0;; ++omega) {
        const int step = arrival_step + omega;
        const bool at_horizon = step == ledger.num_steps() - 1;
        const double cap = ledger.free_spots(step) * admit_fraction;

        double admitted = std::min(cap, remaining);
        bool final = at_horizon || remaining - admitted < kResidual;
        if (final) admitted = remaining;  // residual folded into the last wave

        const double w = admitted / total;
        dist.pmf.push_back(w);
        for (int b = 0; b < classes; ++b) {
            const double class_mass = record.mass_by_soc[b] * w;
            if (class_mass == 0.0) continue;
            if (cfg.queue_avg_duration)
                ledger.book(step, avg_whole, avg_tail, class_mass);
            else
                ledger.book(step, record.charge_steps_by_soc[b], 0.0, class_mass);
        }
        if (!at_horizon &&
            ledger.occupancy_[step] >
                ledger.capacity() + kCapacityTol * std::max(1.0, ledger.capacity()))
            throw std::logic_error("QueueLedger: capacity exceeded at station " +
                                   std::to_string(ledger.station()) + ", step " +
                                   std::to_string(step));
        remaining -= admitted;
        if (final) break;
    }

    record.wait_pmf = dist.pmf;
    ledger.cohorts_.push_back(std::move(record));
    return dist;
}

}  // namespace eriver
