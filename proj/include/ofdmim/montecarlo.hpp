#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ofdmim/config.hpp"
#include "ofdmim/mapping.hpp"

namespace ofdmim {

enum class Metric { outage, capacity, ser, rates };

std::string_view to_string(Metric m);
Metric metric_from_string(std::string_view name);

// Monte Carlo point estimate with its standard error.
struct MetricEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long long trials = 0;
    long long events = 0; // error/outage count for Bernoulli metrics
    Metric metric = Metric::outage;
    Methodology methodology = Methodology::decentralized;
    SystemConfig config;
};

struct RunOptions {
    long long trials = 0;        // total trials (fixed mode)
    std::uint64_t seed = 0;
    int workers = 0;             // 0: IMRELAY_WORKERS env or hardware count
    bool stratified_k = false;   // cycle k deterministically instead of drawing it
    long long min_events = -1;   // >=0: stop once this many events are in (Bernoulli
                                 // metrics), `trials` then acts as the cap
};

int resolve_workers(int requested);

// Full-protocol trial engines. Each trial draws fresh channels, applies the
// methodology's scheme selection and a uniformly drawn pattern index.
MetricEstimate run_outage(const SystemConfig& config, Methodology methodology, long long trials,
                          std::uint64_t seed);
MetricEstimate run_capacity(const SystemConfig& config, Methodology methodology, long long trials,
                            std::uint64_t seed);
MetricEstimate run_ser(const SystemConfig& config, Methodology methodology, long long trials,
                       std::uint64_t seed);

MetricEstimate run_metric(const SystemConfig& config, Metric metric, Methodology methodology,
                          const RunOptions& options);

// Per-trial trace for inspection and protocol tests.
struct TrialRecord {
    int pattern_k = 1;
    MappingScheme scheme_hop1;
    MappingScheme scheme_hop2;
    bool used_complementary = false;
    int active_subcarriers = 0; // 1 in complementary mode
    bool outage_hop1 = false;
    bool outage_hop2 = false;
    double capacity = 0.0;
};

std::vector<TrialRecord> record_trials(const SystemConfig& config, Methodology methodology,
                                       long long trials, std::uint64_t seed);

// One curve point: Monte Carlo estimate plus closed-form companions where
// closed forms exist (adaptive methodologies).
struct SweepRow {
    double snr_db = 0.0;
    Methodology methodology = Methodology::decentralized;
    Metric metric = Metric::outage;
    MetricEstimate mc;
    std::optional<double> analytic;
    std::optional<double> asymptotic;    // outage only
    bool analytic_saturated = false;     // SER union bound clipped at 1
};

std::vector<SweepRow> sweep(const SystemConfig& base, Metric metric,
                            const std::vector<Methodology>& methodologies,
                            const std::vector<double>& snr_db_grid, long long trials,
                            std::uint64_t seed, int workers = 0);

} // namespace ofdmim
