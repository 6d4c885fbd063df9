#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ofdmim/config.hpp"
#include "ofdmim/montecarlo.hpp"

namespace ofdmim {

inline constexpr std::string_view kToolVersion = "0.1.0";

struct SnrGrid {
    double start_db = 0.0;
    double stop_db = 0.0;
    double step_db = 1.0;
    std::vector<double> points() const;
};

SnrGrid parse_snr_grid(std::string_view text); // "start:stop:step"

// A batch experiment: scenario parameters plus sweep controls. Serialized
// as flat key = value lines (see README for the key list).
struct ExperimentSpec {
    SystemConfig config;
    Metric metric = Metric::outage;
    std::vector<Methodology> methodologies;
    SnrGrid snr;
    long long trials = 100000;
    std::uint64_t seed = 1;
    std::string output_path = "sweep.csv";

    bool operator==(const ExperimentSpec& other) const;
};

ExperimentSpec parse_spec_file(const std::string& path);
void apply_spec_line(ExperimentSpec& spec, std::string_view key, std::string_view value);
void validate_spec(const ExperimentSpec& spec); // throws naming the violated invariant

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

std::string render_csv(const std::vector<SweepRow>& rows);
std::string render_rates_csv(const ExperimentSpec& spec);
std::string render_manifest(const ExperimentSpec& spec, double wall_seconds);

struct RunResult {
    std::string csv_path;
    std::string manifest_path;
    double wall_seconds = 0.0;
};

// Executes the experiment, writes <out> and <out>.manifest. A per-gridpoint
// progress line goes to `log` when provided.
RunResult run_experiment(const ExperimentSpec& spec, std::ostream* log = nullptr);

} // namespace ofdmim
