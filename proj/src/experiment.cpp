#include "ofdmim/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ofdmim/analytics.hpp"
#include "ofdmim/modem.hpp"

namespace ofdmim {

std::vector<double> SnrGrid::points() const {
    std::vector<double> out;
    // half-step slack so stop lands on the grid despite rounding
    for (double v = start_db; v <= stop_db + step_db * 0.5; v += step_db) out.push_back(v);
    return out;
}

SnrGrid parse_snr_grid(std::string_view text) {
    SnrGrid g;
    const auto first = text.find(':');
    const auto second = text.rfind(':');
    if (first == std::string_view::npos || second == first)
        throw std::invalid_argument("snr_db: expected start:stop:step");
    auto to_d = [](std::string_view s) {
        double v{};
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
            throw std::invalid_argument("snr_db: malformed number '" + std::string(s) + "'");
        return v;
    };
    g.start_db = to_d(text.substr(0, first));
    g.stop_db = to_d(text.substr(first + 1, second - first - 1));
    g.step_db = to_d(text.substr(second + 1));
    return g;
}

bool ExperimentSpec::operator==(const ExperimentSpec& other) const {
    return config.n_total == other.config.n_total && config.n_selected == other.config.n_selected &&
           config.apm_order == other.config.apm_order &&
           config.mean_gain_hop1 == other.config.mean_gain_hop1 &&
           config.mean_gain_hop2 == other.config.mean_gain_hop2 &&
           config.outage_threshold == other.config.outage_threshold && metric == other.metric &&
           methodologies == other.methodologies && snr.start_db == other.snr.start_db &&
           snr.stop_db == other.snr.stop_db && snr.step_db == other.snr.step_db &&
           trials == other.trials && seed == other.seed && output_path == other.output_path;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

long long parse_ll(std::string_view key, std::string_view s) {
    long long v{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::invalid_argument(std::string(key) + ": malformed integer '" + std::string(s) + "'");
    return v;
}

double parse_d(std::string_view key, std::string_view s) {
    double v{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::invalid_argument(std::string(key) + ": malformed number '" + std::string(s) + "'");
    return v;
}

} // namespace

void apply_spec_line(ExperimentSpec& spec, std::string_view key, std::string_view value) {
    if (key == "n_total") spec.config.n_total = static_cast<int>(parse_ll(key, value));
    else if (key == "n_selected") spec.config.n_selected = static_cast<int>(parse_ll(key, value));
    else if (key == "apm_order") spec.config.apm_order = static_cast<int>(parse_ll(key, value));
    else if (key == "mu1") spec.config.mean_gain_hop1 = parse_d(key, value);
    else if (key == "mu2") spec.config.mean_gain_hop2 = parse_d(key, value);
    else if (key == "outage_threshold") spec.config.outage_threshold = parse_d(key, value);
    else if (key == "metric") spec.metric = metric_from_string(value);
    else if (key == "methodologies") {
        spec.methodologies.clear();
        std::string_view rest = value;
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            spec.methodologies.push_back(methodology_from_string(trim(rest.substr(0, comma))));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
    } else if (key == "snr_db") spec.snr = parse_snr_grid(value);
    else if (key == "trials") spec.trials = parse_ll(key, value);
    else if (key == "seed") spec.seed = static_cast<std::uint64_t>(parse_ll(key, value));
    else if (key == "out") spec.output_path = std::string(value);
    else throw std::invalid_argument("spec: unknown key '" + std::string(key) + "'");
}

ExperimentSpec parse_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("spec: cannot open '" + path + "'");
    ExperimentSpec spec;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view sv = trim(line);
        if (sv.empty() || sv.front() == '#') continue;
        const auto eq = sv.find('=');
        if (eq == std::string_view::npos)
            throw std::invalid_argument("spec: line " + std::to_string(lineno) + " is not 'key = value'");
        apply_spec_line(spec, trim(sv.substr(0, eq)), trim(sv.substr(eq + 1)));
    }
    return spec;
}

void validate_spec(const ExperimentSpec& spec) {
    spec.config.validate(); // snr_tx is per grid point; default 1 passes
    if (spec.metric == Metric::rates) return;
    if (spec.methodologies.empty())
        throw std::invalid_argument("methodologies: at least one required");
    if (spec.snr.start_db > spec.snr.stop_db)
        throw std::invalid_argument("snr_db: start must be <= stop");
    if (!(spec.snr.step_db > 0.0)) throw std::invalid_argument("snr_db: step must be > 0");
    if (spec.trials < 1000)
        throw std::invalid_argument("trials: MC metrics require trials >= 1000");
}

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string render_csv(const std::vector<SweepRow>& rows) {
    std::string out = "snr_db,methodology,metric,mc_mean,mc_stderr,analytic,asymptotic\n";
    for (const auto& row : rows) {
        out += format_double(row.snr_db);
        out += ',';
        out += to_string(row.methodology);
        out += ',';
        out += to_string(row.metric);
        out += ',';
        out += format_double(row.mc.mean);
        out += ',';
        out += format_double(row.mc.std_error);
        out += ',';
        if (row.analytic) out += format_double(*row.analytic);
        out += ',';
        if (row.asymptotic) out += format_double(*row.asymptotic);
        out += '\n';
    }
    return out;
}

std::string render_rates_csv(const ExperimentSpec& spec) {
    const double avg = average_rate(spec.config);
    const RateBenchmarks bench = rate_benchmarks(spec.config);
    std::string out = "avg_rate_bpcu,classic_bpcu,fpsk_bpcu\n";
    out += format_double(avg);
    out += ',';
    out += format_double(bench.classic_bpcu);
    out += ',';
    out += format_double(bench.fpsk_bpcu);
    out += '\n';
    return out;
}

std::string render_manifest(const ExperimentSpec& spec, double wall_seconds) {
    std::ostringstream out;
    out << "# imrelay run manifest\n";
    out << "# version = " << kToolVersion << "\n";
    out << "# wall_time_s = " << format_double(wall_seconds) << "\n";
    out << "n_total = " << spec.config.n_total << "\n";
    out << "n_selected = " << spec.config.n_selected << "\n";
    out << "apm_order = " << spec.config.apm_order << "\n";
    out << "mu1 = " << format_double(spec.config.mean_gain_hop1) << "\n";
    out << "mu2 = " << format_double(spec.config.mean_gain_hop2) << "\n";
    out << "outage_threshold = " << format_double(spec.config.outage_threshold) << "\n";
    out << "metric = " << to_string(spec.metric) << "\n";
    if (!spec.methodologies.empty()) {
        out << "methodologies = ";
        for (std::size_t i = 0; i < spec.methodologies.size(); ++i) {
            if (i) out << ",";
            out << to_string(spec.methodologies[i]);
        }
        out << "\n";
    }
    out << "snr_db = " << format_double(spec.snr.start_db) << ":" << format_double(spec.snr.stop_db)
        << ":" << format_double(spec.snr.step_db) << "\n";
    out << "trials = " << spec.trials << "\n";
    out << "seed = " << spec.seed << "\n";
    out << "out = " << spec.output_path << "\n";
    return out.str();
}

RunResult run_experiment(const ExperimentSpec& spec, std::ostream* log) {
    validate_spec(spec);
    const auto t0 = std::chrono::steady_clock::now();

    std::string csv;
    if (spec.metric == Metric::rates) {
        csv = render_rates_csv(spec);
        if (log) *log << "[rates] " << csv;
    } else {
        const auto grid = spec.snr.points();
        const auto rows =
            sweep(spec.config, spec.metric, spec.methodologies, grid, spec.trials, spec.seed);
        if (log) {
            for (const auto& row : rows) {
                *log << "[" << to_string(spec.metric) << "] " << to_string(row.methodology) << " "
                     << row.snr_db << " dB: mc=" << row.mc.mean << " se=" << row.mc.std_error;
                if (row.analytic) *log << " analytic=" << *row.analytic;
                if (row.asymptotic) *log << " asymptotic=" << *row.asymptotic;
                if (row.analytic_saturated) *log << " (union bound saturated)";
                *log << "\n";
            }
        }
        csv = render_csv(rows);
    }

    RunResult result;
    result.csv_path = spec.output_path;
    result.manifest_path = spec.output_path + ".manifest";
    {
        std::ofstream out(result.csv_path, std::ios::binary);
        if (!out) throw std::runtime_error("out: cannot write '" + result.csv_path + "'");
        out << csv;
    }
    const auto t1 = std::chrono::steady_clock::now();
    result.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
    {
        std::ofstream out(result.manifest_path, std::ios::binary);
        if (!out) throw std::runtime_error("out: cannot write '" + result.manifest_path + "'");
        out << render_manifest(spec, result.wall_seconds);
    }
    return result;
}

} // namespace ofdmim
