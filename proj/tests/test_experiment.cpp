#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "ofdmim/experiment.hpp"

using namespace ofdmim;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    const auto dir = fs::temp_directory_path() / "imrelay_test";
    fs::create_directories(dir);
    return dir;
}

std::string write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p);
    out << content;
    return p.string();
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kQuickSpec =
    "# quick outage scenario\n"
    "n_total = 4\n"
    "n_selected = 2\n"
    "apm_order = 2\n"
    "mu1 = 1\n"
    "mu2 = 1\n"
    "outage_threshold = 1\n"
    "metric = outage\n"
    "methodologies = decentralized,centralized\n"
    "snr_db = 0:10:5\n"
    "trials = 2000\n"
    "seed = 42\n";

} // namespace

TEST_CASE("spec file parsing") {
    const auto path = temp_dir() / "spec.txt";
    const auto spec = parse_spec_file(write_file(path, kQuickSpec));
    CHECK(spec.config.n_total == 4);
    CHECK(spec.config.n_selected == 2);
    CHECK(spec.metric == Metric::outage);
    CHECK(spec.methodologies ==
          std::vector<Methodology>{Methodology::decentralized, Methodology::centralized});
    CHECK(spec.snr.start_db == 0.0);
    CHECK(spec.snr.stop_db == 10.0);
    CHECK(spec.snr.step_db == 5.0);
    CHECK(spec.trials == 2000);
    CHECK(spec.seed == 42);
    CHECK(spec.snr.points() == std::vector<double>{0.0, 5.0, 10.0});

    CHECK_THROWS_WITH_AS(parse_spec_file(write_file(temp_dir() / "bad1.txt", "bogus_key = 3\n")),
                         doctest::Contains("unknown key"), std::invalid_argument);
    CHECK_THROWS_AS(parse_spec_file(write_file(temp_dir() / "bad2.txt", "just text\n")),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_spec_file((temp_dir() / "missing.txt").string()), std::runtime_error);
}

TEST_CASE("spec validation names the violated invariant") {
    ExperimentSpec spec = parse_spec_file(write_file(temp_dir() / "s.txt", kQuickSpec));
    validate_spec(spec);

    auto broken = spec;
    broken.trials = 10;
    CHECK_THROWS_WITH_AS(validate_spec(broken), doctest::Contains("trials"), std::invalid_argument);
    broken = spec;
    broken.snr.start_db = 20.0;
    CHECK_THROWS_WITH_AS(validate_spec(broken), doctest::Contains("snr_db"), std::invalid_argument);
    broken = spec;
    broken.snr.step_db = 0.0;
    CHECK_THROWS_WITH_AS(validate_spec(broken), doctest::Contains("snr_db"), std::invalid_argument);
    broken = spec;
    broken.config.n_total = 5;
    CHECK_THROWS_WITH_AS(validate_spec(broken), doctest::Contains("n_total"), std::invalid_argument);
    broken = spec;
    broken.methodologies.clear();
    CHECK_THROWS_WITH_AS(validate_spec(broken), doctest::Contains("methodologies"),
                         std::invalid_argument);
}

TEST_CASE("run_experiment writes the stable CSV schema") {
    ExperimentSpec spec = parse_spec_file(write_file(temp_dir() / "s.txt", kQuickSpec));
    spec.snr = parse_snr_grid("0:30:5"); // 7 grid points
    spec.output_path = (temp_dir() / "outage.csv").string();
    const auto result = run_experiment(spec);
    const std::string csv = read_file(result.csv_path);
    std::stringstream ss(csv);
    std::string line;
    std::getline(ss, line);
    CHECK(line == "snr_db,methodology,metric,mc_mean,mc_stderr,analytic,asymptotic");
    int rows = 0;
    while (std::getline(ss, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 14); // 7 grid points x 2 methodologies
}

TEST_CASE("rates metric emits a single closed-form row") {
    ExperimentSpec spec = parse_spec_file(write_file(temp_dir() / "s.txt", kQuickSpec));
    spec.metric = Metric::rates;
    spec.output_path = (temp_dir() / "rates.csv").string();
    run_experiment(spec);
    CHECK(read_file(spec.output_path) == "avg_rate_bpcu,classic_bpcu,fpsk_bpcu\n3.25,4,3\n");
}

TEST_CASE("rerun with identical spec and seed is byte-identical across worker counts") {
    ExperimentSpec spec = parse_spec_file(write_file(temp_dir() / "s.txt", kQuickSpec));
    spec.output_path = (temp_dir() / "det.csv").string();
    setenv("IMRELAY_WORKERS", "1", 1);
    run_experiment(spec);
    const std::string first = read_file(spec.output_path);
    setenv("IMRELAY_WORKERS", "4", 1);
    run_experiment(spec);
    const std::string second = read_file(spec.output_path);
    unsetenv("IMRELAY_WORKERS");
    CHECK(first == second);
    CHECK(!first.empty());
}

TEST_CASE("unwritable output path raises an I/O error") {
    ExperimentSpec spec = parse_spec_file(write_file(temp_dir() / "s.txt", kQuickSpec));
    spec.metric = Metric::rates; // fast path
    spec.output_path = (temp_dir() / "no_such_dir" / "x.csv").string();
    CHECK_THROWS_AS(run_experiment(spec), std::runtime_error);
}

TEST_CASE("manifest round-trips to the same spec") {
    ExperimentSpec spec = parse_spec_file(write_file(temp_dir() / "s.txt", kQuickSpec));
    spec.output_path = (temp_dir() / "mrt.csv").string();
    const auto result = run_experiment(spec);
    const auto reparsed = parse_spec_file(result.manifest_path);
    CHECK(reparsed == spec);
}

TEST_CASE("format_double is shortest round-trip") {
    for (double v : {0.0, 1.0, 3.25, 0.1, 1e-9, 12345.678901234567, 6.03e-06}) {
        const std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
    CHECK(format_double(3.25) == "3.25");
    CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("snr grid parser") {
    const auto g = parse_snr_grid("0:30:5");
    CHECK(g.points().size() == 7);
    CHECK_THROWS_AS(parse_snr_grid("10"), std::invalid_argument);
    CHECK_THROWS_AS(parse_snr_grid("a:b:c"), std::invalid_argument);
    const auto g2 = parse_snr_grid("-5:5:2.5");
    CHECK(g2.points() == std::vector<double>{-5.0, -2.5, 0.0, 2.5, 5.0});
}
