#include "ofdmim/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "ofdmim/analytics.hpp"
#include "ofdmim/channel.hpp"
#include "ofdmim/modem.hpp"
#include "ofdmim/rng.hpp"

namespace ofdmim {

std::string_view to_string(Metric m) {
    switch (m) {
    case Metric::outage: return "outage";
    case Metric::capacity: return "capacity";
    case Metric::ser: return "ser";
    case Metric::rates: return "rates";
    }
    return "?";
}

Metric metric_from_string(std::string_view name) {
    if (name == "outage") return Metric::outage;
    if (name == "capacity") return Metric::capacity;
    if (name == "ser") return Metric::ser;
    if (name == "rates") return Metric::rates;
    throw std::invalid_argument("metric: unknown name '" + std::string(name) + "'");
}

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("IMRELAY_WORKERS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

constexpr long long kBatchSize = 1 << 16;

struct BatchAccum {
    long long n = 0;
    double sum = 0.0;
    double sumsq = 0.0;
    long long events = 0;
};

// Runs `trials` trials split into fixed-size batches, one RngStream per
// batch, merged in batch order so results do not depend on the worker
// count. With min_events >= 0 the run stops at the first batch boundary
// where the cumulative event count reaches it.
BatchAccum run_batches(long long trials, std::uint64_t seed, int workers, long long min_events,
                       const std::function<void(RngStream&, long long first_trial, long long count,
                                                BatchAccum&)>& batch_fn) {
    if (trials < 1) throw std::invalid_argument("trials: must be >= 1");
    workers = resolve_workers(workers);
    const long long n_batches = (trials + kBatchSize - 1) / kBatchSize;
    BatchAccum total;

    auto batch_count = [&](long long b) {
        return std::min(kBatchSize, trials - b * kBatchSize);
    };
    auto run_one = [&](long long b) {
        BatchAccum acc;
        RngStream rng(seed, static_cast<std::uint64_t>(b));
        batch_fn(rng, b * kBatchSize, batch_count(b), acc);
        return acc;
    };

    long long next_wave = 0;
    while (next_wave < n_batches) {
        const long long wave_end =
            min_events >= 0 ? std::min<long long>(n_batches, next_wave + 8LL * workers) : n_batches;
        std::vector<BatchAccum> results(static_cast<std::size_t>(wave_end - next_wave));
        std::atomic<long long> cursor{next_wave};
        auto work = [&]() {
            for (;;) {
                const long long b = cursor.fetch_add(1);
                if (b >= wave_end) break;
                results[static_cast<std::size_t>(b - next_wave)] = run_one(b);
            }
        };
        if (workers <= 1 || wave_end - next_wave <= 1) {
            work();
        } else {
            std::vector<std::thread> pool;
            for (int w = 0; w < workers; ++w) pool.emplace_back(work);
            for (auto& t : pool) t.join();
        }
        for (const auto& acc : results) {
            total.n += acc.n;
            total.sum += acc.sum;
            total.sumsq += acc.sumsq;
            total.events += acc.events;
            if (min_events >= 0 && total.events >= min_events) return total;
        }
        next_wave = wave_end;
    }
    return total;
}

// ---- trial bodies ----------------------------------------------------------

// fpsk keeps the artifact's dual-mode protocol on a fixed single-subcarrier
// codebook, so it runs as n_selected = 1 with selection disabled.
SystemConfig effective_config(const SystemConfig& config, Methodology methodology) {
    SystemConfig cfg = config;
    if (methodology == Methodology::fpsk) cfg.n_selected = 1;
    cfg.validate();
    return cfg;
}

struct TrialWorkspace {
    ChannelRealization real;
    std::vector<double> g1, g2, link;
    std::vector<int> order;
    MappingScheme s1, s2;
    std::vector<cplx> h1, h2, y;
};

class TrialEngine {
public:
    TrialEngine(const SystemConfig& cfg, Methodology methodology)
        : cfg_(cfg), methodology_(methodology), fixed_(default_scheme(cfg)) {}

    const SystemConfig& config() const { return cfg_; }

    void prepare(TrialWorkspace& ws) const {
        const auto nt = static_cast<std::size_t>(cfg_.n_total);
        ws.g1.resize(nt);
        ws.g2.resize(nt);
        ws.link.resize(nt);
        ws.order.resize(nt);
        ws.h1.resize(static_cast<std::size_t>(cfg_.n_selected) + 1);
        ws.h2.resize(ws.h1.size());
        ws.y.resize(ws.h1.size());
    }

    // Draws channels and resolves both hops' schemes into ws.s1 / ws.s2.
    void draw_and_select(RngStream& rng, TrialWorkspace& ws) const {
        sample_realization(rng, cfg_, ws.real);
        const auto nt = static_cast<std::size_t>(cfg_.n_total);
        for (std::size_t i = 0; i < nt; ++i) {
            ws.g1[i] = std::norm(ws.real.hop1[i]);
            ws.g2[i] = std::norm(ws.real.hop2[i]);
        }
        switch (methodology_) {
        case Methodology::decentralized:
            select_into(ws.g1, ws.order, ws.s1);
            select_into(ws.g2, ws.order, ws.s2);
            break;
        case Methodology::centralized:
            for (std::size_t i = 0; i < nt; ++i) ws.link[i] = std::min(ws.g1[i], ws.g2[i]);
            select_into(ws.link, ws.order, ws.s1);
            ws.s2 = ws.s1;
            break;
        case Methodology::none:
        case Methodology::fpsk:
            ws.s1 = fixed_.hop1;
            ws.s2 = fixed_.hop2;
            break;
        }
    }

    int draw_pattern(RngStream& rng, long long trial_index, bool stratified) const {
        if (stratified) return 1 + static_cast<int>(trial_index % cfg_.pattern_count());
        return 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(cfg_.pattern_count())));
    }

private:
    void select_into(const std::vector<double>& gains, std::vector<int>& order,
                     MappingScheme& out) const {
        const int nt = cfg_.n_total, ns = cfg_.n_selected;
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (gains[static_cast<std::size_t>(a)] != gains[static_cast<std::size_t>(b)])
                return gains[static_cast<std::size_t>(a)] > gains[static_cast<std::size_t>(b)];
            return a < b;
        });
        out.selected.assign(order.begin(), order.begin() + ns);
        for (int& v : out.selected) ++v;
        std::sort(out.selected.begin(), out.selected.end());
        out.complementary = order[static_cast<std::size_t>(ns)] + 1;
        (void)nt;
    }

    SystemConfig cfg_;
    Methodology methodology_;
    SelectionResult fixed_;
};

bool outage_trial(const TrialEngine& eng, TrialWorkspace& ws, int k) {
    const auto& cfg = eng.config();
    const double rho = cfg.snr_tx, s = cfg.outage_threshold;
    if (k == 1) {
        const double gc1 = ws.g1[static_cast<std::size_t>(ws.s1.complementary - 1)];
        const double gc2 = ws.g2[static_cast<std::size_t>(ws.s2.complementary - 1)];
        return rho * gc1 < s || rho * gc2 < s;
    }
    const unsigned v = static_cast<unsigned>(k - 1);
    const double scale = rho / std::popcount(v);
    for (int n = 0; n < cfg.n_selected; ++n) {
        if (!((v >> n) & 1u)) continue;
        // first sub-threshold subcarrier settles the trial
        if (scale * ws.g1[static_cast<std::size_t>(ws.s1.selected[static_cast<std::size_t>(n)] - 1)] < s)
            return true;
        if (scale * ws.g2[static_cast<std::size_t>(ws.s2.selected[static_cast<std::size_t>(n)] - 1)] < s)
            return true;
    }
    return false;
}

double capacity_trial(const TrialEngine& eng, TrialWorkspace& ws, int k) {
    const auto& cfg = eng.config();
    const double rho = cfg.snr_tx;
    if (k == 1) {
        const double gc1 = ws.g1[static_cast<std::size_t>(ws.s1.complementary - 1)];
        const double gc2 = ws.g2[static_cast<std::size_t>(ws.s2.complementary - 1)];
        return 0.5 * std::log2(1.0 + rho * std::min(gc1, gc2));
    }
    const unsigned v = static_cast<unsigned>(k - 1);
    const double scale = rho / std::popcount(v);
    double cap = 0.0;
    for (int n = 0; n < cfg.n_selected; ++n) {
        if (!((v >> n) & 1u)) continue;
        const double g1 = ws.g1[static_cast<std::size_t>(ws.s1.selected[static_cast<std::size_t>(n)] - 1)];
        const double g2 = ws.g2[static_cast<std::size_t>(ws.s2.selected[static_cast<std::size_t>(n)] - 1)];
        cap += 0.5 * std::log2(1.0 + scale * std::min(g1, g2));
    }
    return cap;
}

// source -> hop 1 -> ML at relay -> regenerate -> hop 2 -> ML at destination
bool ser_trial(const TrialEngine& eng, const CandidateSet& cands, RngStream& rng,
               TrialWorkspace& ws, int k) {
    const auto& cfg = eng.config();
    const double rho = cfg.snr_tx;
    const double amp = std::sqrt(rho);
    const int groups = std::max(1, std::popcount(static_cast<unsigned>(k - 1)));
    // uniform symbol draw per active group; candidates enumerate the tuples
    // in odometer order, so the rank addresses the block directly
    int rank = 0;
    for (int t = 0; t < groups; ++t)
        rank = rank * cfg.apm_order +
               static_cast<int>(rng.next_below(static_cast<std::uint64_t>(cfg.apm_order)));
    const int tx = cands.first_index_of_pattern(k) + rank;
    gather_channel_slots(ws.real, ws.s1, 1, ws.h1);
    gather_channel_slots(ws.real, ws.s2, 2, ws.h2);

    const auto u_tx = cands.scaled(tx);
    for (std::size_t n = 0; n < ws.y.size(); ++n)
        ws.y[n] = amp * ws.h1[n] * u_tx[n] + rng.cnormal(1.0);
    const int relay = ml_detect_index(ws.y, ws.h1, rho, cands);

    const auto u_relay = cands.scaled(relay);
    for (std::size_t n = 0; n < ws.y.size(); ++n)
        ws.y[n] = amp * ws.h2[n] * u_relay[n] + rng.cnormal(1.0);
    const int dest = ml_detect_index(ws.y, ws.h2, rho, cands);
    return dest != tx;
}

MetricEstimate finalize(const BatchAccum& acc, Metric metric, Methodology methodology,
                        const SystemConfig& cfg, bool bernoulli) {
    MetricEstimate e;
    e.metric = metric;
    e.methodology = methodology;
    e.config = cfg;
    e.trials = acc.n;
    e.events = acc.events;
    e.mean = acc.sum / static_cast<double>(acc.n);
    if (bernoulli) {
        e.std_error = std::sqrt(e.mean * (1.0 - e.mean) / static_cast<double>(acc.n));
    } else if (acc.n > 1) {
        const double var =
            std::max(0.0, (acc.sumsq - acc.sum * acc.sum / static_cast<double>(acc.n)) /
                              static_cast<double>(acc.n - 1));
        e.std_error = std::sqrt(var / static_cast<double>(acc.n));
    }
    return e;
}

} // namespace

MetricEstimate run_metric(const SystemConfig& config, Metric metric, Methodology methodology,
                          const RunOptions& options) {
    const SystemConfig cfg = effective_config(config, methodology);
    const TrialEngine eng(cfg, methodology);
    const bool bernoulli = metric != Metric::capacity;
    const bool stratified = options.stratified_k;

    std::shared_ptr<const CandidateSet> cands;
    if (metric == Metric::ser) cands = std::make_shared<CandidateSet>(cfg);
    else if (metric == Metric::rates)
        throw std::invalid_argument("run_metric: rates is a closed-form metric");

    auto batch_fn = [&, cands](RngStream& rng, long long first, long long count, BatchAccum& acc) {
        TrialWorkspace ws;
        eng.prepare(ws);
        for (long long t = 0; t < count; ++t) {
            eng.draw_and_select(rng, ws);
            const int k = eng.draw_pattern(rng, first + t, stratified);
            double value = 0.0;
            switch (metric) {
            case Metric::outage: value = outage_trial(eng, ws, k) ? 1.0 : 0.0; break;
            case Metric::capacity: value = capacity_trial(eng, ws, k); break;
            case Metric::ser: value = ser_trial(eng, *cands, rng, ws, k) ? 1.0 : 0.0; break;
            case Metric::rates: break;
            }
            acc.sum += value;
            acc.sumsq += value * value;
            if (bernoulli && value != 0.0) ++acc.events;
        }
        acc.n += count;
    };

    const BatchAccum acc =
        run_batches(options.trials, options.seed, options.workers, options.min_events, batch_fn);
    return finalize(acc, metric, methodology, cfg, bernoulli);
}

std::vector<TrialRecord> record_trials(const SystemConfig& config, Methodology methodology,
                                       long long trials, std::uint64_t seed) {
    const SystemConfig cfg = effective_config(config, methodology);
    const TrialEngine eng(cfg, methodology);
    TrialWorkspace ws;
    eng.prepare(ws);
    RngStream rng(seed, 0);
    std::vector<TrialRecord> records;
    records.reserve(static_cast<std::size_t>(trials));
    const double rho = cfg.snr_tx, s = cfg.outage_threshold;
    for (long long t = 0; t < trials; ++t) {
        eng.draw_and_select(rng, ws);
        const int k = eng.draw_pattern(rng, t, false);
        TrialRecord rec;
        rec.pattern_k = k;
        rec.scheme_hop1 = ws.s1;
        rec.scheme_hop2 = ws.s2;
        rec.used_complementary = k == 1;
        rec.active_subcarriers = std::max(1, std::popcount(static_cast<unsigned>(k - 1)));
        if (k == 1) {
            rec.outage_hop1 = rho * ws.g1[static_cast<std::size_t>(ws.s1.complementary - 1)] < s;
            rec.outage_hop2 = rho * ws.g2[static_cast<std::size_t>(ws.s2.complementary - 1)] < s;
        } else {
            const double scale = rho / rec.active_subcarriers;
            for (int n = 0; n < cfg.n_selected; ++n) {
                if (!(((k - 1) >> n) & 1)) continue;
                if (scale * ws.g1[static_cast<std::size_t>(ws.s1.selected[static_cast<std::size_t>(n)] - 1)] < s)
                    rec.outage_hop1 = true;
                if (scale * ws.g2[static_cast<std::size_t>(ws.s2.selected[static_cast<std::size_t>(n)] - 1)] < s)
                    rec.outage_hop2 = true;
            }
        }
        rec.capacity = capacity_trial(eng, ws, k);
        records.push_back(std::move(rec));
    }
    return records;
}

MetricEstimate run_outage(const SystemConfig& config, Methodology methodology, long long trials,
                          std::uint64_t seed) {
    return run_metric(config, Metric::outage, methodology, {.trials = trials, .seed = seed});
}

MetricEstimate run_capacity(const SystemConfig& config, Methodology methodology, long long trials,
                            std::uint64_t seed) {
    return run_metric(config, Metric::capacity, methodology, {.trials = trials, .seed = seed});
}

MetricEstimate run_ser(const SystemConfig& config, Methodology methodology, long long trials,
                       std::uint64_t seed) {
    return run_metric(config, Metric::ser, methodology, {.trials = trials, .seed = seed});
}

std::vector<SweepRow> sweep(const SystemConfig& base, Metric metric,
                            const std::vector<Methodology>& methodologies,
                            const std::vector<double>& snr_db_grid, long long trials,
                            std::uint64_t seed, int workers) {
    if (snr_db_grid.empty()) throw std::invalid_argument("sweep: empty SNR grid");
    std::vector<SweepRow> rows;
    for (std::size_t mi = 0; mi < methodologies.size(); ++mi) {
        const Methodology methodology = methodologies[mi];
        const bool adaptive =
            methodology == Methodology::decentralized || methodology == Methodology::centralized;
        std::vector<AnalyticCurvePoint> exact, asym;
        if (adaptive && (metric == Metric::outage || metric == Metric::capacity)) {
            const CurveKind kind =
                metric == Metric::outage ? CurveKind::outage_exact : CurveKind::capacity;
            exact = analytic_curve(kind, methodology, base, snr_db_grid);
            if (metric == Metric::outage)
                asym = analytic_curve(CurveKind::outage_asymptotic, methodology, base, snr_db_grid);
        }
        for (std::size_t pi = 0; pi < snr_db_grid.size(); ++pi) {
            const double snr_db = snr_db_grid[pi];
            SystemConfig cfg = base.with_snr(db_to_linear(snr_db));
            SweepRow row;
            row.snr_db = snr_db;
            row.methodology = methodology;
            row.metric = metric;
            RunOptions opt;
            opt.trials = trials;
            opt.workers = workers;
            opt.seed = RngStream::mix(seed ^ (0x51ed2701ull + (static_cast<std::uint64_t>(mi) << 32) + pi));
            row.mc = run_metric(cfg, metric, methodology, opt);

            if (!exact.empty()) row.analytic = exact[pi].value;
            if (!asym.empty()) row.asymptotic = asym[pi].value;
            if (adaptive && metric == Metric::ser) {
                const SerResult sr = ser_average_detail(methodology, row.mc.config);
                row.analytic = sr.value;
                row.analytic_saturated = sr.saturated;
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

} // namespace ofdmim
