#pragma once

// Existence-probability experiments: sample random profiles, solve each one,
// report how often a stable matching exists. Rows are deterministic for a
// fixed seed regardless of worker count because every sample derives its own
// sub-seed from the master seed and the sample index.

#include <chrono>
#include <cstdint>
#include <exception>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "core.hpp"
#include "dispatch.hpp"

namespace mlsm {

struct ExperimentConfig {
    Concept kind = Concept::Global;
    int alpha = 1;
    int n = 2;
    int layers = 1;
    ProfileMode mode = ProfileMode::General;
    long samples = 1;
    std::uint64_t seed = 0;
    int brute_cap = 8;
    bool timing = false;  // measure wall time; off keeps the CSV byte-stable
    int workers = 1;
};

struct ExperimentRow {
    ExperimentConfig config;
    long existence_count = 0;
    double existence_rate = 0.0;
    double mean_runtime_s = 0.0;
};

inline void validate(const ExperimentConfig& c) {
    if (c.n < 1) throw std::invalid_argument("experiment: n must be positive");
    if (c.layers < 1) throw std::invalid_argument("experiment: layers must be positive");
    if (c.alpha < 1 || c.alpha > c.layers)
        throw std::invalid_argument("experiment: alpha must lie in [1, layers]");
    if (c.samples < 1) throw std::invalid_argument("experiment: samples must be positive");
    if (c.workers < 1) throw std::invalid_argument("experiment: workers must be positive");
}

inline ExperimentRow run_experiment(const ExperimentConfig& cfg) {
    validate(cfg);
    std::vector<char> exists(static_cast<size_t>(cfg.samples), 0);
    std::vector<double> runtime(static_cast<size_t>(cfg.samples), 0.0);

    auto one_sample = [&](long i) {
        auto p = random_profile(cfg.n, cfg.layers, cfg.mode, detail::sub_seed(cfg.seed, static_cast<std::uint64_t>(i), 0, 0));
        std::chrono::steady_clock::time_point t0;
        if (cfg.timing) t0 = std::chrono::steady_clock::now();
        auto rep = solve(p, cfg.kind, cfg.alpha, SolveMethod::Auto, cfg.brute_cap);
        if (cfg.timing)
            runtime[static_cast<size_t>(i)] =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        exists[static_cast<size_t>(i)] = rep.matching.has_value();
    };

    if (cfg.workers <= 1) {
        for (long i = 0; i < cfg.samples; ++i) one_sample(i);
    } else {
        int nw = cfg.workers;
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(static_cast<size_t>(nw));
        for (int t = 0; t < nw; ++t) {
            pool.emplace_back([&, t]() {
                try {
                    for (long i = t; i < cfg.samples; i += nw) one_sample(i);
                } catch (...) {
                    errors[static_cast<size_t>(t)] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    ExperimentRow row;
    row.config = cfg;
    for (long i = 0; i < cfg.samples; ++i) {
        row.existence_count += exists[static_cast<size_t>(i)];
        row.mean_runtime_s += runtime[static_cast<size_t>(i)];
    }
    row.existence_rate = static_cast<double>(row.existence_count) / static_cast<double>(cfg.samples);
    row.mean_runtime_s /= static_cast<double>(cfg.samples);
    return row;
}

inline std::vector<ExperimentRow> run_experiments(const std::vector<ExperimentConfig>& cfgs) {
    std::vector<ExperimentRow> rows;
    rows.reserve(cfgs.size());
    for (const auto& c : cfgs) rows.push_back(run_experiment(c));
    return rows;
}

inline const char* experiment_csv_header() {
    return "concept,alpha,n,layers,mode,samples,seed,existence_count,existence_rate,mean_runtime_s";
}

inline void write_csv_row(std::ostream& out, const ExperimentRow& r) {
    char frac[64];
    std::snprintf(frac, sizeof frac, "%.6f", r.existence_rate);
    char secs[64];
    std::snprintf(secs, sizeof secs, "%.6f", r.mean_runtime_s);
    out << concept_name(r.config.kind) << ',' << r.config.alpha << ',' << r.config.n << ','
        << r.config.layers << ',' << profile_mode_name(r.config.mode) << ',' << r.config.samples
        << ',' << r.config.seed << ',' << r.existence_count << ',' << frac << ',' << secs << '\n';
}

inline std::string experiment_csv(const std::vector<ExperimentRow>& rows) {
    std::ostringstream out;
    out << experiment_csv_header() << '\n';
    for (const auto& r : rows) write_csv_row(out, r);
    return out.str();
}

} // namespace mlsm
