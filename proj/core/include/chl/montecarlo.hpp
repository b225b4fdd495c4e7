#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "chl/slit_map.hpp"

namespace chl {

enum class Metric {
    TR,            // one-arm domination step count from certified runs
    TTree,         // tree completion step count
    NTrees,        // final number of colors
    Degree,        // direct-attachment count of one particle window
    Hitting,       // steps of sigma_{low,high} from a start length
    SigmaStar,     // steps of sigma_*
    ChainMoments,  // one-step squared length increment
};

const char* metric_name(Metric m);
Metric metric_from_name(const std::string& name);

struct HittingSpec {
    double low = 0.0;
    double high = 0.0;
    double start_length = 0.0;  // |I_0|; also the fixed length for ChainMoments
};

struct ExperimentConfig {
    SlitParams params;
    std::vector<SlitParams> sweep;  // delta grid for sweep_scaling; empty otherwise
    std::uint64_t replicates = 0;
    std::uint64_t seed = 0;
    double eta = 1e-3;
    std::uint64_t cap = 100'000'000ULL;
    Metric metric = Metric::NTrees;
    HittingSpec hitting;
    double sigma_star_start = 0.0;  // 0 means delta/10
    int workers = 0;                // 0 means hardware concurrency
    std::string out_path;           // record file; empty disables persistence
    std::string format = "csv";     // "csv" or "json" (JSON lines)
    bool timing = false;            // measure wall_ms; off keeps outputs byte-identical
};

struct ReplicateResult {
    std::uint64_t replicate = 0;
    std::uint64_t seed = 0;
    double value = 0.0;
    bool certified = false;
    double residual = 0.0;
    std::uint64_t steps = 0;
    double wall_ms = 0.0;
};

struct SummaryStats {
    double mean = 0.0;
    double variance = 0.0;
    double stderror = 0.0;
    double ci95_low = 0.0;
    double ci95_high = 0.0;
    std::uint64_t count = 0;     // certified replicates entering the stats
    std::uint64_t cap_hits = 0;  // capped or uncertified replicates
    double residual_eta = 0.0;
};

struct ExperimentResult {
    SummaryStats stats;
    std::vector<ReplicateResult> rows;
};

// Runs cfg.replicates independent replicates (worker pool, deterministic
// per-replicate seeding), persists records when out_path is set, and throws
// std::runtime_error when more than 1% of replicates fail to certify.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

SummaryStats summarize(const std::vector<ReplicateResult>& rows, double eta);

struct SweepPoint {
    SlitParams params;
    SummaryStats stats;
};

struct SweepResult {
    double slope = 0.0;  // OLS of log(mean) on log(delta)
    double intercept = 0.0;
    double r_squared = 0.0;
    std::vector<SweepPoint> points;
};

// Requires cfg.sweep with >= 3 grid points.
SweepResult sweep_scaling(const ExperimentConfig& cfg);

struct TailResult {
    std::vector<std::pair<double, double>> survival;  // (normalized value, P(> value))
    double slope = 0.0;                               // log-survival fit, central quantiles
    double intercept = 0.0;
    double r_squared = 0.0;
    std::uint64_t sample_count = 0;
};

// Survival table of metric * delta^3 with a log-linear fit over the
// [0.5, 0.95] quantile range.
TailResult tail_estimate(const ExperimentConfig& cfg);

struct ZeroMassDecay {
    std::vector<double> mean_by_step;  // index k = empirical E[zero mass at step k]
    double fitted_rate = 0.0;          // OLS slope of log mean against k
    double closed_form_rate = 0.0;     // log(1 - 2 asin(delta)/pi)
    std::uint64_t replicates = 0;
};

ZeroMassDecay zero_mass_decay(const ExperimentConfig& cfg, int k_max);

// Least squares y = a + b x; returns {b, a, R^2}.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Record-file writers (atomic: temp file + rename).
void write_records(const ExperimentConfig& cfg, const std::vector<ReplicateResult>& rows);
void write_summary_json(const std::string& path, const ExperimentConfig& cfg,
                        const SummaryStats& stats);
std::string summary_json(const ExperimentConfig& cfg, const SummaryStats& stats);

}  // namespace chl
