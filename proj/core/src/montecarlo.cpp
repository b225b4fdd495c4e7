#include "chl/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "chl/interval_chain.hpp"
#include "chl/marked_config.hpp"
#include "chl/rng.hpp"

namespace chl {

namespace {

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int resolve_workers(int workers) {
    if (workers > 0) return workers;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

ReplicateResult run_one(const ExperimentConfig& cfg, const SlitParams& p,
                        std::uint64_t replicate) {
    ReplicateResult r;
    r.replicate = replicate;
    r.seed = derive_seed(cfg.seed, replicate);
    const auto t0 = std::chrono::steady_clock::now();
    switch (cfg.metric) {
        case Metric::TR:
        case Metric::TTree:
        case Metric::NTrees: {
            const RunRecord rec = track_run(p, cfg.eta, r.seed, {cfg.cap});
            r.certified = rec.certified;
            r.residual = std::max(rec.domination_residual, rec.completion_residual);
            r.steps = rec.total_steps;
            if (cfg.metric == Metric::TR) {
                r.value = static_cast<double>(rec.t_r_steps);
            } else if (cfg.metric == Metric::TTree) {
                r.value = static_cast<double>(rec.t_tree_steps);
            } else {
                r.value = static_cast<double>(rec.num_colors);
            }
            break;
        }
        case Metric::Degree: {
            const DegreeSample s =
                track_degree(p, cfg.eta, r.seed, cfg.hitting.start_length, cfg.cap);
            r.certified = s.certified;
            r.steps = s.steps;
            r.value = s.hits;
            break;
        }
        case Metric::Hitting: {
            const TorusInterval i0(TorusAngle(0.0), cfg.hitting.start_length);
            const HittingRecord h =
                run_until_exit(i0, cfg.hitting.low, cfg.hitting.high, p, r.seed, cfg.cap);
            r.certified = !h.capped;
            r.steps = h.steps;
            r.value = static_cast<double>(h.steps);
            break;
        }
        case Metric::SigmaStar: {
            const double len = cfg.sigma_star_start > 0.0 ? cfg.sigma_star_start : p.delta / 10.0;
            const TorusInterval i0(TorusAngle(0.0), len);
            const HittingRecord h = sigma_star(i0, p, r.seed, cfg.cap);
            r.certified = !h.capped;
            r.steps = h.steps;
            r.value = static_cast<double>(h.steps);
            break;
        }
        case Metric::ChainMoments: {
            ChainState s(TorusInterval(TorusAngle(0.0), cfg.hitting.start_length), r.seed);
            step_chain(s, p);
            const double diff = s.interval.length - cfg.hitting.start_length;
            r.certified = true;
            r.steps = 1;
            r.value = diff * diff;
            break;
        }
    }
    if (cfg.timing) {
        r.wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
    }
    return r;
}

std::vector<ReplicateResult> run_rows(const ExperimentConfig& cfg, const SlitParams& p) {
    std::vector<ReplicateResult> rows(cfg.replicates);
    std::atomic<std::uint64_t> next{0};
    const int workers = resolve_workers(cfg.workers);
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    const auto worker = [&] {
        try {
            for (;;) {
                const std::uint64_t i = next.fetch_add(1);
                if (i >= cfg.replicates) return;
                // Replicate i is a pure function of (cfg.seed, i); storing by
                // index keeps the output order scheduling-independent.
                rows[i] = run_one(cfg, p, i);
            }
        } catch (...) {
            const std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
        }
    };
    if (workers <= 1 || cfg.replicates <= 1) {
        worker();
    } else {
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);
    return rows;
}

void write_file_atomically(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp);
        out << content;
        if (!out) throw std::runtime_error("write failed for " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw std::runtime_error("rename to " + path + " failed: " + ec.message());
}

}  // namespace

const char* metric_name(Metric m) {
    switch (m) {
        case Metric::TR: return "t_r";
        case Metric::TTree: return "t_tree";
        case Metric::NTrees: return "n_trees";
        case Metric::Degree: return "degree";
        case Metric::Hitting: return "hitting";
        case Metric::SigmaStar: return "sigma_star";
        case Metric::ChainMoments: return "chain_moments";
    }
    return "unknown";
}

Metric metric_from_name(const std::string& name) {
    if (name == "t_r") return Metric::TR;
    if (name == "t_tree") return Metric::TTree;
    if (name == "n_trees") return Metric::NTrees;
    if (name == "degree") return Metric::Degree;
    if (name == "hitting") return Metric::Hitting;
    if (name == "sigma_star") return Metric::SigmaStar;
    if (name == "chain_moments") return Metric::ChainMoments;
    throw std::invalid_argument("unknown metric: " + name);
}

SummaryStats summarize(const std::vector<ReplicateResult>& rows, double eta) {
    SummaryStats s;
    s.residual_eta = eta;
    double sum = 0.0;
    for (const auto& r : rows) {
        if (!r.certified) {
            ++s.cap_hits;
            continue;
        }
        ++s.count;
        sum += r.value;
    }
    if (s.count == 0) return s;
    s.mean = sum / static_cast<double>(s.count);
    double ss = 0.0;
    for (const auto& r : rows) {
        if (!r.certified) continue;
        const double d = r.value - s.mean;
        ss += d * d;
    }
    if (s.count > 1) s.variance = ss / static_cast<double>(s.count - 1);
    s.stderror = std::sqrt(s.variance / static_cast<double>(s.count));
    s.ci95_low = s.mean - 1.96 * s.stderror;
    s.ci95_high = s.mean + 1.96 * s.stderror;
    return s;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    if (cfg.replicates == 0) throw std::invalid_argument("run_experiment: replicates == 0");
    ExperimentResult result;
    result.rows = run_rows(cfg, cfg.params);
    result.stats = summarize(result.rows, cfg.eta);
    if (!cfg.out_path.empty()) write_records(cfg, result.rows);
    const double failed = static_cast<double>(result.stats.cap_hits);
    if (failed > 0.01 * static_cast<double>(cfg.replicates)) {
        std::ostringstream msg;
        msg << "run_experiment: " << result.stats.cap_hits << " of " << cfg.replicates
            << " replicates uncertified (limit 1%)";
        throw std::runtime_error(msg.str());
    }
    return result;
}

SweepResult sweep_scaling(const ExperimentConfig& cfg) {
    if (cfg.sweep.size() < 3) throw std::invalid_argument("sweep_scaling: need >= 3 grid points");
    SweepResult result;
    std::vector<double> xs, ys;
    for (std::size_t g = 0; g < cfg.sweep.size(); ++g) {
        const SlitParams& p = cfg.sweep[g];
        ExperimentConfig point = cfg;
        point.params = p;
        point.sweep.clear();
        point.out_path.clear();
        // Decorrelate grid points while keeping each one reproducible.
        point.seed = derive_seed(cfg.seed, 0x10000ULL + g);
        ExperimentResult er;
        er.rows = run_rows(point, p);
        er.stats = summarize(er.rows, point.eta);
        if (er.stats.count == 0 || er.stats.mean <= 0.0) {
            throw std::runtime_error("sweep_scaling: non-positive mean at delta " +
                                     fmt_double(p.delta));
        }
        xs.push_back(std::log(p.delta));
        ys.push_back(std::log(er.stats.mean));
        result.points.push_back({p, er.stats});
    }
    const LineFit fit = fit_line(xs, ys);
    result.slope = fit.slope;
    result.intercept = fit.intercept;
    result.r_squared = fit.r_squared;
    return result;
}

TailResult tail_estimate(const ExperimentConfig& cfg) {
    const ExperimentResult er = run_experiment(cfg);
    const double d3 = cfg.params.delta * cfg.params.delta * cfg.params.delta;
    std::vector<double> values;
    values.reserve(er.rows.size());
    for (const auto& r : er.rows) {
        if (r.certified) values.push_back(r.value * d3);
    }
    std::sort(values.begin(), values.end());
    TailResult result;
    result.sample_count = values.size();
    if (values.empty()) return result;
    const std::size_t n = values.size();
    result.survival.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double surv = static_cast<double>(n - 1 - i) / static_cast<double>(n);
        result.survival.emplace_back(values[i], surv);
    }
    std::vector<double> xs, ys;
    for (const auto& [v, surv] : result.survival) {
        // Central quantile window [0.5, 0.95]: robust to the atom at small
        // values and to the sparse extreme tail.
        if (surv > 0.5 || surv < 0.05) continue;
        if (surv <= 0.0) continue;
        xs.push_back(v);
        ys.push_back(std::log(surv));
    }
    if (xs.size() >= 3) {
        const LineFit fit = fit_line(xs, ys);
        result.slope = fit.slope;
        result.intercept = fit.intercept;
        result.r_squared = fit.r_squared;
    }
    return result;
}

ZeroMassDecay zero_mass_decay(const ExperimentConfig& cfg, int k_max) {
    if (cfg.replicates == 0 || k_max < 1) {
        throw std::invalid_argument("zero_mass_decay: need replicates and k_max >= 1");
    }
    const std::size_t cols = static_cast<std::size_t>(k_max) + 1;
    std::vector<std::vector<double>> traces(cfg.replicates);
    std::atomic<std::uint64_t> next{0};
    const int workers = resolve_workers(cfg.workers);
    const auto worker = [&] {
        for (;;) {
            const std::uint64_t i = next.fetch_add(1);
            if (i >= cfg.replicates) return;
            Rng rng(derive_seed(cfg.seed, i));
            MarkedConfiguration m;
            auto& trace = traces[i];
            trace.resize(cols);
            trace[0] = m.zero_mass();
            for (int k = 1; k <= k_max; ++k) {
                m.apply_particle(rng.uniform_angle(), cfg.params);
                trace[static_cast<std::size_t>(k)] = m.zero_mass();
            }
        }
    };
    if (workers <= 1 || cfg.replicates <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    ZeroMassDecay result;
    result.replicates = cfg.replicates;
    result.mean_by_step.assign(cols, 0.0);
    // Fixed accumulation order: independent of thread scheduling.
    for (const auto& trace : traces) {
        for (std::size_t k = 0; k < cols; ++k) result.mean_by_step[k] += trace[k];
    }
    for (auto& v : result.mean_by_step) v /= static_cast<double>(cfg.replicates);
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < cols; ++k) {
        if (result.mean_by_step[k] <= 0.0) break;
        xs.push_back(static_cast<double>(k));
        ys.push_back(std::log(result.mean_by_step[k]));
    }
    if (xs.size() >= 2) result.fitted_rate = fit_line(xs, ys).slope;
    result.closed_form_rate = std::log(1.0 - 2.0 * std::asin(cfg.params.delta) / kPi);
    return result;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("fit_line: need >= 2 matching points");
    }
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return fit;
}

void write_records(const ExperimentConfig& cfg, const std::vector<ReplicateResult>& rows) {
    std::ostringstream out;
    const char* metric = metric_name(cfg.metric);
    if (cfg.format == "json") {
        for (const auto& r : rows) {
            nlohmann::ordered_json j;
            j["replicate"] = r.replicate;
            j["seed"] = r.seed;
            j["delta"] = cfg.params.delta;
            j["lambda"] = cfg.params.lambda;
            j["n_width"] = cfg.params.n_width;
            j["metric"] = metric;
            j["value"] = r.value;
            j["certified"] = r.certified;
            j["residual"] = r.residual;
            j["steps"] = r.steps;
            j["wall_ms"] = r.wall_ms;
            out << j.dump() << "\n";
        }
    } else if (cfg.format == "csv") {
        out << "replicate,seed,delta,lambda,n_width,metric,value,certified,residual,steps,"
               "wall_ms\n";
        for (const auto& r : rows) {
            out << r.replicate << "," << r.seed << "," << fmt_double(cfg.params.delta) << ","
                << fmt_double(cfg.params.lambda) << "," << fmt_double(cfg.params.n_width) << ","
                << metric << "," << fmt_double(r.value) << "," << (r.certified ? 1 : 0) << ","
                << fmt_double(r.residual) << "," << r.steps << "," << fmt_double(r.wall_ms)
                << "\n";
        }
    } else {
        throw std::invalid_argument("write_records: unknown format " + cfg.format);
    }
    write_file_atomically(cfg.out_path, out.str());
}

std::string summary_json(const ExperimentConfig& cfg, const SummaryStats& stats) {
    nlohmann::ordered_json j;
    j["metric"] = metric_name(cfg.metric);
    j["delta"] = cfg.params.delta;
    j["lambda"] = cfg.params.lambda;
    j["n_width"] = cfg.params.n_width;
    j["eta"] = cfg.eta;
    j["seed"] = cfg.seed;
    j["replicates_requested"] = cfg.replicates;
    j["replicates_used"] = stats.count;
    j["failures"] = stats.cap_hits;
    j["mean"] = stats.mean;
    j["variance"] = stats.variance;
    j["stderr"] = stats.stderror;
    j["ci95"] = {stats.ci95_low, stats.ci95_high};
    return j.dump(2) + "\n";
}

void write_summary_json(const std::string& path, const ExperimentConfig& cfg,
                        const SummaryStats& stats) {
    write_file_atomically(path, summary_json(cfg, stats));
}

}  // namespace chl
