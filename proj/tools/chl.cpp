// chl: command-line driver for the cylindrical slit-aggregation laboratory.
//
// Subcommands: params, chain, oracle, simulate, sweep, tail, trees, degree,
// render. Every run is fully determined by --seed; file outputs are written
// atomically (temp file + rename).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chl/chl_process.hpp"
#include "chl/interval_chain.hpp"
#include "chl/marked_config.hpp"
#include "chl/montecarlo.hpp"
#include "chl/quadrature.hpp"
#include "chl/slit_map.hpp"

namespace {

using nlohmann::ordered_json;

struct CommonFlags {
    double lambda = 0.0;
    double n_width = 0.0;
    double delta = 0.0;
    std::uint64_t replicates = 1000;
    std::uint64_t seed = 0;
    double eta = 1e-3;
    std::uint64_t cap = 100'000'000ULL;
    std::string out;
    std::string format = "csv";
    int workers = 0;
    bool timing = false;
    std::string config;
};

// Shared flag block; --delta is exclusive with the lambda/n-width pair.
void add_common(CLI::App* cmd, CommonFlags& f, bool with_experiment_flags = true) {
    auto* lambda = cmd->add_option("--lambda", f.lambda, "Slit length on the cylinder");
    auto* n_width = cmd->add_option("--n-width", f.n_width, "Cylinder half-perimeter N");
    auto* delta = cmd->add_option("--delta", f.delta, "Rescaled slit parameter in (0,1)");
    delta->excludes(lambda)->excludes(n_width);
    lambda->needs(n_width);
    n_width->needs(lambda);
    if (with_experiment_flags) {
        cmd->add_option("--replicates", f.replicates, "Number of replicates");
        cmd->add_option("--seed", f.seed, "Experiment seed (fully determines output)");
        cmd->add_option("--eta", f.eta, "Certification level in (0,1)");
        cmd->add_option("--cap", f.cap, "Per-replicate step cap");
        cmd->add_option("--out", f.out, "Record/output file path");
        cmd->add_option("--format", f.format, "Record format")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--workers", f.workers, "Worker threads (0 = hardware)");
        cmd->add_flag("--timing", f.timing, "Record wall-clock times (breaks byte determinism)");
    }
    cmd->add_option("--config", f.config,
                    "Flat key=value config file mirroring the common flag names; "
                    "command-line flags win");
}

std::string trim(const std::string& s) {
    const auto l = s.find_first_not_of(" \t\r");
    if (l == std::string::npos) return "";
    const auto r = s.find_last_not_of(" \t\r");
    return s.substr(l, r - l + 1);
}

// Applies a flat key=value config file to the common flags. A key is ignored
// when its flag was already given on the command line; geometry keys are
// ignored as a block if any geometry flag was given, so the exclusivity of
// --delta vs --lambda/--n-width cannot be bypassed by mixing sources.
void apply_config(const CLI::App* cmd, CommonFlags& f) {
    if (f.config.empty()) return;
    std::ifstream in(f.config);
    if (!in) throw CLI::ValidationError("config", "cannot open " + f.config);
    const bool geometry_on_cli =
        cmd->count("--delta") || cmd->count("--lambda") || cmd->count("--n-width");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        const auto where = [&] { return f.config + ":" + std::to_string(lineno); };
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            throw CLI::ValidationError("config", where() + ": expected key=value");
        }
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        const CLI::Option* opt = cmd->get_option_no_throw("--" + key);
        if (opt == nullptr) {
            throw CLI::ValidationError("config", where() + ": unknown key '" + key + "'");
        }
        const bool geometry_key = key == "delta" || key == "lambda" || key == "n-width";
        if (geometry_key ? geometry_on_cli : opt->count() > 0) continue;
        try {
            if (key == "delta") f.delta = std::stod(val);
            else if (key == "lambda") f.lambda = std::stod(val);
            else if (key == "n-width") f.n_width = std::stod(val);
            else if (key == "replicates") f.replicates = std::stoull(val);
            else if (key == "seed") f.seed = std::stoull(val);
            else if (key == "eta") f.eta = std::stod(val);
            else if (key == "cap") f.cap = std::stoull(val);
            else if (key == "out") f.out = val;
            else if (key == "format") {
                if (val != "csv" && val != "json") {
                    throw CLI::ValidationError("config", where() + ": format must be csv or json");
                }
                f.format = val;
            } else if (key == "workers") f.workers = std::stoi(val);
            else if (key == "timing") f.timing = val == "true" || val == "1";
            else throw CLI::ValidationError("config", where() + ": key '" + key +
                                                          "' is not configurable from a file");
        } catch (const std::invalid_argument&) {
            throw CLI::ValidationError("config", where() + ": bad value '" + val + "'");
        } catch (const std::out_of_range&) {
            throw CLI::ValidationError("config", where() + ": value out of range '" + val + "'");
        }
    }
}

chl::SlitParams resolve_params(const CommonFlags& f) {
    if (f.delta > 0.0) return chl::make_params_from_delta(f.delta);
    if (f.lambda > 0.0 && f.n_width > 0.0) return chl::make_params(f.lambda, f.n_width);
    throw CLI::ValidationError("params", "need --delta or both --lambda and --n-width");
}

chl::ExperimentConfig make_config(const CommonFlags& f, chl::Metric metric) {
    chl::ExperimentConfig cfg;
    cfg.params = resolve_params(f);
    cfg.replicates = f.replicates;
    cfg.seed = f.seed;
    cfg.eta = f.eta;
    cfg.cap = f.cap;
    cfg.metric = metric;
    cfg.workers = f.workers;
    cfg.out_path = f.out;
    cfg.format = f.format;
    cfg.timing = f.timing;
    return cfg;
}

ordered_json params_json(const chl::SlitParams& p) {
    ordered_json j;
    j["lambda"] = p.lambda;
    j["n_width"] = p.n_width;
    j["delta"] = p.delta;
    j["a_delta"] = p.a_delta;
    j["slit_height"] = p.slit_height;
    return j;
}

void print_summary(const chl::ExperimentConfig& cfg, const chl::SummaryStats& stats) {
    std::cout << chl::summary_json(cfg, stats);
}

int cmd_params(const CommonFlags& f) {
    std::cout << params_json(resolve_params(f)).dump(2) << "\n";
    return 0;
}

int cmd_chain(const CommonFlags& f, double low, double high, double start) {
    chl::ExperimentConfig cfg = make_config(f, chl::Metric::Hitting);
    cfg.hitting = {low, high, start};
    if (!(0.0 < low && low <= start && start <= high && high < chl::kTwoPi)) {
        throw CLI::ValidationError("chain", "need 0 < low <= start <= high < 2pi");
    }
    const chl::ExperimentResult res = chl::run_experiment(cfg);
    print_summary(cfg, res.stats);
    return 0;
}

int cmd_oracle(const CommonFlags& f, const std::string& kind, double a) {
    const chl::SlitParams p = resolve_params(f);
    const double d3 = p.delta * p.delta * p.delta;
    ordered_json j;
    j["kind"] = kind;
    j["delta"] = p.delta;
    if (kind == "l2") {
        const double val = chl::l_squared_integral(p);
        j["value"] = val;
        j["reference"] = 32.0 / 3.0 * d3;
        j["ratio_to_32_3_delta3"] = val / (32.0 / 3.0 * d3);
    } else if (kind == "drift") {
        j["a"] = a;
        j["value"] = chl::drift_quadrature(a, p);
        j["reference"] = 0.0;
    } else if (kind == "second-moment") {
        const double val = chl::second_moment_quadrature(a, p);
        j["a"] = a;
        j["value"] = val;
        j["reference"] = 64.0 / 3.0 * d3;
        j["ratio_to_64_3_delta3"] = val / (64.0 / 3.0 * d3);
    } else if (kind == "halving") {
        j["a"] = a;
        j["value"] = chl::halving_measure(a, p);
        j["lower_bound"] = (p.delta - a) / chl::kTwoPi;
    } else {
        throw CLI::ValidationError("oracle",
                                   "kind must be one of l2, drift, second-moment, halving");
    }
    std::cout << j.dump(2) << "\n";
    return 0;
}

ordered_json run_record_json(const chl::RunRecord& rec) {
    ordered_json j;
    j["delta"] = rec.delta;
    j["lambda"] = rec.lambda;
    j["n_width"] = rec.n_width;
    j["eta"] = rec.eta;
    j["seed"] = rec.seed;
    j["t_r_steps"] = rec.t_r_steps;
    j["t_tree_steps"] = rec.t_tree_steps;
    j["upsilon_time"] = rec.upsilon_time;
    j["omega_time"] = rec.omega_time;
    j["num_colors"] = rec.num_colors;
    j["dominant_color"] = rec.dominant_color;
    j["domination_residual"] = rec.domination_residual;
    j["completion_residual"] = rec.completion_residual;
    j["certified"] = rec.certified;
    j["total_steps"] = rec.total_steps;
    j["capped"] = rec.capped;
    return j;
}

int cmd_simulate(const CommonFlags& f) {
    const chl::SlitParams p = resolve_params(f);
    chl::SimulateOptions opt;
    opt.cap = f.cap;
    const chl::RunRecord rec = chl::simulate(p, f.eta, f.seed, opt);
    const ordered_json j = run_record_json(rec);
    if (!f.out.empty()) {
        const std::string tmp = f.out + ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw std::runtime_error("cannot open " + tmp);
            out << j.dump(2) << "\n";
        }
        std::filesystem::rename(tmp, f.out);
    }
    std::cout << j.dump(2) << "\n";
    return rec.certified ? 0 : 1;
}

std::vector<chl::SlitParams> parse_grid(const std::vector<double>& deltas) {
    if (deltas.size() < 3) {
        throw CLI::ValidationError("sweep", "need a --deltas grid with >= 3 points");
    }
    std::vector<chl::SlitParams> grid;
    grid.reserve(deltas.size());
    for (double d : deltas) grid.push_back(chl::make_params_from_delta(d));
    return grid;
}

int cmd_sweep(const CommonFlags& f, const std::string& metric, const std::vector<double>& deltas,
              double low, double high, double start) {
    chl::ExperimentConfig cfg;
    cfg.replicates = f.replicates;
    cfg.seed = f.seed;
    cfg.eta = f.eta;
    cfg.cap = f.cap;
    cfg.metric = chl::metric_from_name(metric);
    cfg.hitting = {low, high, start};
    cfg.workers = f.workers;
    cfg.sweep = parse_grid(deltas);
    cfg.params = cfg.sweep.front();
    const chl::SweepResult res = chl::sweep_scaling(cfg);
    ordered_json j;
    j["metric"] = metric;
    j["slope"] = res.slope;
    j["intercept"] = res.intercept;
    j["r_squared"] = res.r_squared;
    j["points"] = ordered_json::array();
    for (const auto& pt : res.points) {
        ordered_json q;
        q["delta"] = pt.params.delta;
        q["mean"] = pt.stats.mean;
        q["stderr"] = pt.stats.stderror;
        q["count"] = pt.stats.count;
        q["failures"] = pt.stats.cap_hits;
        j["points"].push_back(q);
    }
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_tail(const CommonFlags& f) {
    chl::ExperimentConfig cfg = make_config(f, chl::Metric::TR);
    cfg.out_path.clear();  // --out holds the survival table instead
    const chl::TailResult res = chl::tail_estimate(cfg);
    if (!f.out.empty()) {
        std::ostringstream table;
        table << "value,survival\n";
        for (const auto& [v, s] : res.survival) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", v, s);
            table << buf;
        }
        const std::string tmp = f.out + ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw std::runtime_error("cannot open " + tmp);
            out << table.str();
        }
        std::filesystem::rename(tmp, f.out);
    }
    ordered_json j;
    j["samples"] = res.sample_count;
    j["slope"] = res.slope;
    j["intercept"] = res.intercept;
    j["r_squared"] = res.r_squared;
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_experiment(const CommonFlags& f, chl::Metric metric, double window) {
    chl::ExperimentConfig cfg = make_config(f, metric);
    if (metric == chl::Metric::Degree) cfg.hitting.start_length = window;
    const chl::ExperimentResult res = chl::run_experiment(cfg);
    print_summary(cfg, res.stats);
    return 0;
}

int cmd_render(const CommonFlags& f, int samples) {
    if (f.out.empty()) throw CLI::ValidationError("render", "--out is required");
    const chl::SlitParams p = resolve_params(f);
    chl::SimulateOptions opt;
    opt.cap = f.cap;
    opt.render = true;
    opt.samples_per_slit = samples;
    const chl::RunRecord rec = chl::simulate(p, f.eta, f.seed, opt);
    chl::render_svg(rec, f.out);
    std::cout << run_record_json(rec).dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cylindrical slit-aggregation simulation laboratory"};
    app.require_subcommand(1);

    CommonFlags f;

    auto* params = app.add_subcommand("params", "Print the resolved slit geometry as JSON");
    add_common(params, f, false);

    auto* chain = app.add_subcommand(
        "chain", "Interval-chain hitting experiment: steps to exit (low, high)");
    add_common(chain, f);
    double low = chl::kPi / 3.0, high = 5.0 * chl::kPi / 3.0, start = chl::kPi;
    chain->add_option("--low", low, "Lower length barrier");
    chain->add_option("--high", high, "Upper length barrier");
    chain->add_option("--start", start, "Initial interval length");

    auto* oracle =
        app.add_subcommand("oracle", "Quadrature oracles: l2, drift, second-moment, halving");
    add_common(oracle, f, false);
    std::string oracle_kind;
    double oracle_a = chl::kPi;
    oracle->add_option("kind", oracle_kind, "Oracle to evaluate")->required();
    oracle->add_option("--a", oracle_a, "Interval length argument");

    auto* simulate =
        app.add_subcommand("simulate", "One full certified run; prints the run record as JSON");
    add_common(simulate, f);

    auto* sweep = app.add_subcommand("sweep", "Scaling-exponent sweep over a delta grid");
    add_common(sweep, f);
    std::string sweep_metric = "t_r";
    std::vector<double> sweep_deltas;
    sweep->add_option("--metric", sweep_metric,
                      "Metric: t_r, t_tree, n_trees, degree, hitting, sigma_star");
    sweep->add_option("--deltas", sweep_deltas, "Delta grid (>= 3 points)")->delimiter(',');
    sweep->add_option("--low", low, "Hitting: lower barrier");
    sweep->add_option("--high", high, "Hitting: upper barrier");
    sweep->add_option("--start", start, "Hitting: initial length");

    auto* tail = app.add_subcommand(
        "tail", "Survival table and log-linear tail fit of normalized one-arm times");
    add_common(tail, f);

    auto* trees = app.add_subcommand("trees", "Distribution of the final number of trees");
    add_common(trees, f);

    auto* degree = app.add_subcommand("degree", "Direct-attachment count of one particle window");
    add_common(degree, f);
    double degree_window = 0.0;
    degree->add_option("--window", degree_window,
                       "Tracked window length (default: one particle's arc)");

    auto* render = app.add_subcommand("render", "Render one run as an SVG cluster picture");
    add_common(render, f);
    int render_samples = 16;
    render->add_option("--samples", render_samples, "Samples per slit spine");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        apply_config(app.get_subcommands().front(), f);
        if (*params) return cmd_params(f);
        if (*chain) return cmd_chain(f, low, high, start);
        if (*oracle) return cmd_oracle(f, oracle_kind, oracle_a);
        if (*simulate) return cmd_simulate(f);
        if (*sweep) return cmd_sweep(f, sweep_metric, sweep_deltas, low, high, start);
        if (*tail) return cmd_tail(f);
        if (*trees) return cmd_experiment(f, chl::Metric::NTrees, 0.0);
        if (*degree) return cmd_experiment(f, chl::Metric::Degree, degree_window);
        if (*render) return cmd_render(f, render_samples);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
