#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "edgescope/config.hpp"
#include "edgescope/experiment/figures.hpp"
#include "edgescope/experiment/sweep.hpp"
#include "edgescope/io/csv.hpp"

namespace {

using namespace edgescope;

struct CommonFlags {
    std::string config;
    std::string out;
    std::uint64_t seed = 1;
    int jobs = 0;
    double threshold = kDefaultDivergenceThreshold;
    double lambda_rel = 1e-8;
    CLI::Option* config_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* out_opt = nullptr;
    CLI::Option* jobs_opt = nullptr;
    CLI::Option* threshold_opt = nullptr;
    CLI::Option* lambda_opt = nullptr;
};

void add_common_flags(CLI::App& app, CommonFlags& f) {
    f.config_opt = app.add_option("--config", f.config, "TOML or JSON configuration file");
    f.seed_opt = app.add_option("--seed", f.seed, "base seed; every random draw derives from it");
    f.out_opt = app.add_option("--out", f.out,
                               "output directory (fallback: config [run].out, then $EDGESCOPE_OUT)");
    f.jobs_opt = app.add_option("--jobs", f.jobs, "parallel point evaluations (0 = available cores)");
    f.threshold_opt =
        app.add_option("--threshold", f.threshold, "divergence threshold on node magnitudes");
    f.lambda_opt = app.add_option("--lambda-rel", f.lambda_rel, "relative ridge regularization");
}

/// Config file -> flag overrides -> output-dir fallback chain.
RunConfig resolve_config(const CommonFlags& f) {
    RunConfig cfg = f.config.empty() ? default_run_config() : load_run_config(f.config);
    if (f.seed_opt->count() > 0) apply_base_seed(cfg, f.seed);
    if (f.jobs_opt->count() > 0) {
        if (f.jobs < 0) throw ConfigError("--jobs: must be >= 0 (0 = auto)");
        cfg.sweep.jobs = f.jobs;
    }
    if (f.threshold_opt->count() > 0) {
        if (!(f.threshold > 0)) throw ConfigError("--threshold: must be positive");
        cfg.sweep.threshold = f.threshold;
    }
    if (f.lambda_opt->count() > 0) {
        if (!(f.lambda_rel >= 0)) throw ConfigError("--lambda-rel: must be non-negative");
        cfg.sweep.lambda_rel = f.lambda_rel;
    }
    std::string out = f.out_opt->count() > 0 ? f.out : cfg.out_dir;
    if (out.empty()) {
        const char* env = std::getenv("EDGESCOPE_OUT");
        if (env != nullptr && *env != '\0') out = env;
    }
    if (out.empty()) out = "edgescope_out";
    cfg.out_dir = out;
    if (cfg.sweep.jobs == 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        cfg.sweep.jobs = hw > 0 ? static_cast<int>(hw) : 1;
    }
    return cfg;
}

std::string join(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

void write_resolved(const RunConfig& cfg) {
    write_text_file(join(cfg.out_dir, "resolved-config.toml"), config_to_toml(cfg));
}

void append_record_fields(std::ostringstream& out, const SweepRecord& r) {
    out << "stable=" << (r.stable ? 1 : 0) << "\n";
    out << "delta_rc=" << format_double(r.delta_rc) << "\n";
    out << "delta_tx=" << format_double(r.delta_tx) << "\n";
    out << "lambda1=" << format_double(r.lambda1) << "\n";
    out << "lambda2=" << format_double(r.lambda2) << "\n";
    out << "lambda3=" << format_double(r.lambda3) << "\n";
    out << "lambda4=" << format_double(r.lambda4) << "\n";
    out << "max_local=" << format_double(r.max_local) << "\n";
    out << "d_ky=" << format_double(r.d_ky) << "\n";
    out << "ky_j=" << r.ky_j << "\n";
    out << "H=" << format_double(r.H) << "\n";
    out << "n_symbols=" << r.n_symbols << "\n";
    out << "psi_fwd=" << format_double(r.psi_fwd) << "\n";
    out << "psi_rev=" << format_double(r.psi_rev) << "\n";
    out << "delta_f=" << format_double(r.delta_f) << "\n";
}

int cmd_simulate(const RunConfig& cfg, bool full_states) {
    write_resolved(cfg);
    const SweepConfig& s = cfg.sweep;
    const std::uint64_t seed = s.seeds.front();
    const DriverTrajectory driver = make_driver(s, seed);
    const NetworkSpec net = build_network(seed, s.M, s.sigma, s.density);
    const double value = s.swept == "alpha" ? s.alpha : s.p1;
    const SweepRecord rec = evaluate_point(s, net, driver, value, 0);

    std::vector<std::vector<CsvCell>> rows;
    const long T = driver.input.size();
    for (long n = 0; n < T; ++n) {
        rows.push_back({n * driver.dt, driver.states(n, 0), driver.states(n, 1),
                        driver.states(n, 2), driver.input(n), driver.target(n)});
    }
    write_csv(join(cfg.out_dir, "driver_trajectory.csv"), {"t", "x1", "x2", "x3", "s", "g"}, rows);

    const ReservoirRun run = run_reservoir(net, s.reservoir_params(), driver.input,
                                           Vector::Zero(s.M), s.threshold);
    const int n_cols = full_states ? s.M : std::min(s.M, 10);
    rows.clear();
    std::vector<std::string> header = {"n"};
    for (int j = 0; j < n_cols; ++j) header.push_back("r" + std::to_string(j + 1));
    for (long n = 0; n < run.states.rows(); ++n) {
        std::vector<CsvCell> row = {n};
        for (int j = 0; j < n_cols; ++j) row.push_back(run.states(n, j));
        rows.push_back(row);
    }
    write_csv(join(cfg.out_dir, "reservoir_states.csv"), header, rows);

    std::ostringstream report;
    report << "seed=" << seed << "\n";
    report << "reservoir=" << (s.reservoir_kind == ReservoirKind::ODE ? "ode" : "map") << "\n";
    report << "driver=" << (s.driver.kind == DriverKind::Lorenz ? "lorenz" : "map3d") << "\n";
    report << "nodes=" << s.M << "\n";
    report << "sigma=" << format_double(s.sigma) << "\n";
    report << "param=" << s.swept << "\n";
    report << "value=" << format_double(value) << "\n";
    append_record_fields(report, rec);
    report << "full_run_stable=" << (run.stable ? 1 : 0) << "\n";
    report << "full_run_divergence_step=" << run.divergence_step << "\n";
    write_text_file(join(cfg.out_dir, "report.txt"), report.str());

    std::cout << "simulate: seed " << seed << ", " << (rec.stable ? "stable" : "UNSTABLE")
              << ", delta_tx = " << format_double(rec.delta_tx) << "\n";
    std::cout << "wrote " << join(cfg.out_dir, "report.txt") << "\n";
    return 0;
}

int cmd_sweep(const RunConfig& cfg) {
    write_resolved(cfg);
    const std::vector<SweepRecord> records = run_sweep(cfg.sweep);
    const std::string csv = join(cfg.out_dir, "sweep_records.csv");
    write_sweep_csv(csv, records);

    const auto groups = group_by_seed(records);
    const std::string& x = cfg.sweep.swept;
    const DiagnosticsToggles& on = cfg.sweep.diag.enable;
    write_seed_svg(join(cfg.out_dir, "sweep_error.svg"), groups, &SweepRecord::delta_tx,
                   "testing error vs " + x, x, "delta_tx", true);
    if (on.lyapunov)
        write_seed_pair_svg(join(cfg.out_dir, "sweep_lyapunov.svg"), groups, &SweepRecord::lambda1,
                            "lambda_max", &SweepRecord::max_local, "max local",
                            "Lyapunov exponents vs " + x, x, "exponent");
    if (on.entropy)
        write_seed_svg(join(cfg.out_dir, "sweep_entropy.svg"), groups, &SweepRecord::H,
                       "ordinal entropy vs " + x, x, "H", false);
    if (on.continuity)
        write_seed_pair_svg(join(cfg.out_dir, "sweep_continuity.svg"), groups,
                            &SweepRecord::psi_fwd, "psi forward", &SweepRecord::psi_rev,
                            "psi reverse", "continuity vs " + x, x, "psi");
    if (on.spectral)
        write_seed_svg(join(cfg.out_dir, "sweep_spectral.svg"), groups, &SweepRecord::delta_f,
                       "spectral difference vs " + x, x, "delta_f", false);

    std::cout << "sweep: " << records.size() << " records over " << groups.size() << " seeds\n";
    std::cout << "wrote " << csv << "\n";
    return 0;
}

int cmd_edge(const RunConfig& cfg) {
    write_resolved(cfg);
    const double edge = find_edge(cfg.sweep, cfg.edge_tolerance);
    std::ostringstream out;
    out << "param=" << cfg.sweep.swept << "\n";
    out << "seed=" << cfg.sweep.seeds.front() << "\n";
    out << "tolerance=" << format_double(cfg.edge_tolerance) << "\n";
    out << "edge=" << format_double(edge) << "\n";
    write_text_file(join(cfg.out_dir, "edge.txt"), out.str());
    std::cout << "edge " << cfg.sweep.swept << " = " << format_double(edge) << " (tolerance "
              << format_double(cfg.edge_tolerance) << ")\n";
    return 0;
}

int cmd_reproduce(const CommonFlags& f, const std::string& fig) {
    if (f.config_opt->count() + f.threshold_opt->count() + f.lambda_opt->count() > 0)
        throw ConfigError(
            "reproduce runs fixed parameter presets; --config/--threshold/--lambda-rel do not "
            "apply (use --seed, --out, --jobs)");
    const auto& ids = figure_ids();
    if (std::find(ids.begin(), ids.end(), fig) == ids.end())
        throw ConfigError("unknown figure id: " + fig + " (expected fig1..fig8)");

    RunConfig cfg = resolve_config(f);
    const FigureResult res = reproduce_figure(fig, cfg.out_dir, cfg.base_seed, cfg.sweep.jobs);
    std::cout << res.id << ": verdict=" << (res.pass ? "pass" : "fail") << "\n";
    for (const std::string& file : res.files) std::cout << "wrote " << file << "\n";
    return 0;
}

int cmd_validate(const std::string& path) {
    load_run_config(path);
    std::cout << "ok: " << path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"edgescope: polynomial reservoir computers at the edge of stability"};
    app.require_subcommand(1);

    CommonFlags common;
    add_common_flags(app, common);

    CLI::App* sim = app.add_subcommand("simulate", "one driven run plus a diagnostics report");
    bool full_states = false;
    sim->add_flag("--full-states", full_states, "write every node column, not just the first 10");
    sim->fallthrough();

    CLI::App* sweep = app.add_subcommand("sweep", "evaluate a parameter grid across seeds");
    sweep->fallthrough();

    CLI::App* edge = app.add_subcommand("edge", "bisect the stability boundary");
    edge->fallthrough();

    CLI::App* repro = app.add_subcommand("reproduce", "run a preset figure reproduction");
    std::string fig;
    repro->add_option("figure", fig, "figure id, fig1..fig8")->required();
    repro->fallthrough();

    CLI::App* validate = app.add_subcommand("validate-config", "parse and validate a config file");
    std::string validate_path;
    validate->add_option("path", validate_path, "config file to check (or use --config)");
    validate->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e);
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e);
        return 0;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (app.got_subcommand(sim)) return cmd_simulate(resolve_config(common), full_states);
        if (app.got_subcommand(sweep)) return cmd_sweep(resolve_config(common));
        if (app.got_subcommand(edge)) return cmd_edge(resolve_config(common));
        if (app.got_subcommand(repro)) return cmd_reproduce(common, fig);
        if (app.got_subcommand(validate)) {
            if (validate_path.empty()) validate_path = common.config;
            if (validate_path.empty()) {
                std::cerr << "config error: validate-config needs a path or --config\n";
                return 1;
            }
            return cmd_validate(validate_path);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
