#include "edgescope/experiment/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "edgescope/diagnostics/entropy.hpp"
#include "edgescope/diagnostics/lyapunov.hpp"
#include "edgescope/diagnostics/spectral.hpp"
#include "edgescope/diagnostics/tangent.hpp"
#include "edgescope/io/csv.hpp"

namespace edgescope {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

ReservoirParams params_with(const SweepConfig& cfg, double value) {
    ReservoirParams p = cfg.reservoir_params();
    if (cfg.swept == "p1")
        p.p1 = value;
    else if (cfg.swept == "alpha")
        p.alpha = value;
    else
        throw std::invalid_argument("sweep: swept parameter must be 'p1' or 'alpha'");
    return p;
}

long train_length(const SweepConfig& cfg) { return cfg.train_window.discard + cfg.train_window.fit; }
long test_length(const SweepConfig& cfg) { return cfg.test_window.discard + cfg.test_window.fit; }

ReservoirRun run_segment(const SweepConfig& cfg, const NetworkSpec& net, const ReservoirParams& p,
                         const DriverTrajectory& driver, long offset, long length) {
    const Vector s = driver.input.segment(offset, length);
    const Vector r0 = Vector::Zero(net.M);
    return run_reservoir(net, p, s, r0, cfg.threshold);
}

/// Largest conditional exponent of the training segment; +inf when unstable.
double lambda1_at(const SweepConfig& cfg, const NetworkSpec& net, const DriverTrajectory& driver,
                  double value) {
    const ReservoirParams p = params_with(cfg, value);
    const ReservoirRun run = run_segment(cfg, net, p, driver, 0, train_length(cfg));
    if (!run.stable) return kInf;
    LyapunovOptions opt;
    opt.k = 1;
    opt.transient_exclude = cfg.train_window.discard;
    opt.with_max_local = false;
    if (p.kind == ReservoirKind::ODE) {
        OdeReservoirTangent sys(net, p, run.states, run.input_used);
        return lyapunov_report(sys, opt).exponents[0];
    }
    MapReservoirTangent sys(net, p, run.states);
    return lyapunov_report(sys, opt).exponents[0];
}

/// Lyapunov exponents of the drive itself over the training segment,
/// rescaled into the reservoir's time basis.  The two systems advance in
/// lockstep (one drive sample per reservoir step), so a drive exponent per
/// unit drive time corresponds to tau_d / tau_r per unit reservoir time.
std::vector<double> drive_exponents(const SweepConfig& cfg, const DriverTrajectory& driver,
                                    long t1, long discard) {
    LyapunovOptions opt;
    opt.k = 3;
    opt.transient_exclude = discard;
    opt.with_max_local = false;
    std::vector<double> exps;
    double tau_d = 1.0;
    if (cfg.driver.kind == DriverKind::Lorenz) {
        LorenzTangent sys(driver.states.topRows(t1), cfg.driver.c1, cfg.driver.c2, cfg.driver.c3,
                          driver.dt);
        exps = lyapunov_report(sys, opt).exponents;
        tau_d = driver.dt;
    } else {
        Map3dTangent sys(t1 - 1);
        exps = lyapunov_report(sys, opt).exponents;
    }
    const double tau_r = cfg.reservoir_kind == ReservoirKind::ODE ? cfg.reservoir_dt : 1.0;
    for (double& e : exps) e *= tau_d / tau_r;
    return exps;
}

void parallel_for(long n, int jobs, const std::function<void(long)>& fn) {
    if (jobs <= 1 || n <= 1) {
        for (long i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<long> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    const int n_threads = static_cast<int>(std::min<long>(jobs, n));
    std::vector<std::thread> workers;
    workers.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) {
        workers.emplace_back([&]() {
            for (long i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                try {
                    fn(i);
                } catch (...) {
                    const std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& w : workers) w.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace

ReservoirParams SweepConfig::reservoir_params() const {
    ReservoirParams p;
    p.kind = reservoir_kind;
    p.p1 = p1;
    p.p2 = p2;
    p.p3 = p3;
    p.alpha = alpha;
    p.dt = reservoir_dt;
    return p;
}

long SweepConfig::driver_steps() const {
    return train_window.discard + train_window.fit + test_window.discard + test_window.fit;
}

DriverTrajectory make_driver(const SweepConfig& cfg, std::uint64_t seed) {
    const long n = cfg.driver_steps();
    DriverTrajectory traj =
        cfg.driver.kind == DriverKind::Lorenz
            ? lorenz_trajectory(n, cfg.driver.transient, seed, cfg.driver.c1, cfg.driver.c2,
                                cfg.driver.c3, cfg.driver.dt)
            : map3d_trajectory(n, cfg.driver.transient, seed);
    if (cfg.driver.normalize_target) traj.target = normalize_input(traj.target);
    return traj;
}

bool probe_stable(const SweepConfig& cfg, const NetworkSpec& net, const DriverTrajectory& driver,
                  double value) {
    const ReservoirParams p = params_with(cfg, value);
    const ReservoirRun train = run_segment(cfg, net, p, driver, 0, train_length(cfg));
    if (!train.stable) return false;
    const ReservoirRun test = run_segment(cfg, net, p, driver, train_length(cfg), test_length(cfg));
    return test.stable;
}

SweepRecord evaluate_point(const SweepConfig& cfg, const NetworkSpec& net,
                           const DriverTrajectory& driver, double value, long point_index) {
    SweepRecord rec;
    rec.seed = net.seed;
    rec.param_value = value;
    rec.delta_rc = kInf;
    rec.delta_tx = kInf;
    rec.lambda1 = rec.lambda2 = rec.lambda3 = rec.lambda4 = kNaN;
    rec.max_local = kNaN;
    rec.d_ky = kNaN;
    rec.ky_j = -1;
    rec.H = kNaN;
    rec.n_symbols = -1;
    rec.psi_fwd = rec.psi_rev = kNaN;
    rec.delta_f = kNaN;

    const long t1 = train_length(cfg);
    const long t2 = test_length(cfg);
    const ReservoirParams params = params_with(cfg, value);
    const ReservoirRun run_train = run_segment(cfg, net, params, driver, 0, t1);
    if (!run_train.stable) {
        rec.stable = false;
        return rec;
    }

    const Vector g_train = driver.target.head(t1);
    const TrainResult trained =
        train_readout(run_train, g_train, cfg.lambda_rel, cfg.train_window, cfg.bias_column);
    rec.delta_rc = trained.delta_rc;

    const ReservoirRun run_test = run_segment(cfg, net, params, driver, t1, t2);
    ReadoutModel test_model = trained.model;
    test_model.window = cfg.test_window;
    rec.delta_tx = evaluate_readout(test_model, run_test, driver.target.segment(t1, t2));
    rec.stable = run_test.stable;
    if (!rec.stable) return rec;

    const DiagnosticsToggles& on = cfg.diag.enable;
    const long discard = cfg.train_window.discard;
    const long fit = cfg.train_window.fit;

    if (on.any_tangent()) {
        LyapunovOptions opt;
        opt.k = on.lyapunov ? std::min(cfg.diag.lyapunov_k, net.M) : 1;
        opt.transient_exclude = discard;
        opt.with_max_local = on.max_local;
        LyapunovReport report;
        if (params.kind == ReservoirKind::ODE) {
            OdeReservoirTangent sys(net, params, run_train.states, run_train.input_used);
            report = lyapunov_report(sys, opt);
        } else {
            MapReservoirTangent sys(net, params, run_train.states);
            report = lyapunov_report(sys, opt);
        }
        if (on.lyapunov) {
            const auto& e = report.exponents;
            rec.lambda1 = e.size() > 0 ? e[0] : kNaN;
            rec.lambda2 = e.size() > 1 ? e[1] : kNaN;
            rec.lambda3 = e.size() > 2 ? e[2] : kNaN;
            rec.lambda4 = e.size() > 3 ? e[3] : kNaN;
            // The recorded dimension is that of the joint drive+reservoir
            // system: the drive exponents cap the conditional ones from
            // below, so the dimension starts at the drive attractor's value
            // and rises as the reservoir exponents climb toward zero.
            std::vector<double> combined = drive_exponents(cfg, driver, t1, discard);
            combined.insert(combined.end(), e.begin(), e.end());
            std::sort(combined.begin(), combined.end(), std::greater<>());
            const KaplanYorkeResult ky = kaplan_yorke(combined);
            rec.d_ky = ky.d_ky;
            rec.ky_j = ky.j;
        }
        if (on.max_local) rec.max_local = report.max_local;
    }

    if (on.entropy) {
        const EntropyReport er =
            ordinal_entropy(run_train.states.middleRows(discard, fit), cfg.diag.entropy_window);
        rec.H = er.H;
        rec.n_symbols = er.n_symbols;
    }

    if (on.continuity) {
        const Matrix x = driver.states.middleRows(discard, fit);
        const Matrix y = run_train.states.middleRows(discard, fit);
        ContinuityParams cp = cfg.diag.continuity;
        cp.seed = mix_seeds(mix_seeds(cfg.diag.continuity.seed, net.seed),
                            static_cast<std::uint64_t>(2 * point_index));
        rec.psi_fwd = continuity_stat(x, y, cp, ContinuityDirection::Forward).psi;
        cp.seed = mix_seeds(mix_seeds(cfg.diag.continuity.seed, net.seed),
                            static_cast<std::uint64_t>(2 * point_index + 1));
        rec.psi_rev = continuity_stat(x, y, cp, ContinuityDirection::Reverse).psi;
    }

    if (on.spectral) {
        const Vector g_fit = g_train.segment(discard, fit);
        rec.delta_f = spectral_difference(g_fit, run_train.states.middleRows(discard, fit),
                                          cfg.diag.spectral_prose_variant)
                          .delta_f;
    }
    return rec;
}

std::vector<double> resolve_grid(const SweepConfig& cfg, const NetworkSpec& net,
                                 const DriverTrajectory& driver) {
    const auto linspace = [](double lo, double hi, int n) {
        std::vector<double> v;
        v.reserve(n);
        if (n == 1) {
            v.push_back(lo);
            return v;
        }
        for (int i = 0; i < n; ++i)
            v.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
        return v;
    };

    if (!cfg.grid.auto_range) {
        if (cfg.grid.n_points == 0) return {};
        if (cfg.grid.n_points < 0) throw std::invalid_argument("grid: negative n_points");
        if (cfg.grid.n_points > 1 && !(cfg.grid.lo < cfg.grid.hi))
            throw std::invalid_argument("grid: bounds must be strictly increasing");
        return linspace(cfg.grid.lo, cfg.grid.hi, cfg.grid.n_points);
    }

    const AutoRangeSettings& ar = cfg.auto_range;
    const auto probe = [&](double v) { return probe_stable(cfg, net, driver, v); };

    // 1. Stable lower bound: shrink toward zero, then walk negative.
    double lo = kNaN;
    std::vector<double> candidates;
    for (double f : {1.0, 0.5, 0.25, 0.125}) candidates.push_back(ar.init * f);
    for (double f : {-1.0, -2.0, -4.0, -8.0, -16.0, -32.0}) candidates.push_back(ar.init * f);
    for (double v : candidates) {
        if (probe(v) && lambda1_at(cfg, net, driver, v) < ar.stable_lambda_max) {
            lo = v;
            break;
        }
    }
    if (std::isnan(lo))
        throw std::runtime_error("auto-range: no stable lower bound found; configure an explicit grid");

    // 2. Double upward to the first unstable value.
    double cur = lo;
    double step = std::max(std::abs(lo), ar.init);
    double hi = kNaN;
    for (int it = 0; it < 48; ++it) {
        const double probe_v = cur + step;
        if (!probe(probe_v)) {
            hi = probe_v;
            break;
        }
        cur = probe_v;
        step *= 2.0;
    }
    if (std::isnan(hi))
        throw std::runtime_error("auto-range: no instability found; configure an explicit grid");

    // 3. Refine the bracket, then lay the grid slightly past the edge.
    const double tol = ar.edge_rel_tol * std::max({std::abs(hi), std::abs(lo), ar.init});
    const double edge = bisect_edge(probe, cur, hi, tol);
    const double top = edge + ar.overshoot * (edge - lo);
    return linspace(lo, top, cfg.grid.n_points);
}

std::vector<SweepRecord> run_sweep(const SweepConfig& cfg) {
    if (cfg.seeds.empty()) throw std::invalid_argument("sweep: at least one seed required");
    if (cfg.swept != "p1" && cfg.swept != "alpha")
        throw std::invalid_argument("sweep: swept parameter must be 'p1' or 'alpha'");

    std::vector<SweepRecord> records;
    for (const std::uint64_t seed : cfg.seeds) {
        const NetworkSpec net = build_network(seed, cfg.M, cfg.sigma, cfg.density);
        const DriverTrajectory driver = make_driver(cfg, seed);
        const std::vector<double> values = resolve_grid(cfg, net, driver);
        const std::size_t base = records.size();
        records.resize(base + values.size());
        parallel_for(static_cast<long>(values.size()), cfg.jobs, [&](long i) {
            records[base + i] = evaluate_point(cfg, net, driver, values[i], i);
        });
    }
    return records;
}

double bisect_edge(const std::function<bool(double)>& stable_at, double lo, double hi,
                   double tolerance) {
    if (!(tolerance > 0.0)) throw std::invalid_argument("bisect_edge: tolerance must be positive");
    if (!(lo < hi)) throw std::invalid_argument("bisect_edge: need lo < hi");
    if (!stable_at(lo)) throw std::invalid_argument("bisect_edge: lower bound is not stable");
    if (stable_at(hi)) throw std::invalid_argument("bisect_edge: upper bound is not unstable");
    while (hi - lo > tolerance) {
        const double mid = 0.5 * (lo + hi);
        if (stable_at(mid))
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double find_edge_seeded(const SweepConfig& cfg, std::uint64_t seed, double tolerance) {
    const NetworkSpec net = build_network(seed, cfg.M, cfg.sigma, cfg.density);
    const DriverTrajectory driver = make_driver(cfg, seed);
    const std::vector<double> values = resolve_grid(cfg, net, driver);
    if (values.empty()) throw std::runtime_error("find_edge: empty grid");

    double largest_stable = kNaN, smallest_unstable = kNaN;
    std::vector<char> stable(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        stable[i] = probe_stable(cfg, net, driver, values[i]);
        if (stable[i] && (std::isnan(largest_stable) || values[i] > largest_stable))
            largest_stable = values[i];
        if (!stable[i] && (std::isnan(smallest_unstable) || values[i] < smallest_unstable))
            smallest_unstable = values[i];
    }
    if (std::isnan(largest_stable) || std::isnan(smallest_unstable))
        throw std::runtime_error("find_edge: no stable/unstable bracket in grid; widen the range");
    if (largest_stable > smallest_unstable)
        throw std::runtime_error("find_edge: stability is not monotone across the grid");
    return bisect_edge([&](double v) { return probe_stable(cfg, net, driver, v); }, largest_stable,
                       smallest_unstable, tolerance);
}

double find_edge(const SweepConfig& cfg, double tolerance) {
    if (cfg.seeds.empty()) throw std::invalid_argument("find_edge: at least one seed required");
    return find_edge_seeded(cfg, cfg.seeds.front(), tolerance);
}

std::vector<std::string> sweep_csv_header() {
    return {"seed",     "param_value", "stable", "delta_rc", "delta_tx", "lambda_1",
            "lambda_2", "lambda_3",    "lambda_4", "max_local", "d_ky",   "ky_j",
            "H",        "n_symbols",   "psi_fwd", "psi_rev",  "delta_f"};
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRecord>& records) {
    std::vector<std::vector<CsvCell>> rows;
    rows.reserve(records.size());
    for (const SweepRecord& r : records) {
        rows.push_back({static_cast<unsigned long long>(r.seed), r.param_value,
                        static_cast<int>(r.stable), r.delta_rc, r.delta_tx, r.lambda1, r.lambda2,
                        r.lambda3, r.lambda4, r.max_local, r.d_ky, r.ky_j, r.H,
                        static_cast<long>(r.n_symbols), r.psi_fwd, r.psi_rev, r.delta_f});
    }
    write_csv(path, sweep_csv_header(), rows);
}

}  // namespace edgescope
