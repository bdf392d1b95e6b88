#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "edgescope/diagnostics/continuity.hpp"
#include "edgescope/readout.hpp"
#include "edgescope/reservoir.hpp"
#include "edgescope/signals.hpp"

namespace edgescope {

enum class DriverKind { Lorenz, Map3d };

struct DriverSettings {
    DriverKind kind = DriverKind::Lorenz;
    double c1 = 10.0, c2 = 28.0, c3 = 8.0 / 3.0;
    double dt = 0.02;
    long transient = 5000;  ///< map presets use 1000
    bool normalize_target = false;
};

struct DiagnosticsToggles {
    bool lyapunov = true;
    bool max_local = true;
    bool entropy = true;
    bool continuity = true;
    bool spectral = true;

    bool any_tangent() const { return lyapunov || max_local; }
};

struct DiagnosticsSettings {
    DiagnosticsToggles enable;
    int lyapunov_k = 4;
    int entropy_window = 4;
    ContinuityParams continuity;
    bool spectral_prose_variant = false;
};

struct GridSpec {
    bool auto_range = true;
    double lo = 0.0;
    double hi = 0.0;
    int n_points = 15;
};

/// Knobs of the automatic range discovery: start from a provably stable
/// value (lambda_1 below stable_lambda_max), double until instability,
/// bisect the bracket, then lay n_points uniformly from the stable lower
/// bound to slightly past the detected edge.
struct AutoRangeSettings {
    double init = 0.25;
    double stable_lambda_max = -0.5;
    double edge_rel_tol = 0.01;
    double overshoot = 0.08;
};

struct SweepConfig {
    DriverSettings driver;
    ReservoirKind reservoir_kind = ReservoirKind::ODE;
    int M = 100;
    double density = 0.5;
    double sigma = 0.5;
    double p1 = 0.0, p2 = 0.0, p3 = 0.0;
    double alpha = 1.0;
    double reservoir_dt = 0.02;
    std::string swept = "p1";  ///< "p1" | "alpha"
    GridSpec grid;
    AutoRangeSettings auto_range;
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    FitWindow train_window;
    FitWindow test_window;
    double lambda_rel = 1e-8;
    double threshold = kDefaultDivergenceThreshold;
    bool bias_column = false;
    DiagnosticsSettings diag;
    int jobs = 1;

    ReservoirParams reservoir_params() const;
    long driver_steps() const;  ///< train + test segment lengths
};

/// One (seed, parameter value) evaluation.  Disabled or unavailable
/// diagnostics are NaN; unstable points carry +inf fit errors.
struct SweepRecord {
    std::uint64_t seed = 0;
    double param_value = 0.0;
    bool stable = false;
    double delta_rc = 0.0;
    double delta_tx = 0.0;
    double lambda1 = 0.0, lambda2 = 0.0, lambda3 = 0.0, lambda4 = 0.0;
    double max_local = 0.0;
    double d_ky = 0.0;  ///< Kaplan-Yorke dimension of the joint drive+reservoir spectrum
    int ky_j = 0;
    double H = 0.0;
    long n_symbols = 0;
    double psi_fwd = 0.0;
    double psi_rev = 0.0;
    double delta_f = 0.0;
};

/// Generate the driver series for one seed (length cfg.driver_steps()).
DriverTrajectory make_driver(const SweepConfig& cfg, std::uint64_t seed);

/// Train-and-test stability classification of one parameter value.
bool probe_stable(const SweepConfig& cfg, const NetworkSpec& net, const DriverTrajectory& driver,
                  double value);

/// Full record for one parameter value (runs, readout, enabled diagnostics).
SweepRecord evaluate_point(const SweepConfig& cfg, const NetworkSpec& net,
                           const DriverTrajectory& driver, double value, long point_index);

/// The per-seed grid: the explicit one, or the automatically discovered range.
std::vector<double> resolve_grid(const SweepConfig& cfg, const NetworkSpec& net,
                                 const DriverTrajectory& driver);

/// Evaluate every (seed, grid point) pair; records ordered by (seed, value).
/// cfg.jobs > 1 evaluates points concurrently with identical output.
std::vector<SweepRecord> run_sweep(const SweepConfig& cfg);

/// Generic bisection of a stability boundary.  Requires stable_at(lo) and
/// !stable_at(hi); returns the midpoint of the final bracket.
double bisect_edge(const std::function<bool(double)>& stable_at, double lo, double hi,
                   double tolerance);

/// Edge of stability for one seed: classify the grid, take the bracket
/// [largest stable, smallest unstable], and bisect it.  Throws when the grid
/// is one-sided or when a stable point lies above an unstable one.
double find_edge_seeded(const SweepConfig& cfg, std::uint64_t seed, double tolerance);

/// find_edge_seeded with the first configured seed.
double find_edge(const SweepConfig& cfg, double tolerance);

std::vector<std::string> sweep_csv_header();
void write_sweep_csv(const std::string& path, const std::vector<SweepRecord>& records);

}  // namespace edgescope
