#pragma once

#include "edgescope/numerics.hpp"
#include "edgescope/reservoir.hpp"

namespace edgescope {

/// Training protocol window: discard the first `discard` steps of a run,
/// then fit/evaluate on the next `fit` steps.
struct FitWindow {
    long discard = 1000;
    long fit = 10000;
};

/// Trained linear readout h(t) = sum_i c_i r_i(t).
struct ReadoutModel {
    Vector c;
    double lambda_rel = 0.0;
    FitWindow window;
    bool bias_column = false;  ///< when set, the last coefficient multiplies a constant 1
};

struct TrainResult {
    ReadoutModel model;
    double delta_rc = 0.0;  ///< std(g - h) / std(g) over the fit window
};

/// Fit the readout by ridge regression on the window [discard, discard+fit).
/// Throws std::runtime_error on an unstable or too-short run and
/// std::invalid_argument on a constant target.
TrainResult train_readout(const ReservoirRun& run, const Vector& g, double lambda_rel,
                          FitWindow window = {}, bool bias_column = false);

/// Testing error std(g' - h') / std(g') over the model's window on a fresh
/// run.  An unstable or too-short test run yields +infinity (the sentinel
/// kept in sweep records), not an exception.
double evaluate_readout(const ReadoutModel& model, const ReservoirRun& run_test,
                        const Vector& g_test);

}  // namespace edgescope
