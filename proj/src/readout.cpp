#include "edgescope/readout.hpp"

#include <limits>
#include <stdexcept>

namespace edgescope {

namespace {

Matrix design_matrix(const Matrix& states, const FitWindow& w, bool bias_column) {
    Matrix r = states.middleRows(w.discard, w.fit);
    if (!bias_column) return r;
    Matrix rb(r.rows(), r.cols() + 1);
    rb.leftCols(r.cols()) = r;
    rb.col(r.cols()).setOnes();
    return rb;
}

double relative_residual_std(const Matrix& r, const Vector& c, const Vector& g) {
    const Vector h = r * c;
    const double sg = population_std(g);
    if (!(sg > 0.0)) throw std::invalid_argument("readout: constant target signal");
    return population_std(Vector(g - h)) / sg;
}

}  // namespace

TrainResult train_readout(const ReservoirRun& run, const Vector& g, double lambda_rel,
                          FitWindow window, bool bias_column) {
    if (window.discard < 0 || window.fit <= 0)
        throw std::invalid_argument("train_readout: malformed fit window");
    const long needed = window.discard + window.fit;
    if (!run.stable) throw std::runtime_error("train_readout: cannot train on an unstable run");
    if (run.states.rows() < needed || g.size() < needed)
        throw std::runtime_error("train_readout: run shorter than discard+fit");

    const Matrix r = design_matrix(run.states, window, bias_column);
    const Vector gw = g.segment(window.discard, window.fit);
    TrainResult out;
    out.model.c = ridge_solve(r, gw, lambda_rel);
    out.model.lambda_rel = lambda_rel;
    out.model.window = window;
    out.model.bias_column = bias_column;
    out.delta_rc = relative_residual_std(r, out.model.c, gw);
    return out;
}

double evaluate_readout(const ReadoutModel& model, const ReservoirRun& run_test,
                        const Vector& g_test) {
    const FitWindow& w = model.window;
    const long needed = w.discard + w.fit;
    if (!run_test.stable || run_test.states.rows() < needed || g_test.size() < needed)
        return std::numeric_limits<double>::infinity();
    const Matrix r = design_matrix(run_test.states, w, model.bias_column);
    const Vector gw = g_test.segment(w.discard, w.fit);
    return relative_residual_std(r, model.c, gw);
}

}  // namespace edgescope
