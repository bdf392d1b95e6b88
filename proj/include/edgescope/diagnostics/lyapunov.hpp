#pragma once

#include <vector>

#include "edgescope/diagnostics/tangent.hpp"

namespace edgescope {

struct KaplanYorkeResult {
    double d_ky = 0.0;
    int j = 0;
    bool saturated = false;  ///< all cumulative sums positive: dimension capped at len
};

/// Kaplan-Yorke dimension from a descending-sorted exponent list:
/// j = largest prefix with positive cumulative sum, D = j + sum_j / |lambda_{j+1}|.
/// D = 0 when lambda_1 <= 0; D = len (saturated) when every prefix sum is positive.
KaplanYorkeResult kaplan_yorke(const std::vector<double>& exponents);

struct LyapunovOptions {
    int k = 4;                      ///< number of exponents
    long transient_exclude = 1000;  ///< steps dropped from accumulation (tangent alignment)
    bool with_max_local = true;
    int power_iterations = 20;
    double power_tol = 1e-8;
};

/// Exponents, max local exponent, and Kaplan-Yorke dimension in one pass.
struct LyapunovReport {
    std::vector<double> exponents;  ///< sorted descending, per unit time
    double max_local = 0.0;
    double d_ky = 0.0;
    int ky_j = 0;
    bool ky_saturated = false;
};

/// Gram-Schmidt (Benettin) spectrum: propagate k tangent vectors, reorthonormalize
/// every step, accumulate log norms after the alignment transient; optionally
/// track the maximum one-step local exponent ln(sigma_max(Phi_n)) / Delta via
/// warm-started power iteration on Phi^T Phi.
LyapunovReport lyapunov_report(TangentSystem& sys, const LyapunovOptions& opt = {});

/// Convenience wrapper returning only the exponents.
std::vector<double> lyapunov_spectrum(TangentSystem& sys, int k = 4, long transient_exclude = 1000);

/// Convenience wrapper returning only the maximum local exponent.
double max_local_lyapunov(TangentSystem& sys, long transient_exclude = 1000);

}  // namespace edgescope
