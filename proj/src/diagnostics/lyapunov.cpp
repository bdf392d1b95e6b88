#include "edgescope/diagnostics/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace edgescope {

KaplanYorkeResult kaplan_yorke(const std::vector<double>& exponents) {
    if (exponents.empty()) throw std::invalid_argument("kaplan_yorke: empty exponent list");
    for (std::size_t i = 1; i < exponents.size(); ++i)
        if (exponents[i] > exponents[i - 1])
            throw std::invalid_argument("kaplan_yorke: exponents must be sorted descending");

    if (exponents[0] <= 0.0) return {0.0, 0, false};
    const int n = static_cast<int>(exponents.size());
    double cum = 0.0, cum_at_j = 0.0;
    int j = 0;
    for (int i = 0; i < n; ++i) {
        cum += exponents[i];
        if (cum > 0.0) {
            j = i + 1;
            cum_at_j = cum;
        }
    }
    if (j == n) return {static_cast<double>(n), n, true};
    // lambda_{j+1} must be strictly negative here, else j would be larger.
    return {static_cast<double>(j) + cum_at_j / std::abs(exponents[j]), j, false};
}

namespace {

/// One-step largest singular value via power iteration on Phi^T Phi, warm
/// started from u (normalized; updated in place for the next step).
double local_sigma_max(const TangentSystem& sys, Matrix& u, int iters, double tol) {
    Matrix w, z;
    double sigma2 = 0.0, sigma2_prev = -1.0;
    for (int it = 0; it < iters; ++it) {
        w = u;
        sys.apply(w);
        sigma2 = w.squaredNorm();
        z = w;
        sys.apply_transpose(z);
        const double zn = z.norm();
        if (!(zn > 0.0)) {
            u.setOnes();
            u /= u.norm();
            break;
        }
        u = z / zn;
        if (sigma2_prev >= 0.0 && std::abs(sigma2 - sigma2_prev) <= tol * sigma2) break;
        sigma2_prev = sigma2;
    }
    return std::sqrt(sigma2);
}

}  // namespace

LyapunovReport lyapunov_report(TangentSystem& sys, const LyapunovOptions& opt) {
    const int d = sys.dim();
    const int k = opt.k;
    const long n_steps = sys.n_steps();
    const long exclude = opt.transient_exclude;
    if (k < 1 || k > d) throw std::invalid_argument("lyapunov_report: k must be in [1, dim]");
    if (exclude < 0 || exclude >= n_steps)
        throw std::invalid_argument("lyapunov_report: trajectory shorter than transient exclusion");

    const double delta = sys.time_step();
    Matrix v = Matrix::Identity(d, k);
    std::vector<double> log_sums(k, 0.0);
    Matrix u = Matrix::Ones(d, 1) / std::sqrt(static_cast<double>(d));
    double max_local = -std::numeric_limits<double>::infinity();

    for (long n = 0; n < n_steps; ++n) {
        sys.begin_step(n);
        sys.apply(v);
        double first_norm = 0.0;
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < i; ++j) v.col(i) -= v.col(j).dot(v.col(i)) * v.col(j);
            const double norm = v.col(i).norm();
            if (!(norm > 0.0) || !std::isfinite(norm))
                throw std::runtime_error("lyapunov_report: tangent vector collapsed or diverged");
            v.col(i) /= norm;
            if (n >= exclude) log_sums[i] += std::log(norm);
            if (i == 0) first_norm = norm;
        }
        if (opt.with_max_local && n >= exclude) {
            // The first Gram-Schmidt norm |Phi v_1| is a lower bound on
            // sigma_max, so taking the max keeps max_local >= lambda_1 even
            // when the power iteration stops short of convergence.
            const double sigma =
                std::max(local_sigma_max(sys, u, opt.power_iterations, opt.power_tol), first_norm);
            max_local = std::max(max_local, std::log(sigma) / delta);
        }
    }

    LyapunovReport report;
    report.exponents.resize(k);
    const double span = static_cast<double>(n_steps - exclude) * delta;
    for (int i = 0; i < k; ++i) report.exponents[i] = log_sums[i] / span;
    std::sort(report.exponents.begin(), report.exponents.end(), std::greater<>());
    report.max_local = max_local;
    const KaplanYorkeResult ky = kaplan_yorke(report.exponents);
    report.d_ky = ky.d_ky;
    report.ky_j = ky.j;
    report.ky_saturated = ky.saturated;
    return report;
}

std::vector<double> lyapunov_spectrum(TangentSystem& sys, int k, long transient_exclude) {
    LyapunovOptions opt;
    opt.k = k;
    opt.transient_exclude = transient_exclude;
    opt.with_max_local = false;
    return lyapunov_report(sys, opt).exponents;
}

double max_local_lyapunov(TangentSystem& sys, long transient_exclude) {
    LyapunovOptions opt;
    opt.k = 1;
    opt.transient_exclude = transient_exclude;
    opt.with_max_local = true;
    return lyapunov_report(sys, opt).max_local;
}

}  // namespace edgescope
