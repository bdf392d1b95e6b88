#include "edgescope/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace edgescope {

Matrix uniform_matrix(Rng& rng, int rows, int cols, double lo, double hi) {
    if (rows <= 0 || cols <= 0) throw std::invalid_argument("uniform_matrix: empty shape");
    Matrix a(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) a(i, j) = rng.uniform(lo, hi);
    return a;
}

double spectral_radius(const Matrix& a, int squarings) {
    if (a.rows() != a.cols()) throw std::invalid_argument("spectral_radius: square matrix required");
    if (a.size() == 0) throw std::invalid_argument("spectral_radius: empty matrix");
    // rho(A) = lim_k |A^(2^k)|^(2^-k); squaring with interleaved Frobenius
    // renormalization keeps every intermediate at unit norm, so the radius is
    // exp of the weighted log-norm sum with weights 2^-j for the norm taken
    // before the j-th squaring and 2^-squarings for the residual.
    Matrix b = a;
    double log_radius = 0.0;
    double weight = 1.0;
    for (int j = 0; j < squarings; ++j) {
        const double norm = b.norm();
        if (!(norm > 0.0)) return 0.0;  // reached the zero matrix: nilpotent input
        log_radius += weight * std::log(norm);
        b /= norm;
        b = b * b;
        weight *= 0.5;
    }
    const double norm = b.norm();
    if (norm > 0.0) log_radius += weight * std::log(norm);
    return std::exp(log_radius);
}

Matrix rescale_to_radius(const Matrix& a, double target) {
    const double rho = spectral_radius(a);
    if (!(rho > 0.0)) throw std::invalid_argument("rescale_to_radius: zero spectral radius");
    return a * (target / rho);
}

Vector ridge_solve(const Matrix& r, const Vector& g, double lambda_rel) {
    if (r.rows() != g.size()) throw std::invalid_argument("ridge_solve: row count mismatch");
    if (r.rows() < r.cols()) throw std::invalid_argument("ridge_solve: underdetermined system");
    if (lambda_rel < 0.0) throw std::invalid_argument("ridge_solve: negative regularization");
    const Matrix gram = r.transpose() * r;
    const double lambda = lambda_rel * gram.trace() / static_cast<double>(r.cols());
    Matrix lhs = gram;
    lhs.diagonal().array() += lambda;
    Eigen::LDLT<Matrix> ldlt(lhs);
    if (ldlt.info() != Eigen::Success) throw std::runtime_error("ridge_solve: factorization failed");
    const Vector rhs = r.transpose() * g;
    const Vector c = ldlt.solve(rhs);
    if (lambda_rel == 0.0) {
        const double scale = std::max(1.0, lhs.norm() * c.norm());
        const double resid = (lhs * c - rhs).norm();
        if (!(resid <= 1e-8 * scale) || !c.allFinite())
            throw std::runtime_error("ridge_solve: rank-deficient system with zero regularization");
    }
    return c;
}

double population_std(const std::vector<double>& x) {
    if (x.empty()) throw std::invalid_argument("population_std: empty sample");
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(x.size()));
}

double population_std(const Vector& x) {
    if (x.size() == 0) throw std::invalid_argument("population_std: empty sample");
    const double mean = x.mean();
    return std::sqrt((x.array() - mean).square().sum() / static_cast<double>(x.size()));
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
        const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

}  // namespace

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("spearman: length mismatch");
    if (x.size() < 2) throw std::invalid_argument("spearman: need at least two samples");
    const std::vector<double> rx = average_ranks(x);
    const std::vector<double> ry = average_ranks(y);
    const double sx = population_std(rx);
    const double sy = population_std(ry);
    if (!(sx > 0.0) || !(sy > 0.0)) return 0.0;
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double cov = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) cov += (rx[i] - mx) * (ry[i] - my);
    cov /= n;
    return cov / (sx * sy);
}

}  // namespace edgescope
