#pragma once

// Small, self-contained reference implementations (plain loops, no Eigen)
// used as an independent code path when checking the library's numerics.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace oracles {

/// Solve a dense linear system by Gaussian elimination with partial pivoting.
inline std::vector<double> solve(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = a.size();
    if (n == 0 || a[0].size() != n || b.size() != n)
        throw std::invalid_argument("oracle solve: square system required");
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < n; ++row)
            if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        if (a[col][col] == 0.0) throw std::runtime_error("oracle solve: singular matrix");
        for (std::size_t row = col + 1; row < n; ++row) {
            const double f = a[row][col] / a[col][col];
            for (std::size_t k = col; k < n; ++k) a[row][k] -= f * a[col][k];
            b[row] -= f * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t row = n; row-- > 0;) {
        double acc = b[row];
        for (std::size_t k = row + 1; k < n; ++k) acc -= a[row][k] * x[k];
        x[row] = acc / a[row][row];
    }
    return x;
}

/// Ridge fit via explicit normal equations (R^T R + lambda I) c = R^T g.
inline std::vector<double> ridge(const std::vector<std::vector<double>>& r,
                                 const std::vector<double>& g, double lambda) {
    const std::size_t rows = r.size();
    const std::size_t cols = r.empty() ? 0 : r[0].size();
    std::vector<std::vector<double>> ata(cols, std::vector<double>(cols, 0.0));
    std::vector<double> atb(cols, 0.0);
    for (std::size_t t = 0; t < rows; ++t) {
        for (std::size_t i = 0; i < cols; ++i) {
            atb[i] += r[t][i] * g[t];
            for (std::size_t j = 0; j < cols; ++j) ata[i][j] += r[t][i] * r[t][j];
        }
    }
    for (std::size_t i = 0; i < cols; ++i) ata[i][i] += lambda;
    return solve(std::move(ata), atb);
}

/// Direct O(n^2) discrete Fourier transform.
inline std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& x) {
    const std::size_t n = x.size();
    std::vector<std::complex<double>> out(n);
    const double two_pi = 2.0 * 3.14159265358979323846;
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t t = 0; t < n; ++t) {
            const double phase = -two_pi * static_cast<double>(k) * static_cast<double>(t) /
                                 static_cast<double>(n);
            acc += x[t] * std::complex<double>(std::cos(phase), std::sin(phase));
        }
        out[k] = acc;
    }
    return out;
}

}  // namespace oracles
