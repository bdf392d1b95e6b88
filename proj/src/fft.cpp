#include "edgescope/fft.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace edgescope {

void fft_radix2(std::vector<std::complex<double>>& x) {
    const std::size_t n = x.size();
    if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("fft_radix2: length must be a power of two");
    // Bit-reversal permutation.
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double angle = -2.0 * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(angle), std::sin(angle));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = x[i + k];
                const std::complex<double> v = x[i + k + len / 2] * w;
                x[i + k] = u + v;
                x[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

SpectrumMag magnitude_spectrum(const std::vector<double>& signal) {
    if (signal.size() < 2) throw std::invalid_argument("magnitude_spectrum: signal too short");
    std::size_t n = 1;
    while (n * 2 <= signal.size()) n *= 2;
    const double mean =
        std::accumulate(signal.begin(), signal.begin() + static_cast<std::ptrdiff_t>(n), 0.0) /
        static_cast<double>(n);
    std::vector<std::complex<double>> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = std::complex<double>(signal[i] - mean, 0.0);
    fft_radix2(x);
    SpectrumMag out;
    const std::size_t half = n / 2;
    out.freq.resize(half + 1);
    out.mag.resize(half + 1);
    for (std::size_t k = 0; k <= half; ++k) {
        out.freq[k] = static_cast<double>(k) / static_cast<double>(n);
        out.mag[k] = std::abs(x[k]);
    }
    return out;
}

}  // namespace edgescope
