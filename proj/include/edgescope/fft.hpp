#pragma once

#include <complex>
#include <vector>

namespace edgescope {

/// One-sided magnitude spectrum of a real signal.
struct SpectrumMag {
    std::vector<double> freq;  ///< cycles per sample, in [0, 0.5]
    std::vector<double> mag;   ///< FFT magnitudes |X_k|
};

/// In-place radix-2 decimation-in-time FFT.  Length must be a power of two.
void fft_radix2(std::vector<std::complex<double>>& x);

/// Magnitude spectrum used by the spectral comparison: the mean is removed,
/// the signal is truncated to the largest power-of-two length, and only the
/// non-negative-frequency half (k = 0 .. N/2) is kept.
SpectrumMag magnitude_spectrum(const std::vector<double>& signal);

}  // namespace edgescope
