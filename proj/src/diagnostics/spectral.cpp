#include "edgescope/diagnostics/spectral.hpp"

#include <cmath>
#include <stdexcept>

#include "edgescope/fft.hpp"

namespace edgescope {

namespace {

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

double weighted_mean_frequency(const SpectrumMag& s, double mag_sum) {
    double num = 0.0;
    for (std::size_t j = 0; j < s.mag.size(); ++j) num += s.mag[j] * s.freq[j];
    return num / mag_sum;
}

}  // namespace

SpectralDiffReport spectral_difference(const Vector& g, const Matrix& states, bool prose_variant) {
    const long t_len = g.size();
    if (states.rows() != t_len) throw std::invalid_argument("spectral_difference: length mismatch");
    if (t_len < 512) throw std::invalid_argument("spectral_difference: need at least 512 samples");
    const long m = states.cols();
    if (m < 1) throw std::invalid_argument("spectral_difference: no node signals");

    const SpectrumMag spec_g = magnitude_spectrum(to_std(g));
    double g_sum = 0.0;
    for (double v : spec_g.mag) g_sum += v;
    if (!(g_sum > 0.0)) throw std::invalid_argument("spectral_difference: degenerate target spectrum");
    const double wmf_g = weighted_mean_frequency(spec_g, g_sum);
    const double guard_scale = 1e-9 * g_sum;

    SpectralDiffReport report;
    report.per_node_terms.resize(m);
    double term_sum = 0.0;
    for (long i = 0; i < m; ++i) {
        const SpectrumMag spec_r = magnitude_spectrum(to_std(states.col(i)));
        double num = 0.0, den = 0.0;
        if (prose_variant) {
            for (std::size_t j = 0; j < spec_r.mag.size(); ++j) {
                num += spec_r.mag[j] * spec_r.freq[j];
                den += spec_r.mag[j];
            }
        } else {
            for (std::size_t j = 0; j < spec_g.mag.size(); ++j) {
                const double diff = spec_g.mag[j] - spec_r.mag[j];
                num += diff * spec_g.freq[j];
                den += diff;
            }
        }
        double term;
        if (std::abs(den) < guard_scale) {
            term = wmf_g;
            ++report.guard_hits;
        } else {
            term = num / den;
        }
        report.per_node_terms[i] = term;
        term_sum += term;
    }
    report.delta_f = wmf_g - term_sum / static_cast<double>(m);
    return report;
}

}  // namespace edgescope
