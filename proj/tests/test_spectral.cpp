#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "edgescope/diagnostics/spectral.hpp"
#include "edgescope/fft.hpp"
#include "edgescope/rng.hpp"

using namespace edgescope;

namespace {

constexpr double kTau = 6.283185307179586476925286766559;

Vector tone(long n, long bin, double amplitude) {
    Vector x(n);
    for (long t = 0; t < n; ++t)
        x(t) = amplitude * std::sin(kTau * static_cast<double>(bin * t) / static_cast<double>(n));
    return x;
}

double weighted_mean_freq(const std::vector<double>& weight, const std::vector<double>& freq) {
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < weight.size(); ++j) {
        num += weight[j] * freq[j];
        den += weight[j];
    }
    return num / den;
}

/// Recompute both report variants from magnitude spectra alone.
double reference_delta_f(const Vector& g, const Matrix& states, bool prose) {
    std::vector<double> gv(g.data(), g.data() + g.size());
    const SpectrumMag gs = magnitude_spectrum(gv);
    const double wmf_g = weighted_mean_freq(gs.mag, gs.freq);

    double acc = 0.0;
    for (long i = 0; i < states.cols(); ++i) {
        std::vector<double> rv(states.rows());
        for (long t = 0; t < states.rows(); ++t) rv[static_cast<std::size_t>(t)] = states(t, i);
        const SpectrumMag rs = magnitude_spectrum(rv);
        if (prose) {
            acc += weighted_mean_freq(rs.mag, rs.freq);
        } else {
            std::vector<double> diff(gs.mag.size());
            for (std::size_t j = 0; j < diff.size(); ++j) diff[j] = gs.mag[j] - rs.mag[j];
            acc += weighted_mean_freq(diff, gs.freq);
        }
    }
    return wmf_g - acc / static_cast<double>(states.cols());
}

}  // namespace

TEST_CASE("two clean tones give the hand-computed value") {
    const long n = 2048;
    const Vector g = tone(n, 256, 2.0);  // f = 0.125
    Matrix states(n, 1);
    states.col(0) = tone(n, 64, 1.0);  // f = 0.03125

    // Signed-difference weighting: (2 * 0.125 - 0.03125) / (2 - 1) = 0.21875.
    const SpectralDiffReport primary = spectral_difference(g, states, false);
    CHECK(primary.guard_hits == 0);
    CHECK(std::abs(primary.delta_f - (0.125 - 0.21875)) < 1e-9);
    REQUIRE(primary.per_node_terms.size() == 1);
    CHECK(std::abs(primary.per_node_terms[0] - 0.21875) < 1e-9);

    const SpectralDiffReport prose = spectral_difference(g, states, true);
    CHECK(std::abs(prose.delta_f - (0.125 - 0.03125)) < 1e-9);
    CHECK(prose.delta_f > 0.0);  // target sits higher in frequency than the node
}

TEST_CASE("broadband signals match an independent spectral recomputation") {
    Rng rng(31);
    const long n = 600;  // exercises truncation to 512
    Vector g(n);
    Matrix states(n, 3);
    double walk = 0.0;
    for (long t = 0; t < n; ++t) {
        walk += rng.uniform(-1.0, 1.0);
        g(t) = walk + 0.3 * std::sin(kTau * 0.21 * static_cast<double>(t));
        for (int i = 0; i < 3; ++i)
            states(t, i) = rng.uniform(-1.0, 1.0) + 0.1 * static_cast<double>(i) * g(t);
    }

    for (bool prose : {false, true}) {
        const SpectralDiffReport rep = spectral_difference(g, states, prose);
        CHECK(rep.guard_hits == 0);
        CHECK(std::abs(rep.delta_f - reference_delta_f(g, states, prose)) < 1e-10);
        CHECK(rep.per_node_terms.size() == 3);
    }
}

TEST_CASE("a node equal to the target trips the guard in the signed form only") {
    const long n = 1024;
    const Vector g = tone(n, 100, 1.0);
    Matrix states(n, 1);
    states.col(0) = g;

    const SpectralDiffReport primary = spectral_difference(g, states, false);
    CHECK(primary.guard_hits == 1);
    CHECK(primary.delta_f == 0.0);

    const SpectralDiffReport prose = spectral_difference(g, states, true);
    CHECK(prose.guard_hits == 0);
    CHECK(std::abs(prose.delta_f) < 1e-12);
}

TEST_CASE("joint rescaling leaves both variants unchanged") {
    Rng rng(77);
    const long n = 512;
    Vector g(n);
    Matrix states(n, 2);
    for (long t = 0; t < n; ++t) {
        g(t) = std::sin(kTau * 0.11 * static_cast<double>(t)) + 0.2 * rng.uniform(-1.0, 1.0);
        states(t, 0) = std::sin(kTau * 0.05 * static_cast<double>(t));
        states(t, 1) = rng.uniform(-1.0, 1.0);
    }

    for (bool prose : {false, true}) {
        const double base = spectral_difference(g, states, prose).delta_f;
        const double scaled = spectral_difference(3.0 * g, 3.0 * states, prose).delta_f;
        CHECK(std::abs(base - scaled) < 1e-12);
    }
    // The per-node form only sees shapes, so scaling the nodes alone is also free.
    const double prose_base = spectral_difference(g, states, true).delta_f;
    const double prose_scaled = spectral_difference(g, 5.0 * states, true).delta_f;
    CHECK(std::abs(prose_base - prose_scaled) < 1e-12);
}

TEST_CASE("degenerate spectra and malformed shapes are rejected") {
    const long n = 1024;
    const Vector g = tone(n, 50, 1.0);
    Matrix states(n, 1);
    states.col(0) = tone(n, 20, 1.0);

    CHECK_THROWS_AS(spectral_difference(g.head(700), states, false), std::invalid_argument);
    CHECK_THROWS_AS(spectral_difference(g.head(300), states.topRows(300), false),
                    std::invalid_argument);
    CHECK_THROWS_AS(spectral_difference(g, Matrix(n, 0), false), std::invalid_argument);
    CHECK_THROWS_AS(spectral_difference(Vector::Ones(n), states, false), std::invalid_argument);
}
