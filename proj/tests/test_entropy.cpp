#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "edgescope/diagnostics/entropy.hpp"
#include "edgescope/rng.hpp"

using namespace edgescope;

TEST_CASE("pattern codes are lehmer digits with stable tie-breaking") {
    const double up2[] = {0.0, 1.0};
    const double down2[] = {1.0, 0.0};
    CHECK(ordinal_pattern_code(up2, 2) == 0);
    CHECK(ordinal_pattern_code(down2, 2) == 1);

    const double up3[] = {1.0, 2.0, 3.0};
    const double down3[] = {3.0, 2.0, 1.0};
    const double mid3[] = {2.0, 3.0, 1.0};
    CHECK(ordinal_pattern_code(up3, 3) == 0);
    CHECK(ordinal_pattern_code(down3, 3) == 5);  // w! - 1
    CHECK(ordinal_pattern_code(mid3, 3) == 3);

    // Ties rank by earlier index: (1, 1, 0) behaves like (1, 2, 0).
    const double tied[] = {1.0, 1.0, 0.0};
    const double split[] = {1.0, 2.0, 0.0};
    CHECK(ordinal_pattern_code(tied, 3) == ordinal_pattern_code(split, 3));
}

TEST_CASE("a monotone series carries a single symbol and zero entropy") {
    Matrix x(50, 1);
    for (long t = 0; t < 50; ++t) x(t, 0) = 0.1 * static_cast<double>(t);
    const EntropyReport rep = ordinal_entropy(x, 4);
    CHECK(rep.H == 0.0);
    CHECK(rep.n_symbols == 1);
    REQUIRE(rep.counts.size() == 1);
    CHECK(rep.counts[0] == 47);
}

TEST_CASE("three binary channels cycling through all sign patterns are uniform") {
    // Column c steps up or down according to bit c of (t mod 8), so the eight
    // window-2 global symbols appear equally often over a multiple-of-8 span.
    const long k = 32;
    const long t_len = 8 * k + 1;
    Matrix x = Matrix::Zero(t_len, 3);
    for (long t = 0; t + 1 < t_len; ++t)
        for (int c = 0; c < 3; ++c) {
            const double step = ((t % 8) >> c) & 1 ? 1.0 : -1.0;
            x(t + 1, c) = x(t, c) + step;
        }

    const EntropyReport rep = ordinal_entropy(x, 2);
    CHECK(rep.n_symbols == 8);
    CHECK(rep.H == doctest::Approx(std::log(8.0)).epsilon(1e-12));
    for (long long count : rep.counts) CHECK(count == k);
}

TEST_CASE("entropy is invariant under monotone rescaling of the values") {
    Rng rng(12);
    Matrix x(200, 3);
    x.row(0).setZero();
    for (long t = 1; t < 200; ++t)
        for (int c = 0; c < 3; ++c) x(t, c) = x(t - 1, c) + rng.uniform(-1.0, 1.0);

    const EntropyReport raw = ordinal_entropy(x, 4);
    const Matrix warped = x.array().exp().matrix();
    const EntropyReport warp = ordinal_entropy(warped, 4);

    CHECK(raw.n_symbols == warp.n_symbols);
    CHECK(raw.H == doctest::Approx(warp.H).epsilon(1e-14));
    REQUIRE(raw.counts.size() == warp.counts.size());
    for (std::size_t i = 0; i < raw.counts.size(); ++i) CHECK(raw.counts[i] == warp.counts[i]);

    // Generic bound: the histogram can never beat the uniform distribution.
    CHECK(raw.H <= std::log(static_cast<double>(raw.n_symbols)) + 1e-12);
}

TEST_CASE("bad windows and degenerate inputs are rejected") {
    Matrix x(50, 2);
    x.setRandom();
    CHECK_THROWS_AS(ordinal_entropy(x, 1), std::invalid_argument);
    CHECK_THROWS_AS(ordinal_entropy(x, 9), std::invalid_argument);
    CHECK_THROWS_AS(ordinal_entropy(Matrix(4, 2), 4), std::invalid_argument);
    CHECK_THROWS_AS(ordinal_entropy(Matrix(50, 0), 4), std::invalid_argument);
}
