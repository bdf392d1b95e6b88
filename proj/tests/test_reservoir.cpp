#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "edgescope/reservoir.hpp"
#include "edgescope/rng.hpp"

using namespace edgescope;

namespace {

Vector noise_input(std::uint64_t seed, long n) {
    Rng r(seed);
    Vector s(n);
    for (long t = 0; t < n; ++t) s(t) = r.uniform(-1.0, 1.0);
    return s;
}

}  // namespace

TEST_CASE("network construction is deterministic with the advertised structure") {
    const int m = 40;
    const double density = 0.5, sigma = 0.7;
    const NetworkSpec a = build_network(9, m, sigma, density);
    const NetworkSpec b = build_network(9, m, sigma, density);
    const NetworkSpec c = build_network(10, m, sigma, density);

    CHECK((a.A - b.A).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.W - b.W).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.A - c.A).cwiseAbs().maxCoeff() > 0.0);

    CHECK(a.A.diagonal().cwiseAbs().maxCoeff() == 0.0);
    CHECK(spectral_radius(a.A) == doctest::Approx(sigma).epsilon(1e-6));
    CHECK(a.W.minCoeff() >= -1.0);
    CHECK(a.W.maxCoeff() < 1.0);

    // floor(density m^2) slots are drawn before the diagonal is cleared, so
    // the off-diagonal count lands within m of that draw.
    const long selected = static_cast<long>(density * m * m);
    long nonzero = 0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (a.A(i, j) != 0.0) ++nonzero;
    CHECK(nonzero <= selected);
    CHECK(nonzero >= selected - m);
}

TEST_CASE("sigma only rescales the draw") {
    const NetworkSpec lo = build_network(4, 30, 0.2);
    const NetworkSpec hi = build_network(4, 30, 0.9);
    // Same sparsity pattern, proportional values.
    const double ratio = 0.9 / 0.2;
    CHECK((hi.A - ratio * lo.A).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("degenerate sizes are rejected") {
    CHECK_THROWS_AS(build_network(1, 1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(build_network(1, 0, 0.5), std::invalid_argument);
}

TEST_CASE("runs start at the initial row and are reproducible") {
    const NetworkSpec net = build_network(2, 25, 0.4);
    ReservoirParams p;
    p.kind = ReservoirKind::MAP;
    p.alpha = 0.3;
    p.p1 = 0.5;
    const Vector s = noise_input(77, 500);
    Vector r0 = Vector::Constant(net.M, 0.01);

    const ReservoirRun a = run_map_reservoir(net, p, s, r0);
    const ReservoirRun b = run_reservoir(net, p, s, r0);
    REQUIRE(a.stable);
    // One state row per input sample: row n has consumed s(0..n-1).
    REQUIRE(a.states.rows() == 500);
    CHECK((a.states.row(0).transpose() - r0).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.states - b.states).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.input_used - s).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("a frozen map reservoir zeroes out and a frozen flow stands still") {
    const NetworkSpec net = build_network(3, 10, 0.4);
    const Vector s = noise_input(5, 100);
    const Vector r0 = Vector::Constant(net.M, 0.2);

    ReservoirParams frozen_map;
    frozen_map.kind = ReservoirKind::MAP;
    frozen_map.alpha = 0.0;
    const ReservoirRun m = run_map_reservoir(net, frozen_map, s, r0);
    REQUIRE(m.states.rows() == 100);
    CHECK(m.states.row(0).cwiseAbs().maxCoeff() == 0.2);
    CHECK(m.states.bottomRows(99).cwiseAbs().maxCoeff() == 0.0);

    ReservoirParams frozen_ode;
    frozen_ode.kind = ReservoirKind::ODE;
    frozen_ode.alpha = 0.0;
    const ReservoirRun o = run_ode_reservoir(net, frozen_ode, s, r0);
    CHECK((o.states.rowwise() - r0.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("one linear map step is alpha (p1 r + A r + W s)") {
    const NetworkSpec net = build_network(8, 12, 0.5);
    ReservoirParams p;
    p.kind = ReservoirKind::MAP;
    p.alpha = 0.7;
    p.p1 = 0.4;
    Vector s(2);
    s << 0.6, 0.0;  // only s(0) is consumed reaching row 1
    const Vector r0 = noise_input(21, net.M);
    const ReservoirRun run = run_map_reservoir(net, p, s, r0);
    const Vector expected = 0.7 * (0.4 * r0 + net.A * r0 + net.W * 0.6);
    CHECK((run.states.row(1).transpose() - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("divergent runs truncate at the first offending row") {
    const NetworkSpec net = build_network(6, 15, 0.5);
    ReservoirParams p;
    p.kind = ReservoirKind::MAP;
    p.alpha = 3.0;
    p.p3 = 2.0;  // strong cubic blowup
    const Vector s = noise_input(8, 2000);
    const ReservoirRun run = run_map_reservoir(net, p, s, Vector::Zero(net.M), 1e6);
    REQUIRE_FALSE(run.stable);
    REQUIRE(run.divergence_step > 0);
    CHECK(run.states.rows() == run.divergence_step + 1);
    // Every row before the flagged one is inside the threshold.
    CHECK(run.states.topRows(run.divergence_step).cwiseAbs().maxCoeff() <= 1e6);
    CHECK(run.states.row(run.divergence_step).cwiseAbs().maxCoeff() > 1e6);

    const DivergenceCheck check = detect_divergence(run.states, 1e6);
    CHECK_FALSE(check.stable);
    CHECK(check.step == run.divergence_step);
}

TEST_CASE("the conditional jacobian drops the input term") {
    const NetworkSpec net = build_network(13, 9, 0.6);
    ReservoirParams p;
    p.kind = ReservoirKind::MAP;
    p.alpha = 0.8;
    p.p1 = 0.2;
    p.p2 = -0.3;
    p.p3 = 0.15;
    const Vector r = noise_input(2, net.M);

    const Matrix j_a = one_step_jacobian(net, p, r, 0.0);
    const Matrix j_b = one_step_jacobian(net, p, r, 123.0);
    CHECK((j_a - j_b).cwiseAbs().maxCoeff() == 0.0);

    // Finite differences of the map update at fixed input.
    const double s_val = 0.37;
    const auto step = [&](const Vector& x) {
        Vector s(2);
        s << s_val, 0.0;
        return Vector(run_map_reservoir(net, p, s, x).states.row(1).transpose());
    };
    const double eps = 1e-6;
    for (int col = 0; col < net.M; ++col) {
        Vector dx = Vector::Zero(net.M);
        dx(col) = eps;
        const Vector fd = (step(r + dx) - step(r - dx)) / (2.0 * eps);
        for (int row = 0; row < net.M; ++row)
            CHECK(j_a(row, col) == doctest::Approx(fd(row)).epsilon(1e-5));
    }
}
