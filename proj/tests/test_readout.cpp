#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <vector>

#include "edgescope/readout.hpp"
#include "edgescope/reservoir.hpp"
#include "edgescope/rng.hpp"
#include "support/oracles.hpp"

using namespace edgescope;

namespace {

Vector noise_input(std::uint64_t seed, long n) {
    Rng r(seed);
    Vector s(n);
    for (long t = 0; t < n; ++t) s(t) = r.uniform(-1.0, 1.0);
    return s;
}

ReservoirRun stable_run(std::uint64_t seed, long n, std::uint64_t input_seed = 0) {
    const NetworkSpec net = build_network(seed, 20, 0.5);
    ReservoirParams p;
    p.kind = ReservoirKind::MAP;
    p.alpha = 0.25;
    p.p1 = 0.5;
    p.p2 = 0.5;
    p.p3 = 0.5;
    const std::uint64_t stream = input_seed == 0 ? seed + 100 : input_seed;
    return run_map_reservoir(net, p, noise_input(stream, n), Vector::Zero(net.M));
}

}  // namespace

TEST_CASE("a target inside the state span is reproduced almost exactly") {
    const ReservoirRun run = stable_run(1, 1200);
    Rng mix(42);
    Vector w_true(run.states.cols());
    for (long i = 0; i < w_true.size(); ++i) w_true(i) = mix.uniform(-1.0, 1.0);
    const Vector g = run.states * w_true;

    const FitWindow window{200, 900};
    const TrainResult fit = train_readout(run, g, 1e-12, window);
    CHECK(fit.delta_rc < 1e-6);
    CHECK(evaluate_readout(fit.model, run, g) < 1e-6);

    // Same network, fresh input: an in-span target generalizes.
    const ReservoirRun fresh = stable_run(1, 1200, 999);
    const Vector g_fresh = fresh.states * w_true;
    CHECK(evaluate_readout(fit.model, fresh, g_fresh) < 1e-6);
}

TEST_CASE("training is ridge regression on the declared window") {
    const ReservoirRun run = stable_run(3, 800);
    const Vector g = noise_input(44, 800);
    const FitWindow window{150, 600};
    const double lambda_rel = 1e-6;
    const TrainResult fit = train_readout(run, g, lambda_rel, window);

    const Matrix r = run.states.middleRows(window.discard, window.fit);
    const Vector gw = g.segment(window.discard, window.fit);
    const double lambda =
        lambda_rel * (r.transpose() * r).trace() / static_cast<double>(r.cols());

    std::vector<std::vector<double>> rows(static_cast<std::size_t>(r.rows()));
    std::vector<double> target(static_cast<std::size_t>(r.rows()));
    for (long i = 0; i < r.rows(); ++i) {
        rows[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(r.cols()));
        for (long j = 0; j < r.cols(); ++j)
            rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = r(i, j);
        target[static_cast<std::size_t>(i)] = gw(i);
    }
    // Correlated node signals leave the normal equations ill-conditioned, so
    // two correct solvers only agree to a few digits past the conditioning.
    const std::vector<double> expected = oracles::ridge(rows, target, lambda);
    REQUIRE(static_cast<long>(expected.size()) == fit.model.c.size());
    for (long j = 0; j < fit.model.c.size(); ++j)
        CHECK(fit.model.c(j) == doctest::Approx(expected[static_cast<std::size_t>(j)])
                                    .epsilon(1e-7));

    // The reported training error matches the definition.
    const Vector h = r * fit.model.c;
    const double expect_err = population_std(Vector(gw - h)) / population_std(gw);
    CHECK(fit.delta_rc == doctest::Approx(expect_err).epsilon(1e-12));
}

TEST_CASE("the bias column appends a constant regressor") {
    const ReservoirRun run = stable_run(5, 700);
    // Affine target: in span only once the constant is available.
    Vector g = run.states.col(0) * 2.0;
    g.array() += 3.5;
    const FitWindow window{100, 500};

    const TrainResult plain = train_readout(run, g, 1e-12, window, false);
    const TrainResult biased = train_readout(run, g, 1e-12, window, true);
    CHECK(biased.model.c.size() == run.states.cols() + 1);
    CHECK(biased.delta_rc < 1e-6);
    CHECK(biased.delta_rc < plain.delta_rc);
    CHECK(evaluate_readout(biased.model, run, g) < 1e-6);
}

TEST_CASE("bad runs and malformed windows are rejected") {
    const ReservoirRun good = stable_run(6, 400);
    const Vector g = noise_input(7, 400);

    ReservoirRun unstable = good;
    unstable.stable = false;
    CHECK_THROWS_AS(train_readout(unstable, g, 1e-8, FitWindow{10, 100}),
                    std::runtime_error);

    CHECK_THROWS_AS(train_readout(good, g, 1e-8, FitWindow{300, 200}),
                    std::runtime_error);  // discard+fit exceeds the run
    CHECK_THROWS_AS(train_readout(good, g, 1e-8, FitWindow{-1, 100}),
                    std::invalid_argument);
    CHECK_THROWS_AS(train_readout(good, g, 1e-8, FitWindow{10, 0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(train_readout(good, Vector::Ones(400), 1e-8, FitWindow{10, 100}),
                    std::invalid_argument);  // constant target
}

TEST_CASE("evaluation degrades to the infinity sentinel instead of throwing") {
    const ReservoirRun run = stable_run(8, 400);
    const Vector g = noise_input(9, 400);
    const TrainResult fit = train_readout(run, g, 1e-8, FitWindow{50, 300});

    ReservoirRun unstable = run;
    unstable.stable = false;
    CHECK(std::isinf(evaluate_readout(fit.model, unstable, g)));

    const ReservoirRun tiny = stable_run(8, 100);
    CHECK(std::isinf(evaluate_readout(fit.model, tiny, noise_input(9, 100))));
}
