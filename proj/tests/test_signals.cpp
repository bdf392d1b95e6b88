#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "edgescope/signals.hpp"

using namespace edgescope;

TEST_CASE("field and jacobian are consistent at a probe point") {
    const Eigen::Vector3d x(1.3, -0.7, 12.0);
    const double c1 = 10.0, c2 = 28.0, c3 = 8.0 / 3.0;
    const Eigen::Matrix3d jac = lorenz_jacobian(x, c1, c2, c3);
    const double eps = 1e-6;
    for (int j = 0; j < 3; ++j) {
        Eigen::Vector3d dx = Eigen::Vector3d::Zero();
        dx(j) = eps;
        const Eigen::Vector3d fd =
            (lorenz_field(x + dx, c1, c2, c3) - lorenz_field(x - dx, c1, c2, c3)) / (2.0 * eps);
        for (int i = 0; i < 3; ++i) CHECK(jac(i, j) == doctest::Approx(fd(i)).epsilon(1e-6));
    }
}

TEST_CASE("chaotic trajectories are reproducible and stay on the attractor") {
    const DriverTrajectory a = lorenz_trajectory(4000, 5000, 11);
    const DriverTrajectory b = lorenz_trajectory(4000, 5000, 11);
    const DriverTrajectory c = lorenz_trajectory(4000, 5000, 12);
    CHECK((a.states - b.states).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.states - c.states).cwiseAbs().maxCoeff() > 1.0);  // seeds decorrelate

    REQUIRE(a.states.rows() == 4000);
    CHECK(a.dt == 0.02);
    // Attractor bounds: |x|,|y| < 25, z in (0, 55) after the transient.
    CHECK(a.states.col(0).cwiseAbs().maxCoeff() < 25.0);
    CHECK(a.states.col(2).minCoeff() > 0.0);
    CHECK(a.states.col(2).maxCoeff() < 55.0);

    // Input is the normalized first component; target is the raw third.
    CHECK(a.input_index == 0);
    CHECK(a.target_index == 2);
    CHECK(std::abs(a.input.mean()) < 1e-12);
    CHECK((a.target - a.states.col(2)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("short requests are rejected") {
    CHECK_THROWS_AS(lorenz_trajectory(100, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(map3d_trajectory(100, 0, 1), std::invalid_argument);
}

TEST_CASE("the map wraps its first component and shifts the others") {
    const Eigen::Vector3d x(0.73, 0.21, 0.58);
    const Eigen::Vector3d y = map3d_step(x);
    // x2' = mod(x1,1) and x3' = x2 by the companion structure.
    CHECK(y(1) == doctest::Approx(0.73));
    CHECK(y(2) == doctest::Approx(0.21));
    CHECK(y(0) == doctest::Approx(1.1 * 0.73 + 0.58));

    // Negative first components wrap into [0, 1).
    const Eigen::Vector3d neg(-0.25, 0.0, 0.0);
    CHECK(map3d_step(neg)(1) == doctest::Approx(0.75));
}

TEST_CASE("map trajectories are reproducible with components in the expected band") {
    const DriverTrajectory a = map3d_trajectory(3000, 1000, 5);
    const DriverTrajectory b = map3d_trajectory(3000, 1000, 5);
    CHECK((a.states - b.states).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE(a.states.rows() == 3000);
    CHECK(a.dt == 1.0);
    CHECK(std::abs(a.input.mean()) < 1e-12);
    CHECK(population_std(a.input) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("normalization centers and scales, rejecting constants") {
    Vector raw(4);
    raw << 1.0, 2.0, 3.0, 4.0;
    const Vector s = normalize_input(raw);
    CHECK(std::abs(s.mean()) < 1e-15);
    CHECK(population_std(s) == doctest::Approx(1.0).epsilon(1e-12));

    Vector flat = Vector::Constant(10, 3.3);
    CHECK_THROWS_AS(normalize_input(flat), std::invalid_argument);
}
