#include "edgescope/signals.hpp"

#include <cmath>
#include <stdexcept>

#include "edgescope/rk4.hpp"

namespace edgescope {

Eigen::Vector3d lorenz_field(const Eigen::Vector3d& x, double c1, double c2, double c3) {
    return {c1 * (x[1] - x[0]), x[0] * (c2 - x[2]) - x[1], x[0] * x[1] - c3 * x[2]};
}

Eigen::Matrix3d lorenz_jacobian(const Eigen::Vector3d& x, double c1, double c2, double c3) {
    Eigen::Matrix3d j;
    j << -c1, c1, 0.0,
         c2 - x[2], -1.0, -x[0],
         x[1], x[0], -c3;
    return j;
}

Eigen::Matrix3d map3d_matrix() {
    Eigen::Matrix3d m;
    m << 1.1, 0.0, 1.0,
         1.0, 0.0, 0.0,
         0.0, 1.0, 0.0;
    return m;
}

Eigen::Vector3d map3d_step(const Eigen::Vector3d& x) {
    const Eigen::Vector3d y(x[0] - std::floor(x[0]), x[1], x[2]);
    return map3d_matrix() * y;
}

namespace {

void check_lengths(long n_steps, long transient) {
    if (n_steps < 2000) throw std::invalid_argument("driver trajectory: n_steps must be >= 2000");
    if (transient < 0) throw std::invalid_argument("driver trajectory: negative transient");
}

}  // namespace

DriverTrajectory lorenz_trajectory(long n_steps, long transient, std::uint64_t seed,
                                   double c1, double c2, double c3, double dt) {
    check_lengths(n_steps, transient);
    if (dt <= 0.0) throw std::invalid_argument("lorenz_trajectory: dt must be positive");
    Rng rng(seed);
    Eigen::Vector3d x(1.0, 1.0, 1.0);
    for (int i = 0; i < 3; ++i) x[i] += 1e-3 * rng.uniform(-1.0, 1.0);
    const auto field = [&](const Eigen::Vector3d& y) { return lorenz_field(y, c1, c2, c3); };
    for (long n = 0; n < transient; ++n) x = rk4_step(field, x, dt);

    DriverTrajectory traj;
    traj.states.resize(n_steps, 3);
    traj.dt = dt;
    traj.input_index = 0;
    traj.target_index = 2;
    for (long n = 0; n < n_steps; ++n) {
        traj.states.row(n) = x;
        if (!x.allFinite()) throw std::runtime_error("lorenz_trajectory: driver diverged");
        x = rk4_step(field, x, dt);
    }
    traj.input = normalize_input(traj.states.col(traj.input_index));
    traj.target = traj.states.col(traj.target_index);
    return traj;
}

DriverTrajectory map3d_trajectory(long n_steps, long transient, std::uint64_t seed) {
    check_lengths(n_steps, transient);
    Rng rng(seed);
    Eigen::Vector3d x(rng.uniform01(), rng.uniform01(), rng.uniform01());
    for (long n = 0; n < transient; ++n) x = map3d_step(x);

    DriverTrajectory traj;
    traj.states.resize(n_steps, 3);
    traj.dt = 1.0;
    traj.input_index = 0;
    traj.target_index = 2;
    for (long n = 0; n < n_steps; ++n) {
        traj.states.row(n) = x;
        x = map3d_step(x);
    }
    traj.input = normalize_input(traj.states.col(traj.input_index));
    traj.target = traj.states.col(traj.target_index);
    return traj;
}

Vector normalize_input(const Vector& raw) {
    if (raw.size() == 0) throw std::invalid_argument("normalize_input: empty signal");
    const double mean = raw.mean();
    const double sd = population_std(raw);
    if (!(sd > 0.0)) throw std::invalid_argument("normalize_input: constant signal");
    return (raw.array() - mean) / sd;
}

}  // namespace edgescope
