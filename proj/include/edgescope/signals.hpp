#pragma once

#include <Eigen/Dense>

#include "edgescope/numerics.hpp"
#include "edgescope/rng.hpp"

namespace edgescope {

/// Time series of a driver system together with the designated input
/// (normalized) and training-target components.
struct DriverTrajectory {
    Matrix states;     ///< T x 3 full state, one row per step
    double dt = 1.0;   ///< step in driver time units (0.02 for the ODE, 1 per iterate)
    int input_index = 0;
    int target_index = 2;
    Vector input;      ///< normalized input s (mean 0, std 1)
    Vector target;     ///< raw training signal g
};

/// Lorenz vector field (c1, c2, c3) = (10, 28, 8/3) by default elsewhere.
Eigen::Vector3d lorenz_field(const Eigen::Vector3d& x, double c1, double c2, double c3);

/// Jacobian of the Lorenz field at state x.
Eigen::Matrix3d lorenz_jacobian(const Eigen::Vector3d& x, double c1, double c2, double c3);

/// Linear part of the 3d map: x(n+1) = map3d_matrix() * y(n) with
/// y = (mod(x1, 1), x2, x3).
Eigen::Matrix3d map3d_matrix();

/// One iterate of the 3d nonlinear map.
Eigen::Vector3d map3d_step(const Eigen::Vector3d& x);

/// Integrate the Lorenz system with RK4 and package input/target components
/// (input = x, target = z).  Starts near (1,1,1) with a small seeded
/// perturbation and discards `transient` steps before recording.
DriverTrajectory lorenz_trajectory(long n_steps, long transient, std::uint64_t seed,
                                   double c1 = 10.0, double c2 = 28.0, double c3 = 8.0 / 3.0,
                                   double dt = 0.02);

/// Iterate the 3d nonlinear map from a seeded uniform (0,1)^3 start and
/// package input/target components (input = x1, target = x3).
DriverTrajectory map3d_trajectory(long n_steps, long transient, std::uint64_t seed);

/// (raw - mean) / std with the population standard deviation.
/// Throws std::invalid_argument on a constant signal.
Vector normalize_input(const Vector& raw);

}  // namespace edgescope
