#pragma once

namespace edgescope {

/// One classical fourth-order Runge-Kutta step for an autonomous-in-form
/// field f(state) (time dependence, if any, is captured by the callable).
///
/// State must support axpy-style arithmetic (Eigen vectors, doubles, ...).
template <typename State, typename Field>
State rk4_step(const Field& f, const State& y, double dt) {
    const State k1 = f(y);
    const State k2 = f(y + (0.5 * dt) * k1);
    const State k3 = f(y + (0.5 * dt) * k2);
    const State k4 = f(y + dt * k3);
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace edgescope
