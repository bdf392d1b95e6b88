#pragma once

#include <cstdint>

#include "edgescope/numerics.hpp"

namespace edgescope {

/// Fixed random network: coupling matrix A (zero diagonal, rescaled to a
/// prescribed spectral radius) plus input weights W.
struct NetworkSpec {
    int M = 0;
    Matrix A;
    Vector W;
    double sigma = 0.0;  ///< spectral radius actually applied
    std::uint64_t seed = 0;
};

enum class ReservoirKind { ODE, MAP };

/// Node dynamics: r' (or r(n+1)) = alpha [ p1 r + p2 r^2 + p3 r^3 + A r + W s ].
struct ReservoirParams {
    ReservoirKind kind = ReservoirKind::ODE;
    double p1 = 0.0;
    double p2 = 0.0;
    double p3 = 0.0;
    double alpha = 1.0;
    double dt = 0.02;  ///< integration step (ODE only)
};

/// Result of driving a reservoir with an input sequence.  Row n of `states`
/// is the node vector after consuming inputs s(0..n-1); row 0 is the initial
/// condition.  On instability the matrix is truncated just after the first
/// offending row.
struct ReservoirRun {
    Matrix states;
    bool stable = true;
    long divergence_step = -1;  ///< first row with |r_i| beyond threshold, -1 if stable
    Vector input_used;          ///< the driving s, kept for diagnostics
};

inline constexpr double kDefaultDivergenceThreshold = 1e6;

/// Build the random network: select floor(density * M^2) entries of an M x M
/// grid, fill them uniform [-1,1), zero the diagonal, rescale to spectral
/// radius sigma; W is filled uniform [-1,1).  The structural draw depends
/// only on (seed, M, density); sigma enters as a pure rescale.  On the
/// (measure-zero) chance of a nilpotent draw the next seed substream is used.
NetworkSpec build_network(std::uint64_t seed, int M, double sigma, double density = 0.5);

/// Integrate the polynomial ODE reservoir with RK4 at params.dt, holding the
/// input constant within each step (driver and reservoir share the grid).
ReservoirRun run_ode_reservoir(const NetworkSpec& net, const ReservoirParams& params,
                               const Vector& s, const Vector& r0,
                               double threshold = kDefaultDivergenceThreshold);

/// Iterate the polynomial map reservoir.
ReservoirRun run_map_reservoir(const NetworkSpec& net, const ReservoirParams& params,
                               const Vector& s, const Vector& r0,
                               double threshold = kDefaultDivergenceThreshold);

/// Dispatch on params.kind.
ReservoirRun run_reservoir(const NetworkSpec& net, const ReservoirParams& params,
                           const Vector& s, const Vector& r0,
                           double threshold = kDefaultDivergenceThreshold);

/// State-derivative of the update rule at state r: for the MAP kind the
/// one-step Jacobian, for the ODE kind the instantaneous Jacobian of the
/// vector field (the flow-map propagator over dt is assembled by the
/// diagnostics layer).  The input term W*s has zero state-derivative, so the
/// result is the conditional (driven) Jacobian and s_value is unused.
Matrix one_step_jacobian(const NetworkSpec& net, const ReservoirParams& params,
                         const Vector& r, double s_value);

struct DivergenceCheck {
    bool stable = true;
    long step = -1;
};

/// Scan a (possibly partial) state matrix for the first row containing a
/// non-finite value or a magnitude above threshold.
DivergenceCheck detect_divergence(const Matrix& states,
                                  double threshold = kDefaultDivergenceThreshold);

}  // namespace edgescope
