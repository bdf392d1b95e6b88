#pragma once

#include <cstdint>

#include "edgescope/numerics.hpp"

namespace edgescope {

struct ContinuityParams {
    double eps_fraction = 0.2;   ///< epsilon as a fraction of the target RMS radius
    int n_ref = 100;             ///< reference points
    int theiler = 10;            ///< temporal exclusion half-width
    double delta_shrink = 0.5;   ///< delta ladder factor
    std::uint64_t seed = 2025;   ///< reference/pair sampling seed
    int floor_pairs = 2000;      ///< sampled pairs for the 1st-percentile distance floor
};

enum class ContinuityDirection { Forward, Reverse };

struct ContinuityReport {
    double psi = 0.0;
    ContinuityDirection direction = ContinuityDirection::Forward;
    double eps_fraction = 0.0;
    int n_ref = 0;
    int theiler = 0;
};

/// Confidence that points close in X map to points close in Y (evidence for a
/// continuous function X -> Y), averaged over seeded reference points.
/// Direction Reverse swaps the roles of X and Y before computing, so callers
/// pass arguments in one fixed order for both directions.
///
/// Per reference t0: epsilon = eps_fraction x RMS radius of Y; the chance
/// level is the fraction of non-Theiler points already within epsilon of
/// y_t0; delta starts at the RMS radius of X and shrinks by delta_shrink
/// until every non-Theiler delta-neighbor of x_t0 lands within epsilon of
/// y_t0, giving confidence 1 - p_chance^n for n such neighbors; if delta
/// falls below the 1st-percentile interpoint distance with no neighbors
/// left, the confidence is 0.
ContinuityReport continuity_stat(const Matrix& x, const Matrix& y, const ContinuityParams& params,
                                 ContinuityDirection direction = ContinuityDirection::Forward);

}  // namespace edgescope
