#pragma once

#include <vector>

#include "edgescope/numerics.hpp"

namespace edgescope {

struct SpectralDiffReport {
    double delta_f = 0.0;
    std::vector<double> per_node_terms;  ///< second-term value per node
    long guard_hits = 0;                 ///< nodes whose degenerate denominator was guarded
};

/// Weighted spectral difference between the target signal g and the M node
/// signals: delta_f = wmf(G) - (1/M) sum_i term_i with
/// wmf(S) = sum |S(f_j)| f_j / sum |S(f_j)| and, in the primary form,
/// term_i built from the signed difference spectrum:
/// term_i = sum (|G|-|R_i|) f_j / sum (|G|-|R_i|).
/// A node whose denominator magnitude falls below 1e-9 x sum|G| contributes
/// term_i = wmf(G) (zero contribution to delta_f) and counts as a guard hit.
/// The prose variant instead uses term_i = wmf(R_i), with the same guard on
/// sum |R_i|.
///
/// Positive delta_f means the target carries more high-frequency weight than
/// the reservoir signals.
SpectralDiffReport spectral_difference(const Vector& g, const Matrix& states,
                                       bool prose_variant = false);

}  // namespace edgescope
