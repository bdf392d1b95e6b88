#pragma once

#include <vector>

#include "edgescope/numerics.hpp"

namespace edgescope {

struct EntropyReport {
    double H = 0.0;        ///< Shannon entropy of the global-symbol histogram, nats
    long n_symbols = 0;    ///< number of distinct global symbols K
    int window = 4;
    std::vector<long long> counts;  ///< histogram, sorted descending
};

/// Ordinal-pattern entropy of a multichannel series: each node's length-`window`
/// sliding window (stride 1) maps to an ordinal pattern (rank order, ties
/// broken by earlier index); the per-node patterns at one time concatenate
/// into a single global symbol; H = -sum p ln p over the symbol histogram.
EntropyReport ordinal_entropy(const Matrix& states, int window = 4);

/// Lehmer code in [0, w!) of the ordinal pattern of w consecutive values.
int ordinal_pattern_code(const double* values, int window);

}  // namespace edgescope
