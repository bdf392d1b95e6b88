#include "edgescope/diagnostics/entropy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace edgescope {

namespace {

constexpr int kMaxWindow = 8;

constexpr std::array<int, kMaxWindow + 1> kFactorial = {1, 1, 2, 6, 24, 120, 720, 5040, 40320};

}  // namespace

int ordinal_pattern_code(const double* v, int window) {
    // Lehmer code of the permutation induced by stable sorting: digit i counts
    // strictly smaller values to the right, so equal values keep their
    // original (earlier-index-first) order.
    int code = 0;
    for (int i = 0; i < window; ++i) {
        int rank = 0;
        for (int j = i + 1; j < window; ++j)
            if (v[j] < v[i]) ++rank;
        code += rank * kFactorial[window - 1 - i];
    }
    return code;
}

EntropyReport ordinal_entropy(const Matrix& states, int window) {
    if (window < 2 || window > kMaxWindow)
        throw std::invalid_argument("ordinal_entropy: window must be in [2, 8]");
    const long t_len = states.rows();
    const long m = states.cols();
    if (m < 1) throw std::invalid_argument("ordinal_entropy: no channels");
    if (t_len < window + 1) throw std::invalid_argument("ordinal_entropy: series too short");

    const long n_sym = t_len - window + 1;
    const int bytes_per_code = kFactorial[window] <= 256 ? 1 : 2;

    // Per-time global symbol = concatenated per-node pattern codes.
    std::vector<unsigned char> codes(static_cast<std::size_t>(n_sym) * m * bytes_per_code);
    std::vector<double> column(t_len);
    for (long i = 0; i < m; ++i) {
        Eigen::Map<Vector>(column.data(), t_len) = states.col(i);
        for (long t = 0; t < n_sym; ++t) {
            const int code = ordinal_pattern_code(column.data() + t, window);
            unsigned char* slot = codes.data() + (static_cast<std::size_t>(t) * m + i) * bytes_per_code;
            slot[0] = static_cast<unsigned char>(code & 0xFF);
            if (bytes_per_code == 2) slot[1] = static_cast<unsigned char>(code >> 8);
        }
    }

    std::unordered_map<std::string, long long> histogram;
    const std::size_t key_len = static_cast<std::size_t>(m) * bytes_per_code;
    for (long t = 0; t < n_sym; ++t) {
        const char* begin = reinterpret_cast<const char*>(codes.data()) + t * key_len;
        ++histogram[std::string(begin, key_len)];
    }

    EntropyReport report;
    report.window = window;
    report.n_symbols = static_cast<long>(histogram.size());
    report.counts.reserve(histogram.size());
    for (const auto& [sym, count] : histogram) report.counts.push_back(count);
    std::sort(report.counts.begin(), report.counts.end(), std::greater<>());

    const double total = static_cast<double>(n_sym);
    double h = 0.0;
    for (long long count : report.counts) {
        const double p = static_cast<double>(count) / total;
        h -= p * std::log(p);
    }
    report.H = std::max(h, 0.0);  // clamp the -0.0 of a single-symbol stream
    return report;
}

}  // namespace edgescope
