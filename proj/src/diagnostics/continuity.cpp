#include "edgescope/diagnostics/continuity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "edgescope/rng.hpp"

namespace edgescope {

namespace {

double rms_radius(const Matrix& pts) {
    const Eigen::RowVectorXd centroid = pts.colwise().mean();
    return std::sqrt((pts.rowwise() - centroid).rowwise().squaredNorm().mean());
}

}  // namespace

ContinuityReport continuity_stat(const Matrix& x, const Matrix& y, const ContinuityParams& p,
                                 ContinuityDirection direction) {
    if (direction == ContinuityDirection::Reverse) {
        ContinuityReport report = continuity_stat(y, x, p, ContinuityDirection::Forward);
        report.direction = ContinuityDirection::Reverse;
        return report;
    }
    const long t_len = x.rows();
    if (t_len != y.rows()) throw std::invalid_argument("continuity_stat: X and Y must be time-aligned");
    if (t_len < 2000) throw std::invalid_argument("continuity_stat: need at least 2000 points");
    if (p.n_ref < 1 || p.theiler < 0 || !(p.eps_fraction > 0.0) ||
        !(p.delta_shrink > 0.0 && p.delta_shrink < 1.0) || p.floor_pairs < 100)
        throw std::invalid_argument("continuity_stat: malformed parameters");

    const double radius_y = rms_radius(y);
    const double radius_x = rms_radius(x);
    if (!(radius_y > 0.0)) throw std::invalid_argument("continuity_stat: degenerate target set");
    if (!(radius_x > 0.0)) throw std::invalid_argument("continuity_stat: degenerate source set");

    const double eps = p.eps_fraction * radius_y;
    Rng rng(p.seed);

    // Distance floor: 1st percentile of sampled non-Theiler interpoint
    // distances in X, the scale below which the delta ladder gives up.
    std::vector<double> sampled;
    sampled.reserve(p.floor_pairs);
    while (static_cast<int>(sampled.size()) < p.floor_pairs) {
        const long i = static_cast<long>(rng.next_below(static_cast<std::uint64_t>(t_len)));
        const long j = static_cast<long>(rng.next_below(static_cast<std::uint64_t>(t_len)));
        if (std::abs(i - j) <= p.theiler) continue;
        sampled.push_back((x.row(i) - x.row(j)).norm());
    }
    std::sort(sampled.begin(), sampled.end());
    // Keep the floor positive so the ladder terminates even on data with
    // exactly duplicated rows.
    const double floor =
        std::max(sampled[static_cast<std::size_t>(0.01 * static_cast<double>(sampled.size()))],
                 1e-12 * radius_x);

    std::vector<double> dx(t_len);
    std::vector<char> y_close(t_len);
    double conf_sum = 0.0;
    for (int m = 0; m < p.n_ref; ++m) {
        const long t0 = static_cast<long>(rng.next_below(static_cast<std::uint64_t>(t_len)));
        long n_valid = 0, n_chance = 0;
        for (long t = 0; t < t_len; ++t) {
            if (std::abs(t - t0) <= p.theiler) {
                dx[t] = -1.0;  // marks Theiler-excluded
                continue;
            }
            dx[t] = (x.row(t) - x.row(t0)).norm();
            y_close[t] = (y.row(t) - y.row(t0)).norm() < eps;
            ++n_valid;
            n_chance += y_close[t];
        }
        if (n_valid == 0) continue;  // degenerate Theiler window; contributes 0
        const double p_chance = static_cast<double>(n_chance) / static_cast<double>(n_valid);

        double conf = 0.0;
        for (double delta = radius_x;; delta *= p.delta_shrink) {
            long n_in_ball = 0;
            bool all_ok = true;
            for (long t = 0; t < t_len; ++t) {
                if (dx[t] < 0.0 || dx[t] >= delta) continue;
                ++n_in_ball;
                if (!y_close[t]) all_ok = false;
            }
            if (n_in_ball == 0) {
                // The ball emptied before any rung succeeded; once delta is
                // below the distance floor there is no evidence to find.
                if (delta < floor) break;
            } else if (all_ok) {
                conf = 1.0 - std::pow(p_chance, n_in_ball);
                break;
            }
            // Exactly duplicated source rows with differing images never
            // leave the ball; give up at numerical scale.
            if (delta < 1e-12 * radius_x) break;
        }
        conf_sum += conf;
    }

    ContinuityReport report;
    report.psi = conf_sum / static_cast<double>(p.n_ref);
    report.direction = direction;
    report.eps_fraction = p.eps_fraction;
    report.n_ref = p.n_ref;
    report.theiler = p.theiler;
    return report;
}

}  // namespace edgescope
