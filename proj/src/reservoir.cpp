#include "edgescope/reservoir.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace edgescope {

NetworkSpec build_network(std::uint64_t seed, int M, double sigma, double density) {
    if (M < 2) throw std::invalid_argument("build_network: M must be >= 2");
    if (!(sigma > 0.0)) throw std::invalid_argument("build_network: sigma must be positive");
    if (!(density > 0.0) || density > 1.0)
        throw std::invalid_argument("build_network: density must be in (0, 1]");

    const long total = static_cast<long>(M) * M;
    const long n_select = static_cast<long>(density * static_cast<double>(total));
    for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
        Rng rng = Rng::substream(seed, attempt);
        // Partial Fisher-Yates: the first n_select slots are the chosen entries.
        std::vector<long> idx(total);
        std::iota(idx.begin(), idx.end(), 0L);
        for (long k = 0; k < n_select; ++k) {
            const long j = k + static_cast<long>(rng.next_below(static_cast<std::uint64_t>(total - k)));
            std::swap(idx[k], idx[j]);
        }
        Matrix a = Matrix::Zero(M, M);
        for (long k = 0; k < n_select; ++k) a(idx[k] / M, idx[k] % M) = rng.uniform(-1.0, 1.0);
        a.diagonal().setZero();

        Vector w(M);
        for (int i = 0; i < M; ++i) w[i] = rng.uniform(-1.0, 1.0);

        const double rho = spectral_radius(a);
        if (rho > 0.0) {
            NetworkSpec net;
            net.M = M;
            net.A = a * (sigma / rho);
            net.W = std::move(w);
            net.sigma = sigma;
            net.seed = seed;
            return net;
        }
    }
    throw std::runtime_error("build_network: repeated nilpotent draws");
}

namespace {

/// Bracket of the node update rule times alpha: out = alpha (p1 r + p2 r^2 +
/// p3 r^3 + A r + W s).
struct UpdateField {
    const NetworkSpec& net;
    const ReservoirParams& p;

    void operator()(const Vector& r, double s_value, Vector& out) const {
        out.noalias() = net.A * r;
        out.array() += p.p1 * r.array() + p.p2 * r.array().square() + p.p3 * r.array().cube();
        out.noalias() += s_value * net.W;
        out *= p.alpha;
    }
};

bool row_within(const Vector& r, double threshold) {
    return r.allFinite() && r.cwiseAbs().maxCoeff() <= threshold;
}

void check_run_args(const NetworkSpec& net, const Vector& s, const Vector& r0, double threshold) {
    if (net.M <= 0 || net.A.rows() != net.M || net.A.cols() != net.M || net.W.size() != net.M)
        throw std::invalid_argument("reservoir run: malformed network");
    if (r0.size() != net.M) throw std::invalid_argument("reservoir run: r0 length mismatch");
    if (s.size() < 1) throw std::invalid_argument("reservoir run: empty input");
    if (!(threshold > 0.0)) throw std::invalid_argument("reservoir run: threshold must be positive");
}

ReservoirRun finalize(Matrix&& states, const Vector& s, long diverged_at) {
    ReservoirRun run;
    if (diverged_at >= 0) {
        run.stable = false;
        run.divergence_step = diverged_at;
        run.states = states.topRows(diverged_at + 1);
    } else {
        run.states = std::move(states);
    }
    run.input_used = s;
    return run;
}

}  // namespace

ReservoirRun run_ode_reservoir(const NetworkSpec& net, const ReservoirParams& params,
                               const Vector& s, const Vector& r0, double threshold) {
    if (params.kind != ReservoirKind::ODE)
        throw std::invalid_argument("run_ode_reservoir: params.kind must be ODE");
    if (!(params.dt > 0.0)) throw std::invalid_argument("run_ode_reservoir: dt must be positive");
    check_run_args(net, s, r0, threshold);

    const long T = s.size();
    const int M = net.M;
    Matrix states(T, M);
    states.row(0) = r0;
    const UpdateField field{net, params};
    const double dt = params.dt;
    Vector r = r0, y(M), k1(M), k2(M), k3(M), k4(M);
    long diverged_at = -1;
    for (long n = 1; n < T; ++n) {
        const double sv = s[n - 1];  // zero-order hold across the step
        field(r, sv, k1);
        y = r + (0.5 * dt) * k1;
        field(y, sv, k2);
        y = r + (0.5 * dt) * k2;
        field(y, sv, k3);
        y = r + dt * k3;
        field(y, sv, k4);
        r += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        states.row(n) = r;
        if (!row_within(r, threshold)) {
            diverged_at = n;
            break;
        }
    }
    return finalize(std::move(states), s, diverged_at);
}

ReservoirRun run_map_reservoir(const NetworkSpec& net, const ReservoirParams& params,
                               const Vector& s, const Vector& r0, double threshold) {
    if (params.kind != ReservoirKind::MAP)
        throw std::invalid_argument("run_map_reservoir: params.kind must be MAP");
    check_run_args(net, s, r0, threshold);

    const long T = s.size();
    Matrix states(T, net.M);
    states.row(0) = r0;
    const UpdateField field{net, params};
    Vector r = r0, next(net.M);
    long diverged_at = -1;
    for (long n = 1; n < T; ++n) {
        field(r, s[n - 1], next);
        states.row(n) = next;
        if (!row_within(next, threshold)) {
            diverged_at = n;
            break;
        }
        r.swap(next);
    }
    return finalize(std::move(states), s, diverged_at);
}

ReservoirRun run_reservoir(const NetworkSpec& net, const ReservoirParams& params,
                           const Vector& s, const Vector& r0, double threshold) {
    return params.kind == ReservoirKind::ODE ? run_ode_reservoir(net, params, s, r0, threshold)
                                             : run_map_reservoir(net, params, s, r0, threshold);
}

Matrix one_step_jacobian(const NetworkSpec& net, const ReservoirParams& params,
                         const Vector& r, double /*s_value*/) {
    if (r.size() != net.M) throw std::invalid_argument("one_step_jacobian: state length mismatch");
    if (!r.allFinite()) throw std::invalid_argument("one_step_jacobian: non-finite state");
    Matrix j = params.alpha * net.A;
    j.diagonal().array() +=
        params.alpha * (params.p1 + 2.0 * params.p2 * r.array() + 3.0 * params.p3 * r.array().square());
    return j;
}

DivergenceCheck detect_divergence(const Matrix& states, double threshold) {
    for (long n = 0; n < states.rows(); ++n) {
        const Vector row = states.row(n);
        if (!row.allFinite() || row.cwiseAbs().maxCoeff() > threshold) return {false, n};
    }
    return {true, -1};
}

}  // namespace edgescope
