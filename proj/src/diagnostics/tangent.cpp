#include "edgescope/diagnostics/tangent.hpp"

#include <stdexcept>

#include "edgescope/rk4.hpp"

namespace edgescope {

namespace {

void check_states(const Matrix& states, int dim) {
    if (states.rows() < 2) throw std::invalid_argument("tangent system: need at least two states");
    if (states.cols() != dim) throw std::invalid_argument("tangent system: state width mismatch");
}

Vector poly_diag(const ReservoirParams& p, const Vector& r) {
    return p.p1 + 2.0 * p.p2 * r.array() + 3.0 * p.p3 * r.array().square();
}

}  // namespace

MapReservoirTangent::MapReservoirTangent(const NetworkSpec& net, const ReservoirParams& params,
                                         const Matrix& states)
    : net_(net), params_(params), states_(states), at_(net.A.transpose()) {
    check_states(states, net.M);
    if (params.kind != ReservoirKind::MAP)
        throw std::invalid_argument("MapReservoirTangent: params.kind must be MAP");
}

void MapReservoirTangent::begin_step(long n) {
    diag_ = poly_diag(params_, states_.row(n).transpose());
}

void MapReservoirTangent::apply(Matrix& v) const {
    Matrix out = net_.A * v;
    out.noalias() += diag_.asDiagonal() * v;
    v = params_.alpha * out;
}

void MapReservoirTangent::apply_transpose(Matrix& v) const {
    Matrix out = at_ * v;
    out.noalias() += diag_.asDiagonal() * v;
    v = params_.alpha * out;
}

OdeReservoirTangent::OdeReservoirTangent(const NetworkSpec& net, const ReservoirParams& params,
                                         const Matrix& states, const Vector& input)
    : net_(net), params_(params), states_(states), input_(input), at_(net.A.transpose()) {
    check_states(states, net.M);
    if (params.kind != ReservoirKind::ODE)
        throw std::invalid_argument("OdeReservoirTangent: params.kind must be ODE");
    if (input.size() < states.rows() - 1)
        throw std::invalid_argument("OdeReservoirTangent: input shorter than trajectory");
}

void OdeReservoirTangent::begin_step(long n) {
    // Reconstruct the RK4 stage states of the step r(n) -> r(n+1), which the
    // integrator produced with the zero-order-held input value s(n).
    const Vector r = states_.row(n).transpose();
    const double sv = input_[n];
    const double dt = params_.dt;
    const auto field = [&](const Vector& y) -> Vector {
        Vector out = net_.A * y;
        out.array() +=
            params_.p1 * y.array() + params_.p2 * y.array().square() + params_.p3 * y.array().cube();
        out.noalias() += sv * net_.W;
        return params_.alpha * out;
    };
    const Vector k1 = field(r);
    const Vector y2 = r + (0.5 * dt) * k1;
    const Vector k2 = field(y2);
    const Vector y3 = r + (0.5 * dt) * k2;
    const Vector k3 = field(y3);
    const Vector y4 = r + dt * k3;
    stage_diag_[0] = poly_diag(params_, r);
    stage_diag_[1] = poly_diag(params_, y2);
    stage_diag_[2] = poly_diag(params_, y3);
    stage_diag_[3] = poly_diag(params_, y4);
}

void OdeReservoirTangent::jac_apply(const Vector& diag, const Matrix& v, Matrix& out) const {
    out.noalias() = net_.A * v;
    out.noalias() += diag.asDiagonal() * v;
    out *= params_.alpha;
}

void OdeReservoirTangent::jac_apply_transpose(const Vector& diag, const Matrix& v,
                                              Matrix& out) const {
    out.noalias() = at_ * v;
    out.noalias() += diag.asDiagonal() * v;
    out *= params_.alpha;
}

void OdeReservoirTangent::apply(Matrix& v) const {
    // Variational RK4: T1 = J1 V, T2 = J2 (V + a T1), T3 = J3 (V + a T2),
    // T4 = J4 (V + dt T3); V += dt/6 (T1 + 2 T2 + 2 T3 + T4), a = dt/2.
    const double dt = params_.dt;
    const double a = 0.5 * dt;
    Matrix t1, t2, t3, t4, tmp;
    jac_apply(stage_diag_[0], v, t1);
    tmp = v + a * t1;
    jac_apply(stage_diag_[1], tmp, t2);
    tmp = v + a * t2;
    jac_apply(stage_diag_[2], tmp, t3);
    tmp = v + dt * t3;
    jac_apply(stage_diag_[3], tmp, t4);
    v += (dt / 6.0) * (t1 + 2.0 * t2 + 2.0 * t3 + t4);
}

void OdeReservoirTangent::apply_transpose(Matrix& v) const {
    // Adjoint of apply(), derived by reversing the stage recurrence:
    //   q4 = J4^T (dt/6 v);        t3 = dt/3 v + dt  q4
    //   q3 = J3^T t3;              t2 = dt/3 v + a q3
    //   q2 = J2^T t2;              t1 = dt/6 v + a q2
    //   q1 = J1^T t1;              Phi^T v = v + q1 + q2 + q3 + q4
    const double dt = params_.dt;
    const double a = 0.5 * dt;
    const double c1 = dt / 6.0;
    const double c2 = dt / 3.0;
    Matrix q1, q2, q3, q4, tmp;
    tmp = c1 * v;
    jac_apply_transpose(stage_diag_[3], tmp, q4);
    tmp = c2 * v + dt * q4;
    jac_apply_transpose(stage_diag_[2], tmp, q3);
    tmp = c2 * v + a * q3;
    jac_apply_transpose(stage_diag_[1], tmp, q2);
    tmp = c1 * v + a * q2;
    jac_apply_transpose(stage_diag_[0], tmp, q1);
    v += q1 + q2 + q3 + q4;
}

LorenzTangent::LorenzTangent(const Matrix& states, double c1, double c2, double c3, double dt)
    : states_(states), c1_(c1), c2_(c2), c3_(c3), dt_(dt) {
    check_states(states, 3);
    if (!(dt > 0.0)) throw std::invalid_argument("LorenzTangent: dt must be positive");
}

void LorenzTangent::begin_step(long n) {
    const Eigen::Vector3d x = states_.row(n).transpose();
    const auto field = [&](const Eigen::Vector3d& y) { return lorenz_field(y, c1_, c2_, c3_); };
    const Eigen::Vector3d k1 = field(x);
    const Eigen::Vector3d y2 = x + (0.5 * dt_) * k1;
    const Eigen::Vector3d k2 = field(y2);
    const Eigen::Vector3d y3 = x + (0.5 * dt_) * k2;
    const Eigen::Vector3d k3 = field(y3);
    const Eigen::Vector3d y4 = x + dt_ * k3;
    stage_jac_[0] = lorenz_jacobian(x, c1_, c2_, c3_);
    stage_jac_[1] = lorenz_jacobian(y2, c1_, c2_, c3_);
    stage_jac_[2] = lorenz_jacobian(y3, c1_, c2_, c3_);
    stage_jac_[3] = lorenz_jacobian(y4, c1_, c2_, c3_);
}

void LorenzTangent::apply(Matrix& v) const {
    const double a = 0.5 * dt_;
    const Matrix t1 = stage_jac_[0] * v;
    const Matrix t2 = stage_jac_[1] * (v + a * t1);
    const Matrix t3 = stage_jac_[2] * (v + a * t2);
    const Matrix t4 = stage_jac_[3] * (v + dt_ * t3);
    v += (dt_ / 6.0) * (t1 + 2.0 * t2 + 2.0 * t3 + t4);
}

void LorenzTangent::apply_transpose(Matrix& v) const {
    const double a = 0.5 * dt_;
    const double c1 = dt_ / 6.0;
    const double c2 = dt_ / 3.0;
    const Matrix q4 = stage_jac_[3].transpose() * (c1 * v);
    const Matrix q3 = stage_jac_[2].transpose() * (c2 * v + dt_ * q4);
    const Matrix q2 = stage_jac_[1].transpose() * (c2 * v + a * q3);
    const Matrix q1 = stage_jac_[0].transpose() * (c1 * v + a * q2);
    v += q1 + q2 + q3 + q4;
}

Map3dTangent::Map3dTangent(long n_steps) : n_(n_steps), m_(map3d_matrix()), mt_(m_.transpose()) {
    if (n_steps < 1) throw std::invalid_argument("Map3dTangent: need at least one step");
}

void Map3dTangent::apply(Matrix& v) const { v = (m_ * v).eval(); }

void Map3dTangent::apply_transpose(Matrix& v) const { v = (mt_ * v).eval(); }

}  // namespace edgescope
