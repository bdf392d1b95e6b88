#pragma once

#include <Eigen/Dense>

#include "edgescope/numerics.hpp"
#include "edgescope/reservoir.hpp"
#include "edgescope/signals.hpp"

namespace edgescope {

/// A trajectory together with its linearized one-step propagators Phi_n
/// (tangent at step n -> tangent at step n+1).  Consumers call
/// begin_step(n) once, then apply/apply_transpose any number of times; the
/// propagator is never materialized, only its action is exposed, so all
/// statistics run in O(M^2) per application.
///
/// For driven reservoirs the propagator is the conditional one: the input
/// term has zero state-derivative.
class TangentSystem {
public:
    virtual ~TangentSystem() = default;

    virtual int dim() const = 0;
    virtual double time_step() const = 0;  ///< Delta per step: dt for flows, 1 for maps
    virtual long n_steps() const = 0;      ///< number of available propagators

    virtual void begin_step(long n) = 0;
    virtual void apply(Matrix& v) const = 0;            ///< V <- Phi_n V
    virtual void apply_transpose(Matrix& v) const = 0;  ///< V <- Phi_n^T V
};

/// Map reservoir: Phi_n = alpha (diag(p1 + 2 p2 r + 3 p3 r^2) + A) at r(n).
class MapReservoirTangent final : public TangentSystem {
public:
    MapReservoirTangent(const NetworkSpec& net, const ReservoirParams& params,
                        const Matrix& states);

    int dim() const override { return net_.M; }
    double time_step() const override { return 1.0; }
    long n_steps() const override { return states_.rows() - 1; }
    void begin_step(long n) override;
    void apply(Matrix& v) const override;
    void apply_transpose(Matrix& v) const override;

private:
    const NetworkSpec& net_;
    ReservoirParams params_;
    const Matrix& states_;
    Matrix at_;     // A^T, cached for adjoint applications
    Vector diag_;   // p1 + 2 p2 r + 3 p3 r^2 at the current step
};

/// ODE reservoir: Phi_n is the variational RK4 propagator of
/// dv/dt = J(r(t)) v across [t_n, t_n+1], with the four stage states
/// reconstructed from r(n) exactly as the trajectory integrator produced
/// them (same zero-order-held input value).
class OdeReservoirTangent final : public TangentSystem {
public:
    OdeReservoirTangent(const NetworkSpec& net, const ReservoirParams& params,
                        const Matrix& states, const Vector& input);

    int dim() const override { return net_.M; }
    double time_step() const override { return params_.dt; }
    long n_steps() const override { return states_.rows() - 1; }
    void begin_step(long n) override;
    void apply(Matrix& v) const override;
    void apply_transpose(Matrix& v) const override;

private:
    void jac_apply(const Vector& diag, const Matrix& v, Matrix& out) const;
    void jac_apply_transpose(const Vector& diag, const Matrix& v, Matrix& out) const;

    const NetworkSpec& net_;
    ReservoirParams params_;
    const Matrix& states_;
    const Vector& input_;
    Matrix at_;
    Vector stage_diag_[4];  // diag(p1 + 2 p2 y + 3 p3 y^2) at the four RK4 stages
};

/// Autonomous Lorenz flow: variational RK4 with the analytic Jacobian.
class LorenzTangent final : public TangentSystem {
public:
    LorenzTangent(const Matrix& states, double c1, double c2, double c3, double dt);

    int dim() const override { return 3; }
    double time_step() const override { return dt_; }
    long n_steps() const override { return states_.rows() - 1; }
    void begin_step(long n) override;
    void apply(Matrix& v) const override;
    void apply_transpose(Matrix& v) const override;

private:
    const Matrix& states_;
    double c1_, c2_, c3_, dt_;
    Eigen::Matrix3d stage_jac_[4];
};

/// 3d nonlinear map: constant Jacobian (the mod nonlinearity has unit
/// derivative away from its discontinuity set, which has measure zero).
class Map3dTangent final : public TangentSystem {
public:
    explicit Map3dTangent(long n_steps);

    int dim() const override { return 3; }
    double time_step() const override { return 1.0; }
    long n_steps() const override { return n_; }
    void begin_step(long) override {}
    void apply(Matrix& v) const override;
    void apply_transpose(Matrix& v) const override;

private:
    long n_;
    Eigen::Matrix3d m_, mt_;
};

}  // namespace edgescope
