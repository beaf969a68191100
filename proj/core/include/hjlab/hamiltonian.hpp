#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "hjlab/errors.hpp"
#include "hjlab/geometry.hpp"
#include "hjlab/vec.hpp"

namespace hjlab {

struct LegendreResult {
    double value = 0.0;  // L(x, v)
    Vec2 argmax;         // maximizing momentum p*
    int iterations = 0;  // 0 for closed forms
};

/// Convex Hamiltonian with first and second derivatives. Models are
/// immutable after construction; all evaluations are pure.
class HamiltonianModel {
public:
    virtual ~HamiltonianModel() = default;

    virtual std::string name() const = 0;
    virtual double value(Vec2 x, Vec2 p) const = 0;
    virtual Vec2 grad_x(Vec2 x, Vec2 p) const = 0;
    virtual Vec2 grad_p(Vec2 x, Vec2 p) const = 0;
    virtual Mat2 hess_pp(Vec2 x, Vec2 p) const = 0;
    /// d(grad_p)_i / dx_j
    virtual Mat2 hess_px(Vec2 x, Vec2 p) const = 0;

    /// Convexity bounds: 0 < D^2_pp H <= alpha0 I, alpha1 I <= D^2_vv L.
    virtual double alpha0() const = 0;
    virtual double alpha1() const = 0;

    /// Closed-form Legendre transform where one exists; the generic Newton
    /// path is used otherwise and cross-checked against this in tests.
    virtual std::optional<LegendreResult> legendre_closed_form(Vec2 x, Vec2 v) const {
        (void)x;
        (void)v;
        return std::nullopt;
    }

    /// Whether the model is declared separable across the boundary split of
    /// momenta into tangential and normal parts. check_a3 tests it either way.
    virtual bool has_boundary_split() const { return false; }
};

/// H = |p|^2 / 2.
class QuadraticHamiltonian final : public HamiltonianModel {
public:
    std::string name() const override { return "quadratic"; }
    double value(Vec2, Vec2 p) const override { return 0.5 * p.squared_norm(); }
    Vec2 grad_x(Vec2, Vec2) const override { return {}; }
    Vec2 grad_p(Vec2, Vec2 p) const override { return p; }
    Mat2 hess_pp(Vec2, Vec2) const override { return Mat2::identity(); }
    Mat2 hess_px(Vec2, Vec2) const override { return Mat2::zero(); }
    double alpha0() const override { return 1.0; }
    double alpha1() const override { return 1.0; }
    std::optional<LegendreResult> legendre_closed_form(Vec2, Vec2 v) const override {
        return LegendreResult{0.5 * v.squared_norm(), v, 0};
    }
    bool has_boundary_split() const override { return true; }
};

/// H = |p|^2.
class ScaledQuadraticHamiltonian final : public HamiltonianModel {
public:
    std::string name() const override { return "scaled_quadratic"; }
    double value(Vec2, Vec2 p) const override { return p.squared_norm(); }
    Vec2 grad_x(Vec2, Vec2) const override { return {}; }
    Vec2 grad_p(Vec2, Vec2 p) const override { return 2.0 * p; }
    Mat2 hess_pp(Vec2, Vec2) const override { return 2.0 * Mat2::identity(); }
    Mat2 hess_px(Vec2, Vec2) const override { return Mat2::zero(); }
    double alpha0() const override { return 2.0; }
    double alpha1() const override { return 0.5; }
    std::optional<LegendreResult> legendre_closed_form(Vec2, Vec2 v) const override {
        return LegendreResult{0.25 * v.squared_norm(), 0.5 * v, 0};
    }
    bool has_boundary_split() const override { return true; }
};

/// H = |p|^2 / 2 + c(x) . p for a smooth bounded drift c.
class DriftQuadraticHamiltonian final : public HamiltonianModel {
public:
    using DriftFn = std::function<Vec2(Vec2)>;
    using DriftJacobianFn = std::function<Mat2(Vec2)>;  // (Dc)_{ij} = dc_i/dx_j

    explicit DriftQuadraticHamiltonian(Vec2 constant_drift)
        : drift_([constant_drift](Vec2) { return constant_drift; }),
          drift_jacobian_([](Vec2) { return Mat2::zero(); }) {}

    DriftQuadraticHamiltonian(DriftFn drift, DriftJacobianFn drift_jacobian)
        : drift_(std::move(drift)), drift_jacobian_(std::move(drift_jacobian)) {}

    std::string name() const override { return "drift_quadratic"; }
    double value(Vec2 x, Vec2 p) const override {
        return 0.5 * p.squared_norm() + drift_(x).dot(p);
    }
    Vec2 grad_x(Vec2 x, Vec2 p) const override { return drift_jacobian_(x).transpose() * p; }
    Vec2 grad_p(Vec2 x, Vec2 p) const override { return p + drift_(x); }
    Mat2 hess_pp(Vec2, Vec2) const override { return Mat2::identity(); }
    Mat2 hess_px(Vec2 x, Vec2) const override { return drift_jacobian_(x); }
    double alpha0() const override { return 1.0; }
    double alpha1() const override { return 1.0; }
    std::optional<LegendreResult> legendre_closed_form(Vec2 x, Vec2 v) const override {
        const Vec2 p = v - drift_(x);
        return LegendreResult{0.5 * p.squared_norm(), p, 0};
    }

    Vec2 drift(Vec2 x) const { return drift_(x); }

private:
    DriftFn drift_;
    DriftJacobianFn drift_jacobian_;
};

/// L(x, v) = sup_p (v . p - H(x, p)). Uses the closed form when the model
/// provides one; otherwise damped Newton on D_p H(x, p) = v started at
/// p = v, with a coordinate-descent fallback. Throws NoConvergence after
/// 100 Newton iterations.
LegendreResult legendre(const HamiltonianModel& model, Vec2 x, Vec2 v);

/// Newton path regardless of closed forms; used by tests to cross-check.
LegendreResult legendre_newton(const HamiltonianModel& model, Vec2 x, Vec2 v);

/// D_v L(x, v), i.e. the Legendre argmax.
Vec2 grad_v_L(const HamiltonianModel& model, Vec2 x, Vec2 v);

struct SamplingBox {
    Vec2 x_lo{-1.0, -1.0};
    Vec2 x_hi{1.0, 1.0};
    Vec2 p_lo{-2.0, -2.0};
    Vec2 p_hi{2.0, 2.0};
};

struct A1Report {
    double min_eigenvalue = 0.0;
    double max_eigenvalue = 0.0;
    // min over sampled x of H(x, R p_hat)/R at R = 1e3 over unit directions.
    double superlinearity_proxy = 0.0;
};

struct A3Report {
    double max_separability_residual = 0.0;      // H(x,p) - H(x,p_tau) - H(x,p_nu) + H(x,0)
    double max_normal_derivative_residual = 0.0; // D_p H(x, p_tau) . nu
    bool declared_split = false;
};

A1Report check_a1(const HamiltonianModel& model, const SamplingBox& box, int grid);

A3Report check_a3(const HamiltonianModel& model, const DomainGeometry& dom,
                  std::span<const Vec2> boundary_samples, std::span<const Vec2> momenta);

}  // namespace hjlab
