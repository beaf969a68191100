#include "hjlab/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hjlab {

namespace {

constexpr int kMaxNewtonIters = 100;
constexpr double kNewtonTol = 1e-10;

double dual_objective(const HamiltonianModel& model, Vec2 x, Vec2 v, Vec2 p) {
    return v.dot(p) - model.value(x, p);
}

// Maximize p -> v.p - H(x,p) one coordinate at a time with a bracketing
// golden-section search. Slow, only reached when Newton stalls.
LegendreResult coordinate_descent(const HamiltonianModel& model, Vec2 x, Vec2 v, Vec2 p0) {
    constexpr double kGolden = 0.6180339887498949;
    Vec2 p = p0;
    for (int sweep = 0; sweep < 200; ++sweep) {
        const Vec2 before = p;
        for (int axis = 0; axis < 2; ++axis) {
            double step = 1.0;
            auto coord = [&](double s) {
                Vec2 q = p;
                (axis == 0 ? q.x : q.y) += s;
                return dual_objective(model, x, v, q);
            };
            // Expand a bracket around 0, then contract.
            double lo = -step, hi = step;
            while (coord(hi) > coord(0.0) && hi < 1e6) hi *= 2.0;
            while (coord(lo) > coord(0.0) && lo > -1e6) lo *= 2.0;
            double a = lo, b = hi;
            for (int it = 0; it < 80; ++it) {
                const double m1 = b - kGolden * (b - a);
                const double m2 = a + kGolden * (b - a);
                if (coord(m1) < coord(m2))
                    a = m1;
                else
                    b = m2;
            }
            (axis == 0 ? p.x : p.y) += 0.5 * (a + b);
        }
        if ((p - before).norm() < 1e-12) break;
    }
    const Vec2 res = model.grad_p(x, p) - v;
    if (res.norm() > 1e-8)
        throw NoConvergence("legendre: coordinate descent stalled, model may violate convexity");
    return {dual_objective(model, x, v, p), p, kMaxNewtonIters};
}

}  // namespace

LegendreResult legendre_newton(const HamiltonianModel& model, Vec2 x, Vec2 v) {
    Vec2 p = v;
    Vec2 residual = model.grad_p(x, p) - v;
    for (int it = 0; it < kMaxNewtonIters; ++it) {
        if (residual.norm() <= kNewtonTol)
            return {dual_objective(model, x, v, p), p, it};
        const Vec2 step = model.hess_pp(x, p).solve(residual);
        // Damp while the step overshoots the residual.
        double damping = 1.0;
        Vec2 p_next = p - step;
        Vec2 r_next = model.grad_p(x, p_next) - v;
        int halvings = 0;
        while (r_next.norm() > residual.norm() && halvings < 60) {
            damping *= 0.5;
            p_next = p - damping * step;
            r_next = model.grad_p(x, p_next) - v;
            ++halvings;
        }
        if (r_next.norm() >= residual.norm()) return coordinate_descent(model, x, v, p);
        p = p_next;
        residual = r_next;
    }
    if (residual.norm() <= kNewtonTol)
        return {dual_objective(model, x, v, p), p, kMaxNewtonIters};
    return coordinate_descent(model, x, v, p);
}

LegendreResult legendre(const HamiltonianModel& model, Vec2 x, Vec2 v) {
    if (auto closed = model.legendre_closed_form(x, v)) return *closed;
    return legendre_newton(model, x, v);
}

Vec2 grad_v_L(const HamiltonianModel& model, Vec2 x, Vec2 v) {
    return legendre(model, x, v).argmax;
}

A1Report check_a1(const HamiltonianModel& model, const SamplingBox& box, int grid) {
    A1Report report;
    report.min_eigenvalue = std::numeric_limits<double>::infinity();
    report.max_eigenvalue = -std::numeric_limits<double>::infinity();
    report.superlinearity_proxy = std::numeric_limits<double>::infinity();

    const int n = std::max(grid, 2);
    constexpr double kLargeP = 1e3;
    constexpr int kDirections = 16;
    for (int ix = 0; ix < n; ++ix) {
        for (int iy = 0; iy < n; ++iy) {
            const Vec2 x{box.x_lo.x + (box.x_hi.x - box.x_lo.x) * ix / (n - 1),
                         box.x_lo.y + (box.x_hi.y - box.x_lo.y) * iy / (n - 1)};
            for (int jx = 0; jx < n; ++jx) {
                for (int jy = 0; jy < n; ++jy) {
                    const Vec2 p{box.p_lo.x + (box.p_hi.x - box.p_lo.x) * jx / (n - 1),
                                 box.p_lo.y + (box.p_hi.y - box.p_lo.y) * jy / (n - 1)};
                    double lo, hi;
                    model.hess_pp(x, p).symmetric_eigenvalues(lo, hi);
                    report.min_eigenvalue = std::min(report.min_eigenvalue, lo);
                    report.max_eigenvalue = std::max(report.max_eigenvalue, hi);
                }
            }
            for (int k = 0; k < kDirections; ++k) {
                const double phi = 2.0 * M_PI * k / kDirections;
                const Vec2 dir{std::cos(phi), std::sin(phi)};
                report.superlinearity_proxy = std::min(
                    report.superlinearity_proxy, model.value(x, kLargeP * dir) / kLargeP);
            }
        }
    }
    return report;
}

A3Report check_a3(const HamiltonianModel& model, const DomainGeometry& dom,
                  std::span<const Vec2> boundary_samples, std::span<const Vec2> momenta) {
    A3Report report;
    report.declared_split = model.has_boundary_split();
    for (const Vec2 x : boundary_samples) {
        const Vec2 nu = dom.outward_normal(x);
        for (const Vec2 p : momenta) {
            const Vec2 p_nu = p.dot(nu) * nu;
            const Vec2 p_tau = p - p_nu;
            const double separability = model.value(x, p) - model.value(x, p_tau) -
                                        model.value(x, p_nu) + model.value(x, {});
            const double normal_derivative = model.grad_p(x, p_tau).dot(nu);
            report.max_separability_residual =
                std::max(report.max_separability_residual, std::abs(separability));
            report.max_normal_derivative_residual =
                std::max(report.max_normal_derivative_residual, std::abs(normal_derivative));
        }
    }
    return report;
}

}  // namespace hjlab
