#include "hjlab/reflected_flow.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hjlab/errors.hpp"

namespace hjlab {

namespace {

struct State {
    Vec2 eta;
    Vec2 p;
};

// Putative reflection density if the boundary were active at this state.
double l_hat(const ProblemData& data, const State& s) {
    const Vec2 nu = data.dom.outward_normal(s.eta);
    return -data.model->grad_p(s.eta, s.p).dot(nu);
}

State interior_field(const ProblemData& data, const State& s) {
    return {-data.model->grad_p(s.eta, s.p), data.model->grad_x(s.eta, s.p)};
}

// Active-reflection boundary system: velocity is the tangential part of
// -D_p H; the momentum equation keeps p . nu = g differentiable along the
// slide.
State slide_field(const ProblemData& data, const State& s) {
    const HamiltonianModel& H = *data.model;
    const Vec2 nu = data.dom.outward_normal(s.eta);
    const Mat2 dnu = data.dom.hessian_signed_distance(s.eta);
    const Vec2 dpH = H.grad_p(s.eta, s.p);
    const Vec2 dxH = H.grad_x(s.eta, s.p);
    constexpr double h = 1e-6;
    const Vec2 dg{(data.g({s.eta.x + h, s.eta.y}) - data.g({s.eta.x - h, s.eta.y})) / (2.0 * h),
                  (data.g({s.eta.x, s.eta.y + h}) - data.g({s.eta.x, s.eta.y - h})) / (2.0 * h)};
    const double dpH_nu = dpH.dot(nu);
    const Vec2 eta_dot = -dpH + dpH_nu * nu;
    const Vec2 p_dot = dxH - dpH_nu * (dnu * s.p) + dpH_nu * dg -
                       (dxH.dot(nu) - (dnu * dpH).dot(s.p) + dg.dot(dpH)) * nu;
    return {eta_dot, p_dot};
}

// Vanishing-reflection boundary system: velocity is -D_p H, already tangent;
// the normal momentum equation preserves D_p H . nu = 0.
State graze_field(const ProblemData& data, const State& s) {
    const HamiltonianModel& H = *data.model;
    const Vec2 nu = data.dom.outward_normal(s.eta);
    const Mat2 dnu = data.dom.hessian_signed_distance(s.eta);
    const Vec2 dpH = H.grad_p(s.eta, s.p);
    const Vec2 dxH = H.grad_x(s.eta, s.p);
    const Mat2 hpp = H.hess_pp(s.eta, s.p);
    const Mat2 hpx = H.hess_px(s.eta, s.p);
    const Vec2 dxH_tau = dxH - dxH.dot(nu) * nu;
    const double denom = (hpp * nu).dot(nu);
    const double bracket = (hpx * dpH).dot(nu) - (hpp * dxH_tau).dot(nu) + dpH.dot(dnu * dpH);
    return {-dpH, dxH_tau + (bracket / denom) * nu};
}

// Enforce p . nu = g by shifting the normal momentum.
void enforce_slide_constraint(const ProblemData& data, State& s) {
    const Vec2 nu = data.dom.outward_normal(s.eta);
    s.p += (data.g(s.eta) - s.p.dot(nu)) * nu;
}

// Solve D_p H(eta, p_tau + q nu) . nu = 0 for the normal momentum q;
// strictly increasing in q by convexity.
void enforce_graze_constraint(const ProblemData& data, State& s) {
    const Vec2 nu = data.dom.outward_normal(s.eta);
    const Vec2 p_tau = s.p - s.p.dot(nu) * nu;
    double q = s.p.dot(nu);
    for (int it = 0; it < 60; ++it) {
        const Vec2 p = p_tau + q * nu;
        const double f = data.model->grad_p(s.eta, p).dot(nu);
        if (std::abs(f) <= 1e-12) {
            s.p = p;
            return;
        }
        const double df = (data.model->hess_pp(s.eta, p) * nu).dot(nu);
        q -= f / df;
    }
    const Vec2 p = p_tau + q * nu;
    if (std::abs(data.model->grad_p(s.eta, p).dot(nu)) > 1e-9)
        throw NoConvergence("flow: normal-momentum solve did not converge");
    s.p = p;
}

template <typename Field>
State rk2_step(const ProblemData& data, const State& s, double dt, const Field& field) {
    const State k1 = field(data, s);
    const State mid{s.eta + 0.5 * dt * k1.eta, s.p + 0.5 * dt * k1.p};
    const State k2 = field(data, mid);
    return {s.eta + dt * k2.eta, s.p + dt * k2.p};
}

// Applies the boundary regime's after-step renormalizations.
State boundary_step(const ProblemData& data, const State& s, double dt, bool slide) {
    State next = slide ? rk2_step(data, s, dt, slide_field) : rk2_step(data, s, dt, graze_field);
    next.eta = data.dom.project_to_boundary(next.eta);
    if (slide)
        enforce_slide_constraint(data, next);
    else
        enforce_graze_constraint(data, next);
    return next;
}

}  // namespace

ReflectedPath flow(const ProblemData& data, Vec2 x0, Vec2 p0, double dt, double T, double eps_l,
                   int max_switches) {
    if (data.dom.signed_distance(x0) > 1e-10) throw Infeasible("flow: x0 outside the domain");
    const auto steps = static_cast<std::size_t>(std::llround(T / dt));

    ReflectedPath path;
    path.times.reserve(steps + 1);
    path.eta.reserve(steps + 1);
    path.p.reserve(steps + 1);
    path.v.reserve(steps + 1);
    path.l.reserve(steps + 1);
    path.regime.reserve(steps + 1);
    path.boundary_band = 1e-9;

    State s{x0, p0};
    int switches = 0;

    // Regime of the initial state.
    Regime regime = Regime::Interior;
    if (data.dom.signed_distance(s.eta) > -1e-10) {
        const double lh = l_hat(data, s);
        if (lh > eps_l) {
            regime = Regime::BoundarySlideLPos;
            enforce_slide_constraint(data, s);
        } else {
            regime = Regime::BoundaryLZero;
            enforce_graze_constraint(data, s);
        }
    }

    auto record = [&](double time, const State& st, Regime r) {
        path.times.push_back(time);
        path.eta.push_back(st.eta);
        path.p.push_back(st.p);
        // By duality the control realizing the flow is v = -D_p H in every
        // regime; on active-reflection arcs its normal part is absorbed by
        // l nu with l = -D_p H . nu.
        path.v.push_back(-data.model->grad_p(st.eta, st.p));
        path.l.push_back(r == Regime::BoundarySlideLPos ? std::max(0.0, l_hat(data, st)) : 0.0);
        path.regime.push_back(r);
    };

    record(0.0, s, regime);

    for (std::size_t k = 0; k < steps; ++k) {
        const double t0 = k * dt;
        if (regime == Regime::Interior) {
            State next = rk2_step(data, s, dt, interior_field);
            if (data.dom.signed_distance(next.eta) > 0.0) {
                // Bisect the hitting time, land on the boundary, re-decide.
                double lo = 0.0, hi = dt;
                while (hi - lo > 1e-10) {
                    const double mid = 0.5 * (lo + hi);
                    const State trial = rk2_step(data, s, mid, interior_field);
                    (data.dom.signed_distance(trial.eta) > 0.0 ? hi : lo) = mid;
                }
                State hit = rk2_step(data, s, hi, interior_field);
                hit.eta = data.dom.project_to_boundary(hit.eta);
                const double lh = l_hat(data, hit);
                Regime entered;
                if (lh > eps_l) {
                    entered = Regime::BoundarySlideLPos;
                    enforce_slide_constraint(data, hit);
                } else {
                    entered = Regime::BoundaryLZero;
                    enforce_graze_constraint(data, hit);
                }
                if (++switches > max_switches) throw RegimeChatter("flow: too many regime changes");
                // Finish the step in the boundary regime.
                const double rest = dt - hi;
                State next_b = rest > 0.0
                                   ? boundary_step(data, hit, rest,
                                                   entered == Regime::BoundarySlideLPos)
                                   : hit;
                regime = entered;
                s = next_b;
            } else {
                s = next;
            }
        } else {
            const bool slide = regime == Regime::BoundarySlideLPos;
            State next = boundary_step(data, s, dt, slide);
            const double lh = l_hat(data, next);
            if (lh < -eps_l) {
                // Interior field points strictly inward: release.
                if (++switches > max_switches) throw RegimeChatter("flow: too many regime changes");
                regime = Regime::Interior;
                s = next;
            } else if (slide && lh <= eps_l) {
                if (++switches > max_switches) throw RegimeChatter("flow: too many regime changes");
                regime = Regime::BoundaryLZero;
                enforce_graze_constraint(data, next);
                s = next;
            } else if (!slide && lh > eps_l) {
                if (++switches > max_switches) throw RegimeChatter("flow: too many regime changes");
                regime = Regime::BoundarySlideLPos;
                enforce_slide_constraint(data, next);
                s = next;
            } else {
                s = next;
            }
        }
        record(t0 + dt, s, regime);
    }
    return path;
}

ModeDiagnostics mode_diagnostics(const ProblemData& data, const ReflectedPath& path,
                                 double eps_l) {
    ModeDiagnostics diag;
    const std::size_t n = path.size();
    for (std::size_t k = 0; k < n; ++k) {
        if (path.regime[k] == Regime::Interior) continue;
        const Vec2 nu = data.dom.outward_normal(path.eta[k]);
        if (path.l[k] > eps_l)
            diag.max_pn_minus_g = std::max(
                diag.max_pn_minus_g, std::abs(path.p[k].dot(nu) - data.g(path.eta[k])));
        if (k > 0 && k + 1 < n) {
            const Vec2 eta_dot =
                (path.eta[k + 1] - path.eta[k - 1]) / (path.times[k + 1] - path.times[k - 1]);
            diag.max_tangency = std::max(diag.max_tangency, std::abs(nu.dot(eta_dot)));
        }
        diag.max_l_identity = std::max(
            diag.max_l_identity,
            std::abs(path.l[k] + data.model->grad_p(path.eta[k], path.p[k]).dot(nu)));
    }
    return diag;
}

FlowComparison compare_with_minimizer(const ProblemData& data, Vec2 x, double t,
                                      const SolverParams& params) {
    ValueEstimate est = minimize_value(data, x, t, params);
    momentum(data, est.path);
    const Vec2 pbar0 = est.path.p_bar.front();
    const double dt = est.path.times[1] - est.path.times[0];
    const ReflectedPath flowed = flow(data, x, pbar0, dt, t);

    FlowComparison cmp;
    const std::size_t n = std::min(flowed.size(), est.path.size());
    for (std::size_t k = 0; k < n; ++k)
        cmp.sup_path_distance =
            std::max(cmp.sup_path_distance, (flowed.eta[k] - est.path.eta[k]).norm());
    cmp.momentum_distance_at_start = (flowed.p.front() - pbar0).norm();
    return cmp;
}

}  // namespace hjlab
