#include "hjlab/action.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <future>
#include <random>
#include <stdexcept>

#include "hjlab/errors.hpp"

namespace hjlab {

namespace {

double sample_integrand(const ProblemData& data, Vec2 eta, Vec2 v, double l) {
    return legendre(*data.model, eta, -v).value + data.g(eta) * l;
}

// Trapezoid in the state along each interval; the piecewise-constant
// control and reflection density of the interval get their exact weight.
double interval_quadrature(const ProblemData& data, Vec2 eta_a, Vec2 eta_b, Vec2 v, double l,
                           double ds) {
    return 0.5 * ds *
           (sample_integrand(data, eta_a, v, l) + sample_integrand(data, eta_b, v, l));
}

}  // namespace

double partial_action(const ProblemData& data, const ReflectedPath& path, std::size_t k_end) {
    if (k_end >= path.size()) throw std::invalid_argument("partial_action: k_end out of range");
    double acc = 0.0;
    for (std::size_t k = 0; k < k_end; ++k)
        acc += interval_quadrature(data, path.eta[k], path.eta[k + 1], path.v[k], path.l[k],
                                   path.times[k + 1] - path.times[k]);
    return acc;
}

double action_value(const ProblemData& data, const ReflectedPath& path) {
    if (path.size() < 2) {
        // Degenerate zero-horizon path: only the endpoint datum remains.
        return data.u0(path.eta.empty() ? Vec2{} : path.eta.back());
    }
    return partial_action(data, path, path.size() - 1) + data.u0(path.eta.back());
}

void momentum(const ProblemData& data, ReflectedPath& path) {
    const std::size_t n = path.size();
    path.p.resize(n);
    path.p_bar.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const Vec2 p = grad_v_L(*data.model, path.eta[k], -path.v[k]);
        path.p[k] = p;
        if (path.regime[k] == Regime::Interior) {
            path.p_bar[k] = p;
        } else {
            const Vec2 nu = data.dom.outward_normal(path.eta[k]);
            path.p_bar[k] = p - p.dot(nu) * nu;
        }
    }
}

PbarReport pbar_lipschitz_report(const ReflectedPath& path, std::size_t stride) {
    if (!path.has_momentum())
        throw std::invalid_argument("pbar_lipschitz_report: momentum not filled");
    if (stride == 0) stride = 1;
    PbarReport rep;
    const std::size_t n = path.size();
    for (std::size_t k = 0; k + 1 < n; ++k) {
        rep.max_p_jump = std::max(rep.max_p_jump, (path.p[k + 1] - path.p[k]).norm());
        const Vec2 normal_part_a = path.p[k] - path.p_bar[k];
        const Vec2 normal_part_b = path.p[k + 1] - path.p_bar[k + 1];
        rep.max_normal_jump = std::max(rep.max_normal_jump, (normal_part_b - normal_part_a).norm());
    }
    for (std::size_t k = 0; k + stride < n; k += stride) {
        if (path.regime[k] != path.regime[k + stride]) continue;
        bool uniform = true;
        for (std::size_t j = k; j <= k + stride; ++j)
            if (path.regime[j] != path.regime[k]) uniform = false;
        if (!uniform) continue;
        const double ds = path.times[k + stride] - path.times[k];
        rep.max_increment_ratio = std::max(
            rep.max_increment_ratio, (path.p_bar[k + stride] - path.p_bar[k]).norm() / ds);
    }
    return rep;
}

namespace {

// Rollout with node caching used by the optimizer. The action uses the same
// trapezoid rule as action_value; equality is covered by a unit test.
class RolloutCache {
public:
    RolloutCache(const ProblemData& data, Vec2 x0, double t, const SolverParams& params)
        : data_(data), x0_(x0), t_(t), nodes_(params.nodes) {
        const double node_len = t / nodes_;
        steps_per_node_ = std::max(1, static_cast<int>(std::llround(node_len / params.dt)));
        dt_ = node_len / steps_per_node_;
        node_eta_.assign(nodes_ + 1, x0_);
        node_prefix_.assign(nodes_ + 1, 0.0);
    }

    double dt() const { return dt_; }
    int total_steps() const { return nodes_ * steps_per_node_; }

    // Full action of `controls`, re-integrating only from node `from`.
    // Caches are valid for the controls passed to the last refresh() call;
    // `from` must be a node whose prefix is unaffected by the change.
    double evaluate(const std::vector<Vec2>& controls, int from) const {
        Vec2 eta = node_eta_[from];
        double acc = node_prefix_[from];
        const int first = from * steps_per_node_;
        const int total = total_steps();
        double l_last = 0.0;
        for (int k = first; k < total; ++k) {
            const Vec2 v = controls[k / steps_per_node_];
            const SkorokhodStep step = skorokhod_step(data_.dom, eta, v, dt_);
            const double w = (k == 0) ? 0.5 : 1.0;
            acc += w * dt_ * sample_integrand(data_, eta, v, step.l);
            eta = step.eta;
            l_last = step.l;
        }
        // Duplicated final sample carries half weight.
        acc += 0.5 * dt_ * sample_integrand(data_, eta, controls[nodes_ - 1], l_last);
        return acc + data_.u0(eta);
    }

    // Re-integrates everything and refreshes node states and prefixes.
    double refresh(const std::vector<Vec2>& controls) {
        Vec2 eta = x0_;
        double acc = 0.0;
        node_eta_[0] = eta;
        node_prefix_[0] = 0.0;
        const int total = total_steps();
        double l_last = 0.0;
        for (int k = 0; k < total; ++k) {
            const Vec2 v = controls[k / steps_per_node_];
            const SkorokhodStep step = skorokhod_step(data_.dom, eta, v, dt_);
            const double w = (k == 0) ? 0.5 : 1.0;
            acc += w * dt_ * sample_integrand(data_, eta, v, step.l);
            eta = step.eta;
            l_last = step.l;
            if ((k + 1) % steps_per_node_ == 0) {
                const int node = (k + 1) / steps_per_node_;
                node_eta_[node] = eta;
                node_prefix_[node] = acc;
            }
        }
        acc += 0.5 * dt_ * sample_integrand(data_, eta, controls[nodes_ - 1], l_last);
        return acc + data_.u0(eta);
    }

    ReflectedPath path(const std::vector<Vec2>& controls) const {
        const double node_len = t_ / nodes_;
        (void)node_len;
        return integrate(
            data_.dom, x0_,
            [&](double s) {
                int node = static_cast<int>(s / (t_ / nodes_));
                node = std::clamp(node, 0, nodes_ - 1);
                return controls[node];
            },
            dt_, t_);
    }

private:
    const ProblemData& data_;
    Vec2 x0_;
    double t_;
    int nodes_;
    int steps_per_node_ = 1;
    double dt_ = 0.0;
    std::vector<Vec2> node_eta_;
    std::vector<double> node_prefix_;
};

struct RestartResult {
    double value = std::numeric_limits<double>::infinity();
    std::vector<Vec2> controls;
    std::vector<double> history;
    double gradient_norm = 0.0;
};

void clamp_controls(std::vector<Vec2>& u, double v_max) {
    for (Vec2& v : u) {
        v.x = std::clamp(v.x, -v_max, v_max);
        v.y = std::clamp(v.y, -v_max, v_max);
    }
}

// Forward finite-difference gradient with suffix reuse: perturbing node j
// leaves nodes < j untouched, so integration restarts at node j.
std::vector<double> fd_gradient(RolloutCache& cache, std::vector<Vec2>& u, double f0,
                                double fd_step) {
    const int n = static_cast<int>(u.size());
    std::vector<double> grad(2 * n, 0.0);
    for (int j = 0; j < n; ++j) {
        for (int c = 0; c < 2; ++c) {
            double& coord = (c == 0) ? u[j].x : u[j].y;
            const double saved = coord;
            coord = saved + fd_step;
            const double f1 = cache.evaluate(u, j);
            coord = saved;
            grad[2 * j + c] = (f1 - f0) / fd_step;
        }
    }
    return grad;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

// L-BFGS two-loop recursion with Armijo backtracking, box-projected.
RestartResult lbfgs_minimize(const ProblemData& data, Vec2 x0, double t,
                             const SolverParams& params, std::vector<Vec2> u) {
    clamp_controls(u, params.v_max);
    RolloutCache cache(data, x0, t, params);
    double f = cache.refresh(u);

    RestartResult res;
    res.history.push_back(f);

    constexpr int kMemory = 8;
    std::deque<std::vector<double>> s_hist, y_hist;
    std::deque<double> rho_hist;

    std::vector<double> grad = fd_gradient(cache, u, f, params.fd_step);
    const int dim = static_cast<int>(grad.size());

    for (int iter = 0; iter < params.max_iterations; ++iter) {
        // Two-loop recursion.
        std::vector<double> q = grad;
        std::vector<double> alpha(s_hist.size());
        for (int i = static_cast<int>(s_hist.size()) - 1; i >= 0; --i) {
            alpha[i] = rho_hist[i] * dot(s_hist[i], q);
            for (int k = 0; k < dim; ++k) q[k] -= alpha[i] * y_hist[i][k];
        }
        double gamma = 1.0;
        if (!s_hist.empty()) {
            const double yy = dot(y_hist.back(), y_hist.back());
            if (yy > 0.0) gamma = dot(s_hist.back(), y_hist.back()) / yy;
        }
        for (double& qk : q) qk *= gamma;
        for (std::size_t i = 0; i < s_hist.size(); ++i) {
            const double beta = rho_hist[i] * dot(y_hist[i], q);
            for (int k = 0; k < dim; ++k) q[k] += s_hist[i][k] * (alpha[i] - beta);
        }
        std::vector<double> direction(dim);
        for (int k = 0; k < dim; ++k) direction[k] = -q[k];
        double slope = dot(grad, direction);
        if (slope >= 0.0) {
            for (int k = 0; k < dim; ++k) direction[k] = -grad[k];
            slope = -dot(grad, grad);
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
        }

        // Armijo backtracking.
        constexpr double kArmijo = 1e-4;
        double step = 1.0;
        std::vector<Vec2> u_next;
        double f_next = f;
        bool accepted = false;
        for (int bt = 0; bt < 30; ++bt) {
            u_next = u;
            for (int j = 0; j < static_cast<int>(u.size()); ++j) {
                u_next[j].x += step * direction[2 * j];
                u_next[j].y += step * direction[2 * j + 1];
            }
            clamp_controls(u_next, params.v_max);
            f_next = cache.evaluate(u_next, 0);
            if (f_next <= f + kArmijo * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted || !(f_next < f)) break;

        std::vector<double> s(dim);
        for (int j = 0; j < static_cast<int>(u.size()); ++j) {
            s[2 * j] = u_next[j].x - u[j].x;
            s[2 * j + 1] = u_next[j].y - u[j].y;
        }
        u = std::move(u_next);
        const double f_prev = f;
        f = cache.refresh(u);
        res.history.push_back(f);

        std::vector<double> grad_next = fd_gradient(cache, u, f, params.fd_step);
        std::vector<double> y(dim);
        for (int k = 0; k < dim; ++k) y[k] = grad_next[k] - grad[k];
        const double sy = dot(s, y);
        if (sy > 1e-12) {
            s_hist.push_back(std::move(s));
            y_hist.push_back(std::move(y));
            rho_hist.push_back(1.0 / sy);
            if (static_cast<int>(s_hist.size()) > kMemory) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }
        grad = std::move(grad_next);
        if (f_prev - f <= params.tolerance * std::max(1.0, std::abs(f))) break;
    }

    res.value = f;
    res.controls = std::move(u);
    res.gradient_norm = norm(grad);
    return res;
}

Vec2 fd_grad_u0(const ProblemData& data, Vec2 x) {
    constexpr double h = 1e-6;
    return {(data.u0({x.x + h, x.y}) - data.u0({x.x - h, x.y})) / (2.0 * h),
            (data.u0({x.x, x.y + h}) - data.u0({x.x, x.y - h})) / (2.0 * h)};
}

std::vector<Vec2> initial_controls(const ProblemData& data, Vec2 x, int nodes, int restart,
                                   std::uint64_t seed, double v_max) {
    std::vector<Vec2> u(nodes);
    if (restart == 0) return u;  // zero-control start
    const Vec2 characteristic = -data.model->grad_p(x, fd_grad_u0(data, x));
    for (Vec2& v : u) v = characteristic;
    if (restart == 1) {
        clamp_controls(u, v_max);
        return u;
    }
    std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(restart)));
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double amplitude = 0.35 * (1.0 + ((restart - 2) % 4)) *
                             std::max(1.0, characteristic.norm());
    for (Vec2& v : u) {
        v.x += amplitude * gauss(rng);
        v.y += amplitude * gauss(rng);
    }
    clamp_controls(u, v_max);
    return u;
}

}  // namespace

ValueEstimate minimize_value(const ProblemData& data, Vec2 x, double t,
                             const SolverParams& params) {
    if (data.dom.signed_distance(x) > 1e-10)
        throw Infeasible("minimize_value: x is outside the closed domain");
    ValueEstimate est;
    if (t <= 0.0) {
        est.value = data.u0(x);
        est.path.times = {0.0};
        est.path.eta = {x};
        est.path.v = {Vec2{}};
        est.path.l = {0.0};
        est.path.regime = {Regime::Interior};
        return est;
    }

    const int restarts = std::max(1, params.restarts);
    std::vector<RestartResult> results(restarts);
    auto run = [&](int r) {
        return lbfgs_minimize(data, x, t, params,
                              initial_controls(data, x, params.nodes, r, params.seed, params.v_max));
    };
    if (params.jobs > 1) {
        std::vector<std::future<RestartResult>> futures;
        futures.reserve(restarts);
        for (int r = 0; r < restarts; ++r)
            futures.push_back(std::async(std::launch::async, run, r));
        for (int r = 0; r < restarts; ++r) results[r] = futures[r].get();
    } else {
        for (int r = 0; r < restarts; ++r) results[r] = run(r);
    }

    int best = 0;
    for (int r = 1; r < restarts; ++r)
        if (results[r].value < results[best].value) best = r;

    RolloutCache cache(data, x, t, params);
    est.path = cache.path(results[best].controls);
    est.value = action_value(data, est.path);
    est.restarts_used = restarts;
    est.final_gradient_norm = results[best].gradient_norm;
    est.action_history = std::move(results[best].history);
    est.restart_values.reserve(restarts);
    for (const auto& r : results) est.restart_values.push_back(r.value);
    return est;
}

double dpp_check(const ProblemData& data, Vec2 x, double t, double s_mid,
                 const SolverParams& params) {
    if (!(s_mid > 0.0 && s_mid <= t)) throw std::invalid_argument("dpp_check: need 0 < s_mid <= t");
    const ValueEstimate full = minimize_value(data, x, t, params);
    const double dt = full.path.times[1] - full.path.times[0];
    const auto k_mid = static_cast<std::size_t>(std::llround(s_mid / dt));
    const double partial = partial_action(data, full.path, k_mid);
    const double inner =
        minimize_value(data, full.path.eta[k_mid], t - s_mid, params).value;
    return std::abs(full.value - (partial + inner));
}

}  // namespace hjlab
