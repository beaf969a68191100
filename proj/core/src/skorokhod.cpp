#include "hjlab/skorokhod.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "hjlab/errors.hpp"

namespace hjlab {

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::Interior: return "interior";
        case Regime::BoundarySlideLPos: return "boundary_l_pos";
        case Regime::BoundaryLZero: return "boundary_l_zero";
    }
    return "?";
}

SkorokhodStep skorokhod_step(const DomainGeometry& dom, Vec2 eta, Vec2 v, double dt) {
    const Vec2 y = eta + dt * v;
    const double b = dom.signed_distance(y);
    if (b <= 0.0) return {y, 0.0};
    if (b >= dom.tube_radius())
        throw LeftTube("predictor escaped the projection tube; reduce dt or the control bound");
    return {dom.project(y), b / dt};
}

ReflectedPath integrate(const DomainGeometry& dom, Vec2 x0,
                        const std::function<Vec2(double)>& control, double dt, double T) {
    if (dt <= 0.0) throw std::invalid_argument("dt must be positive");
    if (dom.signed_distance(x0) > 1e-10)
        throw Infeasible("integrate: start point is outside the closed domain");
    const auto steps = static_cast<std::size_t>(std::llround(T / dt));
    if (std::abs(steps * dt - T) > 1e-9 * std::max(1.0, T))
        throw std::invalid_argument("T must be a multiple of dt");

    ReflectedPath path;
    path.times.reserve(steps + 1);
    path.eta.reserve(steps + 1);
    path.v.reserve(steps + 1);
    path.l.reserve(steps + 1);
    path.regime.assign(steps + 1, Regime::Interior);

    path.times.push_back(0.0);
    path.eta.push_back(x0);
    double max_speed = 0.0;
    for (std::size_t k = 0; k < steps; ++k) {
        const double s = k * dt;
        const Vec2 vk = control(s);
        max_speed = std::max(max_speed, vk.norm());
        const SkorokhodStep step = skorokhod_step(dom, path.eta.back(), vk, dt);
        path.v.push_back(vk);
        path.l.push_back(step.l);
        path.eta.push_back(step.eta);
        path.times.push_back((k + 1) * dt);
    }
    // Duplicate the last interval values so sequences align per sample.
    path.v.push_back(path.v.back());
    path.l.push_back(path.l.back());

    path.boundary_band = 2.0 * dt * max_speed;
    for (std::size_t k = 0; k <= steps; ++k) {
        if (dom.signed_distance(path.eta[k]) < -path.boundary_band) {
            path.regime[k] = Regime::Interior;
        } else {
            path.regime[k] = path.l[k] > 1e-12 ? Regime::BoundarySlideLPos : Regime::BoundaryLZero;
        }
    }
    return path;
}

SkorokhodResiduals residuals(const DomainGeometry& dom, const ReflectedPath& path) {
    if (path.size() == 0) throw std::invalid_argument("residuals: empty path");
    SkorokhodResiduals r;
    r.min_l = path.l.empty() ? 0.0 : path.l.front();
    const std::size_t n = path.size();
    for (std::size_t k = 0; k < n; ++k) {
        r.max_feasibility_violation =
            std::max(r.max_feasibility_violation, dom.signed_distance(path.eta[k]));
        r.min_l = std::min(r.min_l, path.l[k]);
    }
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double ds = path.times[k + 1] - path.times[k];
        const double b = dom.signed_distance(path.eta[k]);
        if (b < -path.boundary_band) r.complementarity_integral += path.l[k] * ds;
        // The discrete inclusion (eta_{k+1} - eta_k)/ds + l_k nu(eta_k) = v_k
        // is only checkable where the normal exists.
        if (std::abs(b) < dom.tube_radius()) {
            const Vec2 defect =
                (path.eta[k + 1] - path.eta[k]) / ds + path.l[k] * dom.outward_normal(path.eta[k]) -
                path.v[k];
            r.max_consistency_defect = std::max(r.max_consistency_defect, defect.norm());
        }
    }
    return r;
}

void write_path(std::ostream& os, const ReflectedPath& path) {
    os << "# s eta_x eta_y v_x v_y l regime";
    if (path.has_momentum()) os << " p_x p_y pbar_x pbar_y";
    os << "\n";
    os.precision(17);
    for (std::size_t k = 0; k < path.size(); ++k) {
        os << path.times[k] << ' ' << path.eta[k].x << ' ' << path.eta[k].y << ' ' << path.v[k].x
           << ' ' << path.v[k].y << ' ' << path.l[k] << ' ' << regime_name(path.regime[k]);
        if (path.has_momentum())
            os << ' ' << path.p[k].x << ' ' << path.p[k].y << ' ' << path.p_bar[k].x << ' '
               << path.p_bar[k].y;
        os << '\n';
    }
}

void write_path_file(const std::string& filename, const ReflectedPath& path) {
    std::ofstream os(filename);
    if (!os) throw std::runtime_error("cannot open " + filename);
    write_path(os, path);
}

}  // namespace hjlab
