#include <doctest.h>

#include <cmath>
#include <memory>

#include "hjlab/reflected_flow.hpp"

using namespace hjlab;

namespace {

constexpr double kPi = 3.14159265358979323846;

ProblemData disk_quadratic(double g_value = 0.0) {
    ProblemData d;
    d.model = std::make_shared<QuadraticHamiltonian>();
    d.dom = DomainGeometry::exterior_disks({{{0, 0}, 1}});
    d.g = [g_value](Vec2) { return g_value; };
    d.u0 = [](Vec2 x) { return x.x + 2.0; };
    return d;
}

ProblemData half_plane_quadratic(double g_value) {
    ProblemData d;
    d.model = std::make_shared<QuadraticHamiltonian>();
    d.dom = DomainGeometry::half_space({0, -1}, 0.0);
    d.g = [g_value](Vec2) { return g_value; };
    d.u0 = [](Vec2 x) { return -x.x + x.y; };
    return d;
}

}  // namespace

TEST_CASE("interior flow is the classical Hamiltonian system") {
    const auto data = disk_quadratic();
    const auto path = flow(data, {3, 0}, {0, 1}, 1e-3, 1.0);
    CHECK((path.eta.back() - Vec2{3, -1}).norm() <= 2e-3);
    for (std::size_t k = 0; k < path.size(); ++k) {
        CHECK((path.p[k] - Vec2{0, 1}).norm() <= 1e-12);
        CHECK(path.regime[k] == Regime::Interior);
    }
}

TEST_CASE("geodesic slide around the circle") {
    const auto data = disk_quadratic();
    const double T = 0.5 * kPi;
    const auto path = flow(data, {1, 0}, {0, -1}, 1e-3, T);
    // Closed form: eta = (cos s, sin s), p = (sin s, -cos s).
    double worst_eta = 0.0, worst_p = 0.0, worst_speed = 0.0;
    for (std::size_t k = 0; k < path.size(); ++k) {
        const double s = path.times[k];
        worst_eta = std::max(worst_eta, (path.eta[k] - Vec2{std::cos(s), std::sin(s)}).norm());
        worst_p = std::max(worst_p, (path.p[k] - Vec2{std::sin(s), -std::cos(s)}).norm());
        worst_speed = std::max(worst_speed, std::abs(path.p[k].norm() - 1.0));
        CHECK(path.regime[k] == Regime::BoundaryLZero);
    }
    CHECK((path.eta.back() - Vec2{0, 1}).norm() <= 5e-3);
    CHECK((path.p.back() - Vec2{1, 0}).norm() <= 5e-3);
    CHECK(worst_eta <= 5e-3);
    CHECK(worst_p <= 5e-3);
    CHECK(worst_speed <= 5e-3);

    const auto diag = mode_diagnostics(data, path);
    CHECK(diag.max_tangency <= 1e-2);
    CHECK(diag.max_l_identity <= 1e-2);
}

TEST_CASE("tangency is preserved by the vanishing-reflection system") {
    const auto data = disk_quadratic();
    const auto path = flow(data, {1, 0}, {0, -1}, 1e-3, 1.0);
    for (std::size_t k = 0; k < path.size(); ++k) {
        const Vec2 nu = data.dom.outward_normal(path.eta[k]);
        CHECK(std::abs(data.model->grad_p(path.eta[k], path.p[k]).dot(nu)) <= 1e-6);
    }
}

TEST_CASE("sticky slide on a flat boundary") {
    const auto data = half_plane_quadratic(-1.0);
    const auto path = flow(data, {0, 0}, {1, 1}, 1e-3, 1.0);
    for (std::size_t k = 0; k < path.size(); ++k) {
        const double s = path.times[k];
        CHECK((path.eta[k] - Vec2{-s, 0}).norm() <= 1e-8);
        CHECK((path.p[k] - Vec2{1, 1}).norm() <= 1e-8);
        CHECK(path.l[k] == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(path.regime[k] == Regime::BoundarySlideLPos);
    }
    const auto diag = mode_diagnostics(data, path);
    CHECK(diag.max_pn_minus_g <= 1e-8);
    CHECK(diag.max_tangency <= 1e-8);
    CHECK(diag.max_l_identity <= 1e-8);
}

TEST_CASE("transversal attachment switches into the active-reflection regime") {
    const auto data = half_plane_quadratic(-1.0);
    const auto path = flow(data, {0, 1}, {-1, 1}, 1e-3, 2.0);
    // eta' = -p = (1,-1): reach the wall at s = 1, then slide rightward.
    CHECK((path.eta.back() - Vec2{2, 0}).norm() <= 5e-3);
    bool saw_interior = false, saw_slide = false;
    for (std::size_t k = 0; k < path.size(); ++k) {
        if (path.regime[k] == Regime::Interior) saw_interior = true;
        if (path.regime[k] == Regime::BoundarySlideLPos) {
            saw_slide = true;
            const Vec2 nu = data.dom.outward_normal(path.eta[k]);
            CHECK(std::abs(path.p[k].dot(nu) - data.g(path.eta[k])) <= 1e-8);
        }
    }
    CHECK(saw_interior);
    CHECK(saw_slide);
}

TEST_CASE("interior energy conservation at RK2 order") {
    ProblemData data;
    data.model = std::make_shared<DriftQuadraticHamiltonian>(
        [](Vec2 x) { return Vec2{0.5 * std::tanh(x.y), 0.0}; },
        [](Vec2 x) {
            const double sech2 = 1.0 / (std::cosh(x.y) * std::cosh(x.y));
            return Mat2{0.0, 0.5 * sech2, 0.0, 0.0};
        });
    data.dom = DomainGeometry::free_space();
    const double dt = 1e-3, T = 1.0;
    const auto path = flow(data, {0, 1}, {0.3, 0.4}, dt, T);
    const double h0 = data.model->value(path.eta.front(), path.p.front());
    for (std::size_t k = 0; k < path.size(); ++k) {
        const double hk = data.model->value(path.eta[k], path.p[k]);
        CHECK(std::abs(hk - h0) <= 10.0 * dt * dt * std::max(path.times[k], 1.0));
    }
}

TEST_CASE("interior-only paths have vacuous mode diagnostics") {
    const auto data = disk_quadratic();
    const auto path = flow(data, {3, 0}, {0, 1}, 1e-3, 1.0);
    const auto diag = mode_diagnostics(data, path);
    CHECK(diag.max_pn_minus_g == 0.0);
    CHECK(diag.max_tangency == 0.0);
    CHECK(diag.max_l_identity == 0.0);
}

TEST_CASE("flow from the minimizer momentum shadows the minimizer") {
    SolverParams params;
    params.nodes = 64;
    params.dt = 1.0 / 512;
    params.restarts = 4;

    ProblemData fs;
    fs.model = std::make_shared<QuadraticHamiltonian>();
    fs.dom = DomainGeometry::free_space();
    fs.u0 = [](Vec2 x) { return x.x + 2.0; };
    const auto cmp = compare_with_minimizer(fs, {3, 0}, 1.0, params);
    CHECK(cmp.sup_path_distance <= 1e-2);
    CHECK(cmp.momentum_distance_at_start == 0.0);

    ProblemData disk;
    disk.model = std::make_shared<ScaledQuadraticHamiltonian>();
    disk.dom = DomainGeometry::exterior_disks({{{0, 0}, 1}});
    disk.u0 = [](Vec2 x) { return x.x + 2.0; };
    const auto cmp2 = compare_with_minimizer(disk, {0, 2}, 1.0, params);
    CHECK(cmp2.sup_path_distance <= 5e-2);

    // Degenerate short horizon: at most one step of drift.
    const auto cmp3 = compare_with_minimizer(fs, {3, 0}, 1.0 / 512, params);
    CHECK(cmp3.sup_path_distance <= params.dt * 10.0);
}

TEST_CASE("regime chatter guard") {
    const auto data = half_plane_quadratic(-1.0);
    CHECK_THROWS_AS((void)flow(data, {0, 1}, {-1, 1}, 1e-3, 2.0, 1e-6, 0), RegimeChatter);
}

TEST_CASE("flow rejects infeasible starts") {
    const auto data = disk_quadratic();
    CHECK_THROWS_AS((void)flow(data, {0.5, 0}, {1, 0}, 1e-3, 1.0), Infeasible);
}
