#include <doctest.h>

#include <cmath>
#include <random>

#include "hjlab/geometry.hpp"

using namespace hjlab;

namespace {

// Independent oracle: central finite differences of the signed distance.
Mat2 fd_hessian(const DomainGeometry& dom, Vec2 x, double h = 1e-5) {
    auto b = [&](double dx, double dy) { return dom.signed_distance({x.x + dx, x.y + dy}); };
    Mat2 m;
    m.xx = (b(h, 0) - 2.0 * b(0, 0) + b(-h, 0)) / (h * h);
    m.yy = (b(0, h) - 2.0 * b(0, 0) + b(0, -h)) / (h * h);
    m.xy = m.yx = (b(h, h) - b(h, -h) - b(-h, h) + b(-h, -h)) / (4.0 * h * h);
    return m;
}

Vec2 fd_gradient(const DomainGeometry& dom, Vec2 x, double h = 1e-7) {
    return {(dom.signed_distance({x.x + h, x.y}) - dom.signed_distance({x.x - h, x.y})) / (2 * h),
            (dom.signed_distance({x.x, x.y + h}) - dom.signed_distance({x.x, x.y - h})) / (2 * h)};
}

}  // namespace

TEST_CASE("signed distance of the unit-disk complement") {
    const auto dom = DomainGeometry::exterior_disks({{{0, 0}, 1}});
    CHECK(dom.signed_distance({2, 0}) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(dom.signed_distance({0.5, 0}) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(dom.signed_distance({1, 0}) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("signed distance of other domain kinds") {
    const auto half = DomainGeometry::half_space({0, -1}, 0.0);  // {x2 > 0}
    CHECK(half.signed_distance({3, 2}) == doctest::Approx(-2.0));
    CHECK(half.signed_distance({3, -1}) == doctest::Approx(1.0));

    const auto ball = DomainGeometry::bounded_ball({1, 1}, 2.0);
    CHECK(ball.signed_distance({1, 1}) == doctest::Approx(-2.0));
    CHECK(ball.signed_distance({4, 1}) == doctest::Approx(1.0));

    const auto fs = DomainGeometry::free_space();
    CHECK(fs.signed_distance({100, -3}) < -1e100);
}

TEST_CASE("outward normal") {
    const auto disk = DomainGeometry::exterior_disks({{{0, 0}, 1}});
    const Vec2 n1 = disk.outward_normal({1, 0});
    CHECK(n1.x == doctest::Approx(-1.0));
    CHECK(n1.y == doctest::Approx(0.0));

    const auto half = DomainGeometry::half_space({0, -1}, 0.0);
    const Vec2 n2 = half.outward_normal({3, 0});
    CHECK(n2.x == doctest::Approx(0.0));
    CHECK(n2.y == doctest::Approx(-1.0));

    const Vec2 n3 = disk.outward_normal({0, 1.05});
    CHECK(n3.x == doctest::Approx(0.0));
    CHECK(n3.y == doctest::Approx(-1.0));

    CHECK_THROWS_AS((void)disk.outward_normal({3, 3}), OutsideTube);
}

TEST_CASE("hessian of the signed distance against finite differences") {
    const auto disk = DomainGeometry::exterior_disks({{{0, 0}, 1}});
    const Mat2 h1 = disk.hessian_signed_distance({1, 0});
    const Mat2 fd1 = fd_hessian(disk, {1, 0});
    CHECK(h1.xx == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(h1.yy == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK((h1 - fd1).max_abs() < 1e-4);

    const auto half = DomainGeometry::half_space({0, -1}, 0.0);
    CHECK(half.hessian_signed_distance({7, 0.1}).max_abs() == 0.0);

    const auto big = DomainGeometry::exterior_disks({{{0, 0}, 2}});
    const Mat2 h2 = big.hessian_signed_distance({2, 0});
    CHECK(h2.yy == doctest::Approx(-0.5).epsilon(1e-9));
    CHECK((h2 - fd_hessian(big, {2, 0})).max_abs() < 1e-4);
}

TEST_CASE("projection") {
    const auto disk = DomainGeometry::exterior_disks({{{0, 0}, 1}});
    const Vec2 p1 = disk.project({0.5, 0});
    CHECK(p1.x == doctest::Approx(1.0));
    CHECK(p1.y == doctest::Approx(0.0));

    const Vec2 p2 = disk.project({3, 2});
    CHECK(p2.x == 3.0);
    CHECK(p2.y == 2.0);

    CHECK_THROWS_AS((void)disk.project({0, 0}), AmbiguousProjection);
}

TEST_CASE("projection properties in the tube") {
    const auto dom = DomainGeometry::exterior_disks({{{0, 0}, 1}, {{2.0, 1.0}, 1.0}}, 0.4);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> angle(0.0, 2 * M_PI);
    std::uniform_real_distribution<double> depth(-0.35, 0.35);
    for (int i = 0; i < 200; ++i) {
        const double th = angle(rng);
        const Vec2 c = (i % 2 == 0) ? Vec2{0, 0} : Vec2{2, 1};
        const Vec2 x = c + (1.0 - depth(rng)) * Vec2{std::cos(th), std::sin(th)};
        if (std::abs(dom.signed_distance(x)) >= 0.35) continue;

        const Vec2 proj = dom.project(x);
        CHECK(dom.signed_distance(proj) <= 1e-12);
        const Vec2 twice = dom.project(proj);
        CHECK((twice - proj).norm() <= 1e-12);

        const Vec2 nu = dom.outward_normal(x);
        CHECK(nu.norm() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(nu.dot(fd_gradient(dom, x)) >= 1.0 - 1e-6);

        const Mat2 hess = dom.hessian_signed_distance(x);
        CHECK((hess * nu).norm() <= 1e-6);
    }
}

TEST_CASE("closed-form distance against densely sampled boundary points") {
    const auto dom = DomainGeometry::exterior_disks({{{0, 0}, 1}, {{2.0, 1.0}, 1.0}});
    constexpr int kSamples = 10000;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> coord(-2.5, 4.5);
    int checked = 0;
    for (int trial = 0; trial < 200 && checked < 40; ++trial) {
        const Vec2 x{coord(rng), coord(rng)};
        if (dom.signed_distance(x) > -1e-3) continue;
        double brute = std::numeric_limits<double>::infinity();
        for (const Disk& d : dom.disks()) {
            for (int k = 0; k < kSamples; ++k) {
                const double th = 2 * M_PI * k / kSamples;
                const Vec2 b = d.center + d.radius * Vec2{std::cos(th), std::sin(th)};
                brute = std::min(brute, (x - b).norm());
            }
        }
        CHECK(std::abs(-dom.signed_distance(x) - brute) < 1e-3);
        ++checked;
    }
    CHECK(checked >= 20);
}

TEST_CASE("projection failure modes near two obstacles") {
    const auto dom = DomainGeometry::exterior_disks({{{-2, 0}, 1}, {{2, 0}, 1}}, 0.9);
    // Equidistant outside points are in the closed domain and project to
    // themselves; the failure cases are obstacle centers and deep points.
    CHECK(dom.project({0, 0}).x == 0.0);
    CHECK_THROWS_AS((void)dom.project({2, 0}), AmbiguousProjection);
    CHECK_THROWS_AS((void)dom.outward_normal({0, 0}), OutsideTube);
}
