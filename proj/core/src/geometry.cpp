#include "hjlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hjlab {

namespace {

constexpr double kAmbiguityTol = 1e-12;

std::string describe(Vec2 x) {
    std::ostringstream os;
    os << "(" << x.x << ", " << x.y << ")";
    return os.str();
}

}  // namespace

DomainGeometry DomainGeometry::half_space(Vec2 outward_normal, double offset) {
    DomainGeometry d;
    d.kind_ = DomainKind::HalfSpace;
    d.normal_ = outward_normal.normalized();
    d.offset_ = offset;
    d.tube_radius_ = std::numeric_limits<double>::infinity();
    return d;
}

DomainGeometry DomainGeometry::exterior_disks(std::vector<Disk> disks, double tube_radius) {
    DomainGeometry d;
    d.kind_ = DomainKind::ExteriorDisks;
    d.disks_ = std::move(disks);
    double min_radius = std::numeric_limits<double>::infinity();
    for (const Disk& disk : d.disks_) {
        if (disk.radius <= 0.0) throw std::invalid_argument("disk radius must be positive");
        min_radius = std::min(min_radius, disk.radius);
    }
    if (d.disks_.empty()) throw std::invalid_argument("exterior_disks needs at least one disk");
    d.tube_radius_ = tube_radius > 0.0 ? tube_radius : 0.5 * min_radius;
    if (d.tube_radius_ > min_radius)
        throw std::invalid_argument("tube_radius must not exceed the smallest disk radius");
    return d;
}

DomainGeometry DomainGeometry::bounded_ball(Vec2 center, double radius, double tube_radius) {
    if (radius <= 0.0) throw std::invalid_argument("ball radius must be positive");
    DomainGeometry d;
    d.kind_ = DomainKind::BoundedBall;
    d.center_ = center;
    d.radius_ = radius;
    d.tube_radius_ = tube_radius > 0.0 ? tube_radius : 0.5 * radius;
    return d;
}

DomainGeometry DomainGeometry::free_space() {
    DomainGeometry d;
    d.kind_ = DomainKind::FreeSpace;
    d.tube_radius_ = std::numeric_limits<double>::infinity();
    return d;
}

double DomainGeometry::signed_distance(Vec2 x) const {
    switch (kind_) {
        case DomainKind::HalfSpace:
            return normal_.dot(x) - offset_;
        case DomainKind::ExteriorDisks: {
            double best = -std::numeric_limits<double>::infinity();
            for (const Disk& d : disks_) best = std::max(best, d.radius - (x - d.center).norm());
            return best;
        }
        case DomainKind::BoundedBall:
            return (x - center_).norm() - radius_;
        case DomainKind::FreeSpace:
            return -std::numeric_limits<double>::infinity();
    }
    return 0.0;
}

int DomainGeometry::nearest_disk(Vec2 x, bool require_unique) const {
    double best = -std::numeric_limits<double>::infinity();
    double second = best;
    int arg = 0;
    for (int i = 0; i < static_cast<int>(disks_.size()); ++i) {
        const double v = disks_[i].radius - (x - disks_[i].center).norm();
        if (v > best) {
            second = best;
            best = v;
            arg = i;
        } else if (v > second) {
            second = v;
        }
    }
    if (require_unique && disks_.size() > 1 && best - second <= kAmbiguityTol)
        throw AmbiguousProjection("point " + describe(x) + " is equidistant to two boundary pieces");
    return arg;
}

Vec2 DomainGeometry::outward_normal(Vec2 x) const {
    if (std::abs(signed_distance(x)) > tube_radius_)
        throw OutsideTube("outward_normal at " + describe(x) + " is outside the tube");
    switch (kind_) {
        case DomainKind::HalfSpace:
            return normal_;
        case DomainKind::ExteriorDisks: {
            const Disk& d = disks_[nearest_disk(x, true)];
            const Vec2 r = x - d.center;
            const double n = r.norm();
            if (n <= kAmbiguityTol)
                throw AmbiguousProjection("normal undefined at obstacle center " + describe(x));
            return -(r / n);
        }
        case DomainKind::BoundedBall: {
            const Vec2 r = x - center_;
            const double n = r.norm();
            if (n <= kAmbiguityTol)
                throw AmbiguousProjection("normal undefined at ball center");
            return r / n;
        }
        case DomainKind::FreeSpace:
            throw OutsideTube("free space has no boundary");
    }
    return {};
}

Mat2 DomainGeometry::hessian_signed_distance(Vec2 x) const {
    if (std::abs(signed_distance(x)) > tube_radius_)
        throw OutsideTube("hessian_signed_distance at " + describe(x) + " is outside the tube");
    switch (kind_) {
        case DomainKind::HalfSpace:
            return Mat2::zero();
        case DomainKind::ExteriorDisks: {
            const Disk& d = disks_[nearest_disk(x, true)];
            const Vec2 r = x - d.center;
            const double n = r.norm();
            if (n <= kAmbiguityTol)
                throw AmbiguousProjection("hessian undefined at obstacle center");
            const Vec2 u = r / n;
            // b = R - |x - c|  =>  D^2 b = -(I - u u^T)/|x - c|
            return (Mat2::outer(u, u) - Mat2::identity()) * (1.0 / n);
        }
        case DomainKind::BoundedBall: {
            const Vec2 r = x - center_;
            const double n = r.norm();
            if (n <= kAmbiguityTol)
                throw AmbiguousProjection("hessian undefined at ball center");
            const Vec2 u = r / n;
            return (Mat2::identity() - Mat2::outer(u, u)) * (1.0 / n);
        }
        case DomainKind::FreeSpace:
            throw OutsideTube("free space has no boundary");
    }
    return {};
}

Vec2 DomainGeometry::project(Vec2 x) const {
    const double b = signed_distance(x);
    if (b <= 0.0) return x;
    switch (kind_) {
        case DomainKind::HalfSpace:
            if (b > tube_radius_)
                throw OutsideTube("project at " + describe(x) + " is deeper than the tube");
            return x - b * normal_;
        case DomainKind::ExteriorDisks: {
            // Ambiguity (ties, obstacle centers) outranks the tube check.
            const Disk& d = disks_[nearest_disk(x, true)];
            const Vec2 r = x - d.center;
            const double n = r.norm();
            if (n <= kAmbiguityTol)
                throw AmbiguousProjection("projection undefined at obstacle center " + describe(x));
            if (b > tube_radius_)
                throw OutsideTube("project at " + describe(x) + " is deeper than the tube");
            return d.center + r * (d.radius / n);
        }
        case DomainKind::BoundedBall: {
            if (b > tube_radius_)
                throw OutsideTube("project at " + describe(x) + " is deeper than the tube");
            const Vec2 r = x - center_;
            const double n = r.norm();
            return center_ + r * (radius_ / n);
        }
        case DomainKind::FreeSpace:
            return x;
    }
    return x;
}

Vec2 DomainGeometry::project_to_boundary(Vec2 x) const {
    const double b = signed_distance(x);
    if (std::abs(b) > tube_radius_)
        throw OutsideTube("project_to_boundary at " + describe(x) + " is outside the tube");
    switch (kind_) {
        case DomainKind::HalfSpace:
            return x - b * normal_;
        case DomainKind::ExteriorDisks: {
            const Disk& d = disks_[nearest_disk(x, true)];
            const Vec2 r = x - d.center;
            const double n = r.norm();
            if (n <= kAmbiguityTol)
                throw AmbiguousProjection("projection undefined at obstacle center");
            return d.center + r * (d.radius / n);
        }
        case DomainKind::BoundedBall: {
            const Vec2 r = x - center_;
            const double n = r.norm();
            if (n <= kAmbiguityTol) throw AmbiguousProjection("projection undefined at ball center");
            return center_ + r * (radius_ / n);
        }
        case DomainKind::FreeSpace:
            throw OutsideTube("free space has no boundary");
    }
    return x;
}

}  // namespace hjlab
