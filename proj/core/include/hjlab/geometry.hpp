#pragma once

#include <vector>

#include "hjlab/errors.hpp"
#include "hjlab/vec.hpp"

namespace hjlab {

struct Disk {
    Vec2 center;
    double radius = 1.0;
};

enum class DomainKind { HalfSpace, ExteriorDisks, BoundedBall, FreeSpace };

/// Implicit representation of the domain through its signed distance
/// b(x) = dist(x, domain) - dist(x, complement): negative strictly inside,
/// positive strictly outside, zero on the boundary. All supported domains
/// have closed-form signed distances, normals and curvatures; the tube
/// radius bounds the neighborhood of the boundary on which those formulas
/// are valid second-order data.
class DomainGeometry {
public:
    static DomainGeometry half_space(Vec2 outward_normal, double offset);
    static DomainGeometry exterior_disks(std::vector<Disk> disks, double tube_radius = -1.0);
    static DomainGeometry bounded_ball(Vec2 center, double radius, double tube_radius = -1.0);
    static DomainGeometry free_space();

    DomainKind kind() const { return kind_; }
    double tube_radius() const { return tube_radius_; }
    const std::vector<Disk>& disks() const { return disks_; }

    double signed_distance(Vec2 x) const;

    /// Unit outward normal Db(x). Throws OutsideTube beyond the tube.
    Vec2 outward_normal(Vec2 x) const;

    /// D^2 b(x); symmetric and annihilates the normal.
    Mat2 hessian_signed_distance(Vec2 x) const;

    /// Closest point of the closed domain. Identity inside; throws
    /// AmbiguousProjection when the closest point is not unique.
    Vec2 project(Vec2 x) const;

    /// Closest boundary point, valid on both sides within the tube.
    Vec2 project_to_boundary(Vec2 x) const;

    bool contains(Vec2 x, double tol = 1e-10) const { return signed_distance(x) <= tol; }

private:
    DomainGeometry() = default;

    // Index of the disk realizing b(x) = max_i (R_i - |x - c_i|); checks
    // uniqueness of the maximizer when required.
    int nearest_disk(Vec2 x, bool require_unique) const;

    DomainKind kind_ = DomainKind::FreeSpace;
    std::vector<Disk> disks_;
    Vec2 normal_{0.0, 1.0};   // HalfSpace
    double offset_ = 0.0;     // HalfSpace
    Vec2 center_;             // BoundedBall
    double radius_ = 1.0;     // BoundedBall
    double tube_radius_ = 0.0;
};

}  // namespace hjlab
