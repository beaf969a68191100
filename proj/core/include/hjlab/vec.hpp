#pragma once

#include <cmath>
#include <ostream>

namespace hjlab {

/// Plane vector. The whole lab is two-dimensional; using a concrete type
/// instead of a generic linear-algebra library keeps the hot loops flat.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    Vec2& operator*=(double s) { x *= s; y *= s; return *this; }

    constexpr double dot(Vec2 o) const { return x * o.x + y * o.y; }
    constexpr double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    constexpr double squared_norm() const { return x * x + y * y; }
    Vec2 normalized() const { const double n = norm(); return {x / n, y / n}; }
    /// Counterclockwise quarter turn.
    constexpr Vec2 perp() const { return {-y, x}; }

    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

constexpr Vec2 operator*(double s, Vec2 v) { return {v.x * s, v.y * s}; }

inline std::ostream& operator<<(std::ostream& os, Vec2 v) {
    return os << "(" << v.x << ", " << v.y << ")";
}

using Point2 = Vec2;

/// 2x2 matrix, row major.
struct Mat2 {
    double xx = 0.0, xy = 0.0;
    double yx = 0.0, yy = 0.0;

    constexpr Mat2() = default;
    constexpr Mat2(double xx_, double xy_, double yx_, double yy_)
        : xx(xx_), xy(xy_), yx(yx_), yy(yy_) {}

    static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static constexpr Mat2 zero() { return {}; }
    /// a b^T
    static constexpr Mat2 outer(Vec2 a, Vec2 b) {
        return {a.x * b.x, a.x * b.y, a.y * b.x, a.y * b.y};
    }

    constexpr Vec2 operator*(Vec2 v) const {
        return {xx * v.x + xy * v.y, yx * v.x + yy * v.y};
    }
    constexpr Mat2 operator+(const Mat2& o) const {
        return {xx + o.xx, xy + o.xy, yx + o.yx, yy + o.yy};
    }
    constexpr Mat2 operator-(const Mat2& o) const {
        return {xx - o.xx, xy - o.xy, yx - o.yx, yy - o.yy};
    }
    constexpr Mat2 operator*(double s) const { return {xx * s, xy * s, yx * s, yy * s}; }
    constexpr Mat2 transpose() const { return {xx, yx, xy, yy}; }
    constexpr double det() const { return xx * yy - xy * yx; }

    Vec2 solve(Vec2 rhs) const {
        const double d = det();
        return {(rhs.x * yy - xy * rhs.y) / d, (xx * rhs.y - rhs.x * yx) / d};
    }

    /// Eigenvalues of the symmetrized matrix, ascending.
    void symmetric_eigenvalues(double& lo, double& hi) const {
        const double sxy = 0.5 * (xy + yx);
        const double tr = xx + yy;
        const double disc = std::sqrt(std::max(0.0, 0.25 * (xx - yy) * (xx - yy) + sxy * sxy));
        lo = 0.5 * tr - disc;
        hi = 0.5 * tr + disc;
    }

    double max_abs() const {
        return std::max(std::max(std::abs(xx), std::abs(xy)),
                        std::max(std::abs(yx), std::abs(yy)));
    }
};

constexpr Mat2 operator*(double s, const Mat2& m) { return m * s; }

}  // namespace hjlab
