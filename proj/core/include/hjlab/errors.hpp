#pragma once

#include <stdexcept>
#include <string>

namespace hjlab {

/// Query point is outside the neighborhood of the boundary on which the
/// signed distance is twice differentiable.
struct OutsideTube : std::runtime_error {
    explicit OutsideTube(const std::string& what) : std::runtime_error(what) {}
};

/// Closest-point projection is not unique (medial axis, obstacle center).
struct AmbiguousProjection : std::runtime_error {
    explicit AmbiguousProjection(const std::string& what) : std::runtime_error(what) {}
};

/// A point that must lie in the closed domain does not.
struct Infeasible : std::runtime_error {
    explicit Infeasible(const std::string& what) : std::runtime_error(what) {}
};

/// Predictor step escaped the projection tube; the time step is too large
/// for the control magnitude.
struct LeftTube : std::runtime_error {
    explicit LeftTube(const std::string& what) : std::runtime_error(what) {}
};

/// Newton iteration failed to converge.
struct NoConvergence : std::runtime_error {
    explicit NoConvergence(const std::string& what) : std::runtime_error(what) {}
};

/// More regime switches than the integrator allows.
struct RegimeChatter : std::runtime_error {
    explicit RegimeChatter(const std::string& what) : std::runtime_error(what) {}
};

/// Not enough usable samples for a fit.
struct InsufficientData : std::runtime_error {
    explicit InsufficientData(const std::string& what) : std::runtime_error(what) {}
};

/// Contour extraction on a single-signed field.
struct EmptyContour : std::runtime_error {
    explicit EmptyContour(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hjlab
