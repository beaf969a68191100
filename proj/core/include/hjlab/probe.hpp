#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "hjlab/geometry.hpp"
#include "hjlab/hamiltonian.hpp"
#include "hjlab/vec.hpp"

namespace hjlab {

/// Any value source: closed-form oracle or the variational solver.
using ValueFn = std::function<double(Vec2 x, double t)>;

/// Centered second difference u(x+h e, t+sigma) + u(x-h e, t-sigma) - 2 u(x, t).
/// When a domain is supplied, probe points outside the closed domain throw
/// Infeasible.
double second_difference(const ValueFn& u, Vec2 x, Vec2 e, double h, double t, double sigma,
                         const DomainGeometry* dom = nullptr);

/// One-sided second difference u(x + 2 h e) + u(x) - 2 u(x + h e).
double one_sided_second_difference(const ValueFn& u, Vec2 x, Vec2 e, double h, double t,
                                   const DomainGeometry* dom = nullptr);

struct ExponentFit {
    Vec2 direction;
    std::vector<double> h_values;
    std::vector<double> d2_values;
    double slope = 0.0;        // log-log slope over positive d2 samples
    double coefficient = 0.0;  // exp(intercept)
    double r_squared = 0.0;
    bool concave_flag = false;  // all second differences <= 0
};

/// Least squares of log d2 against log h over the samples with d2 > 0.
/// Requires at least 5 samples spanning at least 1.5 decades of h; throws
/// InsufficientData otherwise, or when fewer than 3 positive d2 remain and
/// the data is not uniformly nonpositive.
ExponentFit fit_exponent(std::span<const double> h_values, std::span<const double> d2_values);

/// max |u_t + H(x, Du)| over the grid, by centered differences with the
/// given step. Callers keep grid points clear of boundaries and seams.
double pde_residual(const ValueFn& u, const HamiltonianModel& model,
                    std::span<const Vec2> grid_points, double t, double fd_step);

enum class LocationClass { Interior, BoundaryGNonneg, BoundaryGNeg };

const char* location_class_name(LocationClass c);

struct SemiconcavityRow {
    Vec2 point;
    Vec2 direction;
    LocationClass location = LocationClass::Interior;
    bool one_sided = false;
    ExponentFit fit;
};

struct ProbeOptions {
    double h_min = 1e-4;
    double h_max = 1e-2;
    int samples = 9;      // log-spaced ladder
    double sigma_coupling = 0.0;  // sigma = coupling * h in centered probes
    double boundary_tol = 1e-9;
};

/// One exponent fit per (point, direction): centered probes at interior
/// points, one-sided probes at boundary points (direction pointing into the
/// domain). The location class records on which side of the g-sign split
/// the boundary point sits; the fractional rate claim only covers g >= 0.
std::vector<SemiconcavityRow> semiconcavity_report(const ValueFn& u, const DomainGeometry& dom,
                                                   const std::function<double(Vec2)>& g,
                                                   std::span<const Vec2> points,
                                                   std::span<const Vec2> directions, double t,
                                                   const ProbeOptions& options = {});

void write_semiconcavity_report(std::ostream& os, std::span<const SemiconcavityRow> rows);

}  // namespace hjlab
