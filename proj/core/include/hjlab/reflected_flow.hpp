#pragma once

#include "hjlab/action.hpp"
#include "hjlab/skorokhod.hpp"

namespace hjlab {

/// Integrates the reflected Hamiltonian dynamics: the classical interior
/// system, the boundary system with active reflection (momentum pinned to
/// p . nu = g), and the boundary system with vanishing reflection (momentum
/// kept tangent to the level sets of the constraint D_p H . nu = 0), with
/// event-detected regime switching. Returns a path with p filled.
///
/// eps_l is the reflection threshold deciding between the two boundary
/// regimes; switching times are located by bisection to 1e-10 in time.
/// Throws RegimeChatter after max_switches regime changes and NoConvergence
/// if the scalar constraint solve fails.
ReflectedPath flow(const ProblemData& data, Vec2 x0, Vec2 p0, double dt, double T,
                   double eps_l = 1e-6, int max_switches = 1000);

struct ModeDiagnostics {
    double max_pn_minus_g = 0.0;   // |p . nu - g| on samples with l > eps_l
    double max_tangency = 0.0;     // |nu . eta_dot| on boundary samples
    double max_l_identity = 0.0;   // |l + D_p H . nu| on boundary samples
};

ModeDiagnostics mode_diagnostics(const ProblemData& data, const ReflectedPath& path,
                                 double eps_l = 1e-6);

struct FlowComparison {
    double sup_path_distance = 0.0;
    double momentum_distance_at_start = 0.0;
};

/// Runs the flow from the minimizer's initial tangential momentum and
/// reports how far it strays from the variational minimizer.
FlowComparison compare_with_minimizer(const ProblemData& data, Vec2 x, double t,
                                      const SolverParams& params);

}  // namespace hjlab
