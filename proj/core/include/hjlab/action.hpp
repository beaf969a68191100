#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "hjlab/geometry.hpp"
#include "hjlab/hamiltonian.hpp"
#include "hjlab/skorokhod.hpp"

namespace hjlab {

using ScalarField = std::function<double(Vec2)>;

/// Everything a value-function problem needs: dynamics model, domain,
/// Neumann datum g and initial datum u0, with Lipschitz bounds kept only
/// for diagnostics.
struct ProblemData {
    std::shared_ptr<const HamiltonianModel> model;
    DomainGeometry dom = DomainGeometry::free_space();
    ScalarField g = [](Vec2) { return 0.0; };
    ScalarField u0 = [](Vec2) { return 0.0; };
    double lip_g = 0.0;
    double lip_u0 = 0.0;
};

struct SolverParams {
    int nodes = 64;          // control discretization count
    double dt = 1e-3;        // integrator step inside rollouts
    int restarts = 8;        // multistart count
    int max_iterations = 150;
    double fd_step = 1e-6;   // forward-difference step for the gradient
    double tolerance = 1e-10;  // convergence tolerance on action decrease
    double v_max = 10.0;     // control box bound per component
    std::uint64_t seed = 42;
    int jobs = 1;            // concurrent restarts
};

struct ValueEstimate {
    double value = 0.0;
    ReflectedPath path;
    int restarts_used = 0;
    double final_gradient_norm = 0.0;
    std::vector<double> action_history;  // best restart, nonincreasing
    std::vector<double> restart_values;  // optimum of every restart
};

/// Action of a path under the problem data: trapezoidal quadrature of
/// L(eta, -v) + g(eta) l plus the initial datum at the endpoint.
double action_value(const ProblemData& data, const ReflectedPath& path);

/// Quadrature restricted to [0, times[k_end]] without the endpoint datum;
/// splits the full action exactly at any sample.
double partial_action(const ProblemData& data, const ReflectedPath& path, std::size_t k_end);

/// Direct transcription of the representation formula: N piecewise-constant
/// controls, Skorokhod forward map, quasi-Newton descent on a forward
/// finite-difference gradient, deterministic multistart. The reported value
/// is an upper bound on the infimum by construction.
ValueEstimate minimize_value(const ProblemData& data, Vec2 x, double t, const SolverParams& params);

/// Fills p (generalized momentum D_v L(eta, -v)) and p_bar (its tangential
/// part on boundary samples) along the path.
void momentum(const ProblemData& data, ReflectedPath& path);

/// Dynamic programming defect at an intermediate time: value at (x, t)
/// against partial action plus a fresh solve from the minimizer's midpoint.
double dpp_check(const ProblemData& data, Vec2 x, double t, double s_mid,
                 const SolverParams& params);

struct PbarReport {
    /// max |pbar_{k+stride} - pbar_k| / (stride ds) over adjacent
    /// same-regime sample pairs.
    double max_increment_ratio = 0.0;
    /// max |p_{k+1} - p_k| over all adjacent pairs.
    double max_p_jump = 0.0;
    /// max jump of the normal part p - pbar across adjacent pairs; this is
    /// the momentum discontinuity the boundary reflection introduces.
    double max_normal_jump = 0.0;
};

PbarReport pbar_lipschitz_report(const ReflectedPath& path, std::size_t stride = 1);

}  // namespace hjlab
