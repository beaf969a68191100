#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "hjlab/geometry.hpp"
#include "hjlab/vec.hpp"

namespace hjlab {

enum class Regime { Interior, BoundarySlideLPos, BoundaryLZero };

const char* regime_name(Regime r);

/// Discretized reflected trajectory. All per-sample sequences have length
/// N+1; v and l are piecewise constant on [s_k, s_{k+1}) with the final
/// entries duplicated so every column serializes per sample. p and p_bar
/// stay empty until the action module fills them.
struct ReflectedPath {
    std::vector<double> times;
    std::vector<Vec2> eta;
    std::vector<Vec2> v;
    std::vector<double> l;
    std::vector<Vec2> p;
    std::vector<Vec2> p_bar;
    std::vector<Regime> regime;
    double boundary_band = 0.0;

    std::size_t size() const { return times.size(); }
    bool has_momentum() const { return !p.empty(); }
};

/// One predictor-projection step of the Skorokhod scheme: the predictor
/// y = eta + dt v is kept when feasible, otherwise projected back with the
/// expelled normal displacement per unit time recorded as l.
struct SkorokhodStep {
    Vec2 eta;
    double l = 0.0;
};

SkorokhodStep skorokhod_step(const DomainGeometry& dom, Vec2 eta, Vec2 v, double dt);

/// Forward integration of the Skorokhod problem for a given control signal.
/// Throws Infeasible if x0 is outside the closed domain and LeftTube if a
/// predictor escapes the projection tube.
ReflectedPath integrate(const DomainGeometry& dom, Vec2 x0,
                        const std::function<Vec2(double)>& control, double dt, double T);

struct SkorokhodResiduals {
    double max_feasibility_violation = 0.0;
    double min_l = 0.0;
    double max_consistency_defect = 0.0;
    double complementarity_integral = 0.0;
};

SkorokhodResiduals residuals(const DomainGeometry& dom, const ReflectedPath& path);

/// Columnar text: s eta_x eta_y v_x v_y l regime [p_x p_y pbar_x pbar_y].
void write_path(std::ostream& os, const ReflectedPath& path);
void write_path_file(const std::string& filename, const ReflectedPath& path);

}  // namespace hjlab
