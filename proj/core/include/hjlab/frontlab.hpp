#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "hjlab/geodesic.hpp"
#include "hjlab/geometry.hpp"
#include "hjlab/probe.hpp"

namespace hjlab {

struct BBox {
    double x_lo = 0.0, x_hi = 1.0;
    double y_lo = 0.0, y_hi = 1.0;
};

/// Node-grid sampling of a value function at a fixed time, with a
/// feasibility mask.
struct Field {
    BBox bbox;
    int nx = 2, ny = 2;
    double t = 0.0;
    std::vector<double> values;   // row-major, values[j * nx + i]
    std::vector<bool> mask;       // true where the point is in the closed domain

    double x(int i) const { return bbox.x_lo + (bbox.x_hi - bbox.x_lo) * i / (nx - 1); }
    double y(int j) const { return bbox.y_lo + (bbox.y_hi - bbox.y_lo) * j / (ny - 1); }
    double at(int i, int j) const { return values[static_cast<std::size_t>(j) * nx + i]; }
    bool ok(int i, int j) const { return mask[static_cast<std::size_t>(j) * nx + i]; }
};

/// Evaluates u on the grid; infeasible or failing cells are masked out.
Field evaluate_grid(const ValueFn& u, const DomainGeometry& dom, const BBox& bbox, int nx, int ny,
                    double t, int jobs = 1);

using Polyline = std::vector<Vec2>;

/// Marching-squares zero contours with linear interpolation along cell
/// edges; saddle cells resolved by the cell-average sign. Cells touching a
/// masked node are skipped. Throws EmptyContour on single-signed fields.
std::vector<Polyline> extract_zero_level(const Field& field);

/// Bowing depth: max over contour vertices of |x1 - (t - 2)|, the lag of
/// the front behind the unobstructed front.
double bowing_depth(std::span<const Polyline> contours, double t);

/// Time at which the front leaves the boundary of circle `circle_index`:
/// 2 + max of the leftward potential over boundary samples.
double leave_time(std::span<const Disk> disks, int circle_index, int samples);

void write_field(std::ostream& os, const Field& field);
void write_contours(std::ostream& os, std::span<const Polyline> contours);

}  // namespace hjlab
