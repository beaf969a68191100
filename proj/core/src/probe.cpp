#include "hjlab/probe.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "hjlab/errors.hpp"

namespace hjlab {

namespace {

void require_feasible(const DomainGeometry* dom, Vec2 x) {
    if (dom && dom->signed_distance(x) > 1e-12)
        throw Infeasible("probe point left the closed domain");
}

}  // namespace

double second_difference(const ValueFn& u, Vec2 x, Vec2 e, double h, double t, double sigma,
                         const DomainGeometry* dom) {
    if (t - sigma <= 0.0) throw std::invalid_argument("second_difference: need t - sigma > 0");
    const Vec2 xp = x + h * e;
    const Vec2 xm = x - h * e;
    require_feasible(dom, xp);
    require_feasible(dom, xm);
    return u(xp, t + sigma) + u(xm, t - sigma) - 2.0 * u(x, t);
}

double one_sided_second_difference(const ValueFn& u, Vec2 x, Vec2 e, double h, double t,
                                   const DomainGeometry* dom) {
    const Vec2 x1 = x + h * e;
    const Vec2 x2 = x + 2.0 * h * e;
    require_feasible(dom, x);
    require_feasible(dom, x1);
    require_feasible(dom, x2);
    return u(x2, t) + u(x, t) - 2.0 * u(x1, t);
}

ExponentFit fit_exponent(std::span<const double> h_values, std::span<const double> d2_values) {
    if (h_values.size() != d2_values.size())
        throw std::invalid_argument("fit_exponent: size mismatch");
    if (h_values.size() < 5) throw InsufficientData("fit_exponent: need at least 5 samples");
    for (std::size_t i = 1; i < h_values.size(); ++i)
        if (!(h_values[i] < h_values[i - 1]))
            throw std::invalid_argument("fit_exponent: h must be strictly decreasing");
    const double decades = std::log10(h_values.front() / h_values.back());
    if (decades < 1.5 - 1e-12)
        throw InsufficientData("fit_exponent: h must span at least 1.5 decades");

    ExponentFit fit;
    fit.h_values.assign(h_values.begin(), h_values.end());
    fit.d2_values.assign(d2_values.begin(), d2_values.end());
    fit.concave_flag = std::all_of(d2_values.begin(), d2_values.end(),
                                   [](double v) { return v <= 0.0; });

    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < h_values.size(); ++i) {
        if (d2_values[i] > 0.0) {
            lx.push_back(std::log(h_values[i]));
            ly.push_back(std::log(d2_values[i]));
        }
    }
    if (lx.size() < 3) {
        if (fit.concave_flag) {
            fit.slope = std::numeric_limits<double>::quiet_NaN();
            fit.coefficient = std::numeric_limits<double>::quiet_NaN();
            fit.r_squared = std::numeric_limits<double>::quiet_NaN();
            return fit;
        }
        throw InsufficientData("fit_exponent: fewer than 3 positive second differences");
    }

    const auto n = static_cast<double>(lx.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
        syy += ly[i] * ly[i];
    }
    const double denom = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - fit.slope * sx) / n;
    fit.coefficient = std::exp(intercept);
    const double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double r = ly[i] - (intercept + fit.slope * lx[i]);
        ss_res += r * r;
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

double pde_residual(const ValueFn& u, const HamiltonianModel& model,
                    std::span<const Vec2> grid_points, double t, double fd_step) {
    double worst = 0.0;
    const double h = fd_step;
    for (const Vec2 x : grid_points) {
        const double ut = (u(x, t + h) - u(x, t - h)) / (2.0 * h);
        const Vec2 du{(u({x.x + h, x.y}, t) - u({x.x - h, x.y}, t)) / (2.0 * h),
                      (u({x.x, x.y + h}, t) - u({x.x, x.y - h}, t)) / (2.0 * h)};
        worst = std::max(worst, std::abs(ut + model.value(x, du)));
    }
    return worst;
}

const char* location_class_name(LocationClass c) {
    switch (c) {
        case LocationClass::Interior: return "interior";
        case LocationClass::BoundaryGNonneg: return "boundary_g_nonneg";
        case LocationClass::BoundaryGNeg: return "boundary_g_neg";  // no paper claim
    }
    return "?";
}

std::vector<SemiconcavityRow> semiconcavity_report(const ValueFn& u, const DomainGeometry& dom,
                                                   const std::function<double(Vec2)>& g,
                                                   std::span<const Vec2> points,
                                                   std::span<const Vec2> directions, double t,
                                                   const ProbeOptions& options) {
    std::vector<double> hs(options.samples);
    const double ratio = std::pow(options.h_min / options.h_max,
                                  1.0 / std::max(1, options.samples - 1));
    for (int i = 0; i < options.samples; ++i) hs[i] = options.h_max * std::pow(ratio, i);

    std::vector<SemiconcavityRow> rows;
    for (const Vec2 x : points) {
        const double b = dom.signed_distance(x);
        LocationClass loc = LocationClass::Interior;
        if (std::abs(b) <= options.boundary_tol)
            loc = g(x) >= 0.0 ? LocationClass::BoundaryGNonneg : LocationClass::BoundaryGNeg;
        for (const Vec2 e : directions) {
            SemiconcavityRow row;
            row.point = x;
            row.direction = e;
            row.location = loc;
            row.one_sided = loc != LocationClass::Interior;
            std::vector<double> d2(hs.size());
            try {
                for (std::size_t i = 0; i < hs.size(); ++i) {
                    d2[i] = row.one_sided
                                ? one_sided_second_difference(u, x, e, hs[i], t, &dom)
                                : second_difference(u, x, e, hs[i], t,
                                                    options.sigma_coupling * hs[i], &dom);
                }
                row.fit = fit_exponent(hs, d2);
            } catch (const Infeasible&) {
                continue;  // probes leaving the domain are skipped per row
            } catch (const InsufficientData&) {
                row.fit.h_values = hs;
                row.fit.d2_values = d2;
                row.fit.slope = std::numeric_limits<double>::quiet_NaN();
                row.fit.coefficient = std::numeric_limits<double>::quiet_NaN();
            }
            row.fit.direction = e;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

void write_semiconcavity_report(std::ostream& os, std::span<const SemiconcavityRow> rows) {
    os << "# x y class dir_x dir_y slope coefficient r2 concave\n";
    os.precision(12);
    for (const auto& row : rows) {
        os << row.point.x << ' ' << row.point.y << ' ' << location_class_name(row.location) << ' '
           << row.direction.x << ' ' << row.direction.y << ' ' << row.fit.slope << ' '
           << row.fit.coefficient << ' ' << row.fit.r_squared << ' '
           << (row.fit.concave_flag ? 1 : 0) << '\n';
    }
}

}  // namespace hjlab
