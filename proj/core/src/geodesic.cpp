#include "hjlab/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace hjlab {

namespace {

constexpr double kOnCircleTol = 1e-12;
constexpr double kClearanceTol = 1e-9;
constexpr double kPi = 3.14159265358979323846;

Vec2 rotate(Vec2 v, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

double wrap_angle(double a) {
    while (a < 0.0) a += 2.0 * kPi;
    while (a >= 2.0 * kPi) a -= 2.0 * kPi;
    return a;
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double len2 = ab.squared_norm();
    if (len2 == 0.0) return (p - a).norm();
    const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + t * ab)).norm();
}

bool segment_clear(std::span<const Disk> disks, Vec2 a, Vec2 b) {
    for (const Disk& d : disks)
        if (point_segment_distance(d.center, a, b) < d.radius - kClearanceTol) return false;
    return true;
}

bool strictly_inside_some_disk(std::span<const Disk> disks, Vec2 p, int skip = -1) {
    for (int i = 0; i < static_cast<int>(disks.size()); ++i) {
        if (i == skip) continue;
        if ((p - disks[i].center).norm() < disks[i].radius - kClearanceTol) return true;
    }
    return false;
}

// Angular intervals of circle i strictly covered by other disks, as
// (lo, hi) pairs in [0, 2pi) possibly wrapping.
std::vector<std::pair<double, double>> covered_intervals(std::span<const Disk> disks, int i) {
    std::vector<std::pair<double, double>> out;
    const Disk& ci = disks[i];
    for (int j = 0; j < static_cast<int>(disks.size()); ++j) {
        if (j == i) continue;
        const Disk& cj = disks[j];
        const double d = (cj.center - ci.center).norm();
        if (d + ci.radius <= cj.radius) {
            out.emplace_back(0.0, 2.0 * kPi);  // whole circle swallowed
            continue;
        }
        if (std::abs(d - ci.radius) >= cj.radius) continue;  // no strict coverage
        const double cos_psi =
            (d * d + ci.radius * ci.radius - cj.radius * cj.radius) / (2.0 * d * ci.radius);
        const double psi = std::acos(std::clamp(cos_psi, -1.0, 1.0));
        const double mid = std::atan2(cj.center.y - ci.center.y, cj.center.x - ci.center.x);
        out.emplace_back(wrap_angle(mid - psi), wrap_angle(mid + psi));
    }
    return out;
}

bool arc_hits_interval(double a, double b, double lo, double hi) {
    // All angles wrapped; interval (lo, hi) may wrap, arc (a, b) goes ccw.
    auto unwrap_from = [](double base, double x) {
        while (x < base) x += 2.0 * kPi;
        return x;
    };
    const double b_u = unwrap_from(a, b);
    double lo_u = unwrap_from(a, lo);
    double hi_u = unwrap_from(lo_u, hi);
    // Shrink to interiors; tangency is contact, not penetration.
    lo_u += kClearanceTol;
    hi_u -= kClearanceTol;
    if (lo_u >= hi_u) return false;
    if (lo_u < b_u - kClearanceTol) return true;
    // The interval may also start "before" a when wrapped the other way.
    const double lo2 = lo_u - 2.0 * kPi;
    const double hi2 = hi_u - 2.0 * kPi;
    return hi2 > a + kClearanceTol && lo2 < b_u - kClearanceTol;
}

}  // namespace

VisibilityGraph build_visibility_graph(std::span<const Disk> disks,
                                       std::span<const Vec2> endpoints) {
    VisibilityGraph g;
    const int n_disks = static_cast<int>(disks.size());

    auto add_node = [&](Vec2 pos, int circle, double angle) -> int {
        g.nodes.push_back({pos, circle, angle});
        return static_cast<int>(g.nodes.size()) - 1;
    };
    auto add_circle_point = [&](Vec2 pos, int circle) -> int {
        if (strictly_inside_some_disk(disks, pos, circle)) return -1;
        const double angle =
            std::atan2(pos.y - disks[circle].center.y, pos.x - disks[circle].center.x);
        return add_node(pos, circle, wrap_angle(angle));
    };

    std::vector<int> endpoint_ids;
    for (const Vec2 p : endpoints) {
        int on_circle = -1;
        for (int i = 0; i < n_disks; ++i) {
            if (std::abs((p - disks[i].center).norm() - disks[i].radius) <= kOnCircleTol) {
                on_circle = i;
                break;
            }
        }
        if (on_circle >= 0) {
            endpoint_ids.push_back(add_circle_point(p, on_circle));
        } else {
            endpoint_ids.push_back(add_node(p, -1, 0.0));
        }
    }

    // Tangent points from each free endpoint to each circle.
    for (int e : endpoint_ids) {
        if (e < 0) continue;
        const Vec2 p = g.nodes[e].pos;
        for (int i = 0; i < n_disks; ++i) {
            if (g.nodes[e].circle == i) continue;
            const Vec2 u = p - disks[i].center;
            const double d = u.norm();
            if (d <= disks[i].radius + kOnCircleTol) continue;
            const double beta = std::acos(std::clamp(disks[i].radius / d, -1.0, 1.0));
            for (const double sgn : {1.0, -1.0})
                add_circle_point(disks[i].center + rotate(u / d, sgn * beta) * disks[i].radius, i);
        }
    }

    // Common tangents between circle pairs.
    for (int i = 0; i < n_disks; ++i) {
        for (int j = i + 1; j < n_disks; ++j) {
            const Vec2 u = disks[j].center - disks[i].center;
            const double d = u.norm();
            if (d <= kOnCircleTol) continue;
            const Vec2 uh = u / d;
            // Outer tangents touch both circles on the same side.
            if (d > std::abs(disks[i].radius - disks[j].radius) + kOnCircleTol) {
                const double phi =
                    std::acos(std::clamp((disks[i].radius - disks[j].radius) / d, -1.0, 1.0));
                for (const double sgn : {1.0, -1.0}) {
                    add_circle_point(disks[i].center + rotate(uh, sgn * phi) * disks[i].radius, i);
                    add_circle_point(disks[j].center + rotate(uh, sgn * phi) * disks[j].radius, j);
                }
            }
            // Inner tangents cross between the circles; need disjoint disks.
            if (d > disks[i].radius + disks[j].radius + kOnCircleTol) {
                const double psi =
                    std::acos(std::clamp((disks[i].radius + disks[j].radius) / d, -1.0, 1.0));
                for (const double sgn : {1.0, -1.0}) {
                    add_circle_point(disks[i].center + rotate(uh, sgn * psi) * disks[i].radius, i);
                    add_circle_point(disks[j].center - rotate(uh, sgn * psi) * disks[j].radius, j);
                }
            }
        }
    }

    // Segment edges among all node pairs not on a shared circle.
    const int n_nodes = static_cast<int>(g.nodes.size());
    for (int a = 0; a < n_nodes; ++a) {
        for (int b = a + 1; b < n_nodes; ++b) {
            if (g.nodes[a].circle >= 0 && g.nodes[a].circle == g.nodes[b].circle) continue;
            if (!segment_clear(disks, g.nodes[a].pos, g.nodes[b].pos)) continue;
            g.edges.push_back(
                {a, b, (g.nodes[a].pos - g.nodes[b].pos).norm(), VisibilityGraph::EdgeKind::Segment,
                 -1});
        }
    }

    // Arc edges between angular neighbors on each circle.
    for (int i = 0; i < n_disks; ++i) {
        std::vector<int> on_circle;
        for (int a = 0; a < n_nodes; ++a)
            if (g.nodes[a].circle == i) on_circle.push_back(a);
        if (on_circle.size() < 2) continue;
        std::sort(on_circle.begin(), on_circle.end(),
                  [&](int a, int b) { return g.nodes[a].angle < g.nodes[b].angle; });
        const auto covered = covered_intervals(disks, i);
        const int m = static_cast<int>(on_circle.size());
        for (int k = 0; k < m; ++k) {
            const int a = on_circle[k];
            const int b = on_circle[(k + 1) % m];
            double gap = g.nodes[b].angle - g.nodes[a].angle;
            if (k + 1 == m) gap += 2.0 * kPi;
            if (gap <= kOnCircleTol) {
                g.edges.push_back({a, b, 0.0, VisibilityGraph::EdgeKind::Arc, i});
                continue;
            }
            bool blocked = false;
            for (const auto& [lo, hi] : covered)
                if (arc_hits_interval(g.nodes[a].angle, g.nodes[a].angle + gap, lo, hi)) {
                    blocked = true;
                    break;
                }
            if (!blocked)
                g.edges.push_back(
                    {a, b, disks[i].radius * gap, VisibilityGraph::EdgeKind::Arc, i});
        }
    }
    return g;
}

double geodesic_distance(std::span<const Disk> disks, Vec2 a, Vec2 b) {
    if (strictly_inside_some_disk(disks, a) || strictly_inside_some_disk(disks, b))
        throw Infeasible("geodesic_distance: endpoint strictly inside an obstacle");
    if ((a - b).norm() <= kOnCircleTol) return 0.0;
    if (segment_clear(disks, a, b)) return (a - b).norm();

    const Vec2 endpoints[2] = {a, b};
    const VisibilityGraph g = build_visibility_graph(disks, endpoints);

    // a and b are nodes 0 and 1 by construction.
    const int n = static_cast<int>(g.nodes.size());
    std::vector<std::vector<std::pair<int, double>>> adj(n);
    for (const auto& e : g.edges) {
        adj[e.from].emplace_back(e.to, e.length);
        adj[e.to].emplace_back(e.from, e.length);
    }
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    using Item = std::pair<double, int>;  // lexicographic: distance, node index
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    dist[0] = 0.0;
    pq.emplace(0.0, 0);
    while (!pq.empty()) {
        const auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[u]) continue;
        if (u == 1) return d;
        for (const auto& [v, w] : adj[u]) {
            if (d + w < dist[v]) {
                dist[v] = d + w;
                pq.emplace(dist[v], v);
            }
        }
    }
    return dist[1];  // unbounded disk complements always connect
}

double leftward_potential(std::span<const Disk> disks, Vec2 x) {
    if (strictly_inside_some_disk(disks, x))
        throw Infeasible("leftward_potential: point strictly inside an obstacle");

    auto leftward_ray_clear = [&](Vec2 p) {
        for (const Disk& d : disks) {
            const double dy = std::abs(p.y - d.center.y);
            if (dy >= d.radius - kOnCircleTol) continue;
            const double w = std::sqrt(std::max(0.0, d.radius * d.radius - dy * dy));
            if (d.center.x - w < p.x - kClearanceTol) return false;
        }
        return true;
    };

    double best = std::numeric_limits<double>::infinity();
    if (leftward_ray_clear(x)) best = x.x;

    for (int i = 0; i < static_cast<int>(disks.size()); ++i) {
        const Disk& d = disks[i];
        std::vector<Vec2> exits = {d.center + Vec2{0.0, d.radius}, d.center - Vec2{0.0, d.radius}};
        // A circle crossing the target line can release the path directly
        // at the crossing points.
        if (std::abs(d.center.x) < d.radius) {
            const double w = std::sqrt(d.radius * d.radius - d.center.x * d.center.x);
            exits.push_back({0.0, d.center.y + w});
            exits.push_back({0.0, d.center.y - w});
        }
        for (const Vec2 e : exits) {
            if (strictly_inside_some_disk(disks, e, i)) continue;
            if (!leftward_ray_clear(e)) continue;
            if (e.x + 0.0 >= best) continue;  // even a zero-length approach cannot win
            best = std::min(best, geodesic_distance(disks, x, e) + e.x);
        }
    }
    return best;
}

double disk_solution(double r, double phi, double t) {
    if (r < 1.0 - 1e-12) throw Infeasible("disk_solution: point inside the unit disk");
    r = std::max(r, 1.0);
    const double x1 = r * std::cos(phi);
    const double x2 = r * std::sin(phi);
    if (x1 > 0.0 && x2 >= 0.0 && x2 <= 1.0) {
        const double a = std::atan2(x2, x1);
        return -t + (0.5 * kPi - std::acos(1.0 / r) - a) + std::sqrt(r * r - 1.0) + 2.0;
    }
    if (x1 > 0.0 && x2 >= -1.0 && x2 < 0.0) {
        const double a = std::atan2(x2, x1);
        return -t + (0.5 * kPi - std::acos(1.0 / r) + a) + std::sqrt(r * r - 1.0) + 2.0;
    }
    return -t + x1 + 2.0;
}

std::vector<Disk> two_holes_disks(double h) {
    return {{{0.0, 0.0}, 1.0}, {{2.0, 2.0 - h}, 1.0}};
}

TwoHolesReport two_holes(double h) {
    if (!(h > 0.0 && h < 2.0)) throw std::domain_error("two_holes: h must be in (0, 2)");
    TwoHolesReport rep;
    rep.h = h;
    rep.t1 = 2.0 + 0.5 * kPi;
    rep.D1 = 0.5 * kPi - 1.0;
    rep.theta0 = 2.0 * std::atan((2.0 - h) / 2.0) + 0.5 * h;
    rep.t2 = 4.0 + kPi - rep.theta0;
    rep.z = Vec2{2.0 + std::sin(rep.theta0), (2.0 - h) - std::cos(rep.theta0)};
    rep.f_h = std::abs(std::sin(rep.theta0) + rep.theta0 - kPi);

    // Independent reconstruction from the tangent construction: solve for
    // the tangent departure angle on the second circle by bisection on the
    // closure condition, recover the tangent length, then equate the two
    // trajectory times to recover theta0.
    const Vec2 o2{2.0, 2.0 - h};
    auto closure = [&](double alpha) {
        const Vec2 a = o2 + rotate(Vec2{0.0, -1.0}, -alpha);
        const double rt = a.norm();
        return alpha + std::acos(1.0 / rt) + std::atan2(a.y, a.x) - 0.5 * kPi;
    };
    double lo = 0.0, hi = 0.5 * kPi;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (closure(lo) * closure(mid) <= 0.0)
            hi = mid;
        else
            lo = mid;
    }
    rep.alpha_tilde = 0.5 * (lo + hi);
    rep.r_tilde = (o2 + rotate(Vec2{0.0, -1.0}, -rep.alpha_tilde)).norm();
    const double tangent_len = std::sqrt(rep.r_tilde * rep.r_tilde - 1.0);
    // Equal times around the top and through the inner tangent corridor:
    // pi - theta + 2 = theta + 2 alpha + tangent_len.
    rep.theta0_reconstructed = 0.5 * (kPi + 2.0 - 2.0 * rep.alpha_tilde - tangent_len);
    return rep;
}

TwoHolesCrossCheck two_holes_crosscheck(double h, int samples, double tolerance) {
    const TwoHolesReport rep = two_holes(h);
    const auto disks = two_holes_disks(h);
    double worst = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < samples; ++k) {
        const double th = 2.0 * kPi * k / samples;
        const Vec2 x = disks[1].center + Vec2{std::cos(th), std::sin(th)};
        if ((x - disks[0].center).norm() < disks[0].radius - 1e-12) continue;
        worst = std::max(worst, leftward_potential(disks, x));
    }
    TwoHolesCrossCheck chk;
    chk.t2_closed_form = rep.t2;
    chk.t2_geodesic = 2.0 + worst;
    chk.agrees = std::abs(chk.t2_geodesic - chk.t2_closed_form) <= tolerance;
    return chk;
}

}  // namespace hjlab
