#include "hjlab/frontlab.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <ostream>
#include <stdexcept>

#include "hjlab/errors.hpp"

namespace hjlab {

Field evaluate_grid(const ValueFn& u, const DomainGeometry& dom, const BBox& bbox, int nx, int ny,
                    double t, int jobs) {
    if (nx < 2 || ny < 2) throw std::invalid_argument("evaluate_grid: resolution must be >= 2");
    Field f;
    f.bbox = bbox;
    f.nx = nx;
    f.ny = ny;
    f.t = t;
    f.values.assign(static_cast<std::size_t>(nx) * ny, 0.0);
    f.mask.assign(static_cast<std::size_t>(nx) * ny, false);

    auto eval_rows = [&](int j_begin, int j_end) {
        for (int j = j_begin; j < j_end; ++j) {
            for (int i = 0; i < nx; ++i) {
                const Vec2 x{f.x(i), f.y(j)};
                if (dom.signed_distance(x) > 1e-12) continue;
                try {
                    f.values[static_cast<std::size_t>(j) * nx + i] = u(x, t);
                    f.mask[static_cast<std::size_t>(j) * nx + i] = true;
                } catch (...) {
                    // cell stays masked
                }
            }
        }
    };

    if (jobs > 1) {
        std::vector<std::future<void>> futures;
        const int chunk = (ny + jobs - 1) / jobs;
        for (int j0 = 0; j0 < ny; j0 += chunk)
            futures.push_back(
                std::async(std::launch::async, eval_rows, j0, std::min(ny, j0 + chunk)));
        for (auto& fu : futures) fu.get();
    } else {
        eval_rows(0, ny);
    }
    return f;
}

namespace {

struct SegmentSink {
    std::vector<std::pair<Vec2, Vec2>> segments;
    void add(Vec2 a, Vec2 b) { segments.emplace_back(a, b); }
};

Vec2 edge_zero(Vec2 a, double va, Vec2 b, double vb) {
    const double t = va / (va - vb);
    return a + t * (b - a);
}

// Joins loose segments into polylines by matching endpoints on a quantized
// lattice.
std::vector<Polyline> stitch(const std::vector<std::pair<Vec2, Vec2>>& segments, double eps) {
    struct Key {
        long long x, y;
        bool operator<(const Key& o) const { return x < o.x || (x == o.x && y < o.y); }
    };
    auto key_of = [eps](Vec2 p) {
        return Key{static_cast<long long>(std::llround(p.x / eps)),
                   static_cast<long long>(std::llround(p.y / eps))};
    };
    std::multimap<Key, std::size_t> by_end;
    for (std::size_t s = 0; s < segments.size(); ++s) {
        by_end.emplace(key_of(segments[s].first), s);
        by_end.emplace(key_of(segments[s].second), s);
    }
    std::vector<bool> used(segments.size(), false);
    std::vector<Polyline> out;

    auto take_neighbor = [&](Vec2 p, std::size_t except) -> std::ptrdiff_t {
        auto [lo, hi] = by_end.equal_range(key_of(p));
        for (auto it = lo; it != hi; ++it)
            if (!used[it->second] && it->second != except) return static_cast<std::ptrdiff_t>(it->second);
        return -1;
    };

    for (std::size_t s = 0; s < segments.size(); ++s) {
        if (used[s]) continue;
        used[s] = true;
        Polyline line{segments[s].first, segments[s].second};
        // grow forward
        for (;;) {
            const std::ptrdiff_t n = take_neighbor(line.back(), static_cast<std::size_t>(-1));
            if (n < 0) break;
            used[n] = true;
            const auto& seg = segments[n];
            const bool first_matches = (seg.first - line.back()).norm() <= 2.0 * eps;
            line.push_back(first_matches ? seg.second : seg.first);
        }
        // grow backward
        for (;;) {
            const std::ptrdiff_t n = take_neighbor(line.front(), static_cast<std::size_t>(-1));
            if (n < 0) break;
            used[n] = true;
            const auto& seg = segments[n];
            const bool first_matches = (seg.first - line.front()).norm() <= 2.0 * eps;
            line.insert(line.begin(), first_matches ? seg.second : seg.first);
        }
        out.push_back(std::move(line));
    }
    return out;
}

}  // namespace

std::vector<Polyline> extract_zero_level(const Field& field) {
    bool any_pos = false, any_neg = false;
    for (std::size_t k = 0; k < field.values.size(); ++k) {
        if (!field.mask[k]) continue;
        (field.values[k] > 0.0 ? any_pos : any_neg) = true;
    }
    if (!any_pos || !any_neg)
        throw EmptyContour("extract_zero_level: field does not change sign");

    SegmentSink sink;
    for (int j = 0; j + 1 < field.ny; ++j) {
        for (int i = 0; i + 1 < field.nx; ++i) {
            if (!(field.ok(i, j) && field.ok(i + 1, j) && field.ok(i, j + 1) &&
                  field.ok(i + 1, j + 1)))
                continue;
            const Vec2 p00{field.x(i), field.y(j)}, p10{field.x(i + 1), field.y(j)};
            const Vec2 p01{field.x(i), field.y(j + 1)}, p11{field.x(i + 1), field.y(j + 1)};
            const double v00 = field.at(i, j), v10 = field.at(i + 1, j);
            const double v01 = field.at(i, j + 1), v11 = field.at(i + 1, j + 1);
            int idx = 0;
            if (v00 > 0.0) idx |= 1;
            if (v10 > 0.0) idx |= 2;
            if (v11 > 0.0) idx |= 4;
            if (v01 > 0.0) idx |= 8;
            if (idx == 0 || idx == 15) continue;

            const Vec2 bottom = (v00 > 0.0) != (v10 > 0.0) ? edge_zero(p00, v00, p10, v10) : Vec2{};
            const Vec2 right = (v10 > 0.0) != (v11 > 0.0) ? edge_zero(p10, v10, p11, v11) : Vec2{};
            const Vec2 top = (v01 > 0.0) != (v11 > 0.0) ? edge_zero(p01, v01, p11, v11) : Vec2{};
            const Vec2 left = (v00 > 0.0) != (v01 > 0.0) ? edge_zero(p00, v00, p01, v01) : Vec2{};

            switch (idx) {
                case 1: case 14: sink.add(left, bottom); break;
                case 2: case 13: sink.add(bottom, right); break;
                case 3: case 12: sink.add(left, right); break;
                case 4: case 11: sink.add(right, top); break;
                case 6: case 9: sink.add(bottom, top); break;
                case 7: case 8: sink.add(left, top); break;
                case 5: case 10: {
                    // Saddle: split by the cell-average sign.
                    const double avg = 0.25 * (v00 + v10 + v01 + v11);
                    const bool center_pos = avg > 0.0;
                    if ((idx == 5) == center_pos) {
                        sink.add(left, top);
                        sink.add(bottom, right);
                    } else {
                        sink.add(left, bottom);
                        sink.add(right, top);
                    }
                    break;
                }
                default: break;
            }
        }
    }
    const double cell = std::min((field.bbox.x_hi - field.bbox.x_lo) / (field.nx - 1),
                                 (field.bbox.y_hi - field.bbox.y_lo) / (field.ny - 1));
    return stitch(sink.segments, 1e-7 * cell + 1e-15);
}

double bowing_depth(std::span<const Polyline> contours, double t) {
    if (contours.empty()) throw EmptyContour("bowing_depth: no contours");
    double depth = 0.0;
    for (const auto& line : contours)
        for (const Vec2 v : line) depth = std::max(depth, std::abs(v.x - (t - 2.0)));
    return depth;
}

double leave_time(std::span<const Disk> disks, int circle_index, int samples) {
    const Disk& d = disks[circle_index];
    double worst = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < samples; ++k) {
        const double theta = 2.0 * M_PI * k / samples;
        const Vec2 x = d.center + d.radius * Vec2{std::cos(theta), std::sin(theta)};
        bool feasible = true;
        for (int j = 0; j < static_cast<int>(disks.size()); ++j)
            if (j != circle_index && (x - disks[j].center).norm() < disks[j].radius - 1e-12)
                feasible = false;
        if (!feasible) continue;
        worst = std::max(worst, leftward_potential(disks, x));
    }
    return 2.0 + worst;
}

void write_field(std::ostream& os, const Field& field) {
    os << "# x y value mask\n";
    os.precision(17);
    for (int j = 0; j < field.ny; ++j)
        for (int i = 0; i < field.nx; ++i)
            os << field.x(i) << ' ' << field.y(j) << ' ' << field.at(i, j) << ' '
               << (field.ok(i, j) ? 1 : 0) << '\n';
}

void write_contours(std::ostream& os, std::span<const Polyline> contours) {
    os.precision(17);
    bool first = true;
    for (const auto& line : contours) {
        if (!first) os << '\n';
        first = false;
        for (const Vec2 v : line) os << v.x << ' ' << v.y << '\n';
    }
}

}  // namespace hjlab
