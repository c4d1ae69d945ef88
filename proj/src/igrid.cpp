#include "arcline/igrid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

namespace arcline {

namespace {

constexpr double kPi = 3.14159265358979323846;

double min_x(const Cell& c) { return c.center.x - c.size.x / 2; }
double max_x(const Cell& c) { return c.center.x + c.size.x / 2; }
double min_y(const Cell& c) { return c.center.y - c.size.y / 2; }
double max_y(const Cell& c) { return c.center.y + c.size.y / 2; }

// Circular mean of contour indices over a cycle of length n.
double circular_mean(const std::vector<std::uint32_t>& idx, std::size_t n) {
    double sx = 0.0, sy = 0.0;
    for (std::uint32_t i : idx) {
        const double ang = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
        sx += std::cos(ang);
        sy += std::sin(ang);
    }
    double ang = std::atan2(sy, sx);
    if (ang < 0) ang += 2.0 * kPi;
    double m = ang * static_cast<double>(n) / (2.0 * kPi);
    if (m >= static_cast<double>(n)) m -= static_cast<double>(n);
    // snap near-integer means produced by symmetric index sets
    const double r = std::round(m * 1e9) / 1e9;
    return r;
}

// Signed interiority score of a continuous point: +depth when the pixel
// under it is foreground, -depth when background.
int depth_score(const BinaryImage& img, const std::vector<int>& dist_to_fg,
                const std::vector<int>& dist_to_bg, Vec2 p) {
    const int x = static_cast<int>(std::floor(p.x + 0.5));
    const int y = static_cast<int>(std::floor(p.y + 0.5));
    if (!img.in_bounds(x, y)) return -(1 << 20);
    const std::size_t i = static_cast<std::size_t>(y) * img.width() + x;
    return img.at(x, y) ? dist_to_bg[i] : -dist_to_fg[i];
}

bool segments_intersect(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1) {
    const auto orient = [](Vec2 o, Vec2 p, Vec2 q) { return cross(p - o, q - o); };
    const double tol = 1e-12;
    const double d1 = orient(b0, b1, a0);
    const double d2 = orient(b0, b1, a1);
    const double d3 = orient(a0, a1, b0);
    const double d4 = orient(a0, a1, b1);
    if (((d1 > tol && d2 < -tol) || (d1 < -tol && d2 > tol)) &&
        ((d3 > tol && d4 < -tol) || (d3 < -tol && d4 > tol)))
        return true;
    const auto on_segment = [&](Vec2 p, Vec2 q, Vec2 r) {
        if (std::abs(orient(p, q, r)) > tol) return false;
        return std::min(p.x, q.x) - tol <= r.x && r.x <= std::max(p.x, q.x) + tol &&
               std::min(p.y, q.y) - tol <= r.y && r.y <= std::max(p.y, q.y) + tol;
    };
    return on_segment(b0, b1, a0) || on_segment(b0, b1, a1) || on_segment(a0, a1, b0) ||
           on_segment(a0, a1, b1);
}

bool segment_hits_polygon(const DigitalContour& contour, Vec2 a, Vec2 b) {
    const std::size_t n = contour.points.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 p{static_cast<double>(contour.points[i].x),
                     static_cast<double>(contour.points[i].y)};
        const Vec2 q{static_cast<double>(contour.points[(i + 1) % n].x),
                     static_cast<double>(contour.points[(i + 1) % n].y)};
        if (segments_intersect(a, b, p, q)) return true;
    }
    return false;
}

}  // namespace

bool ve_adjacent(const Cell& r1, const Cell& r2) {
    const double dx = std::abs(r1.center.x - r2.center.x);
    const double dy = std::abs(r1.center.y - r2.center.y);
    const double sx = (r1.size.x + r2.size.x) / 2;
    const double sy = (r1.size.y + r2.size.y) / 2;
    return (dx == sx && dy <= sy) || (dy == sy && dx <= sx);
}

bool e_adjacent(const Cell& r1, const Cell& r2) {
    const double dx = std::abs(r1.center.x - r2.center.x);
    const double dy = std::abs(r1.center.y - r2.center.y);
    const double sx = (r1.size.x + r2.size.x) / 2;
    const double sy = (r1.size.y + r2.size.y) / 2;
    const bool c1 = dx == sx && dy < sy;
    const bool c2 = dy == sy && dx < sx;
    return c1 != c2;
}

std::pair<KCurve, KCurve> build_k_curves(std::span<const Cell> cells) {
    if (cells.size() < 3) throw std::invalid_argument("build_k_curves: fewer than 3 cells");

    KCurve xcurve{AdjacencyKind::ve, {}};
    KCurve ycurve{AdjacencyKind::ve, {}};
    xcurve.order.resize(cells.size());
    ycurve.order.resize(cells.size());
    std::iota(xcurve.order.begin(), xcurve.order.end(), 0);
    std::iota(ycurve.order.begin(), ycurve.order.end(), 0);

    const auto key = [&](std::uint32_t i) {
        const Cell& c = cells[i];
        return std::array<double, 4>{min_x(c), min_y(c), max_x(c), max_y(c)};
    };
    std::sort(xcurve.order.begin(), xcurve.order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return key(a) < key(b);
    });
    const auto tkey = [&](std::uint32_t i) {
        const Cell& c = cells[i];
        return std::array<double, 4>{min_y(c), min_x(c), max_y(c), max_x(c)};
    };
    std::sort(ycurve.order.begin(), ycurve.order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return tkey(a) < tkey(b);
    });
    return {std::move(xcurve), std::move(ycurve)};
}

std::vector<IntervalConstraint> extract_interfaces(const KCurve& curve,
                                                   std::span<const Cell> cells) {
    std::vector<IntervalConstraint> out;
    const std::size_t n = curve.order.size();
    for (std::size_t k = 0; k < n; ++k) {
        const std::uint32_t ia = curve.order[k];
        const std::uint32_t ib = curve.order[(k + 1) % n];
        const Cell& a = cells[ia];
        const Cell& b = cells[ib];
        if (!ve_adjacent(a, b)) continue;  // chain break: no interface

        const double dx = std::abs(a.center.x - b.center.x);
        const double sx = (a.size.x + b.size.x) / 2;

        IntervalConstraint c;
        c.source_a = ia;
        c.source_b = ib;
        c.source_size = std::max(std::max(a.size.x, a.size.y), std::max(b.size.x, b.size.y));
        if (dx == sx) {
            // adjacent along x: vertical interface, endpoints differ along y
            const double x = a.center.x < b.center.x ? max_x(a) : min_x(a);
            const double ylo = std::max(min_y(a), min_y(b));
            const double yhi = std::min(max_y(a), max_y(b));
            c.axis = Axis::y;
            c.internal = {x, ylo};
            c.external = {x, yhi};
            c.degenerate = ylo == yhi;
        } else {
            // adjacent along y: horizontal interface, endpoints differ along x
            const double y = a.center.y < b.center.y ? max_y(a) : min_y(a);
            const double xlo = std::max(min_x(a), min_x(b));
            const double xhi = std::min(max_x(a), max_x(b));
            c.axis = Axis::x;
            c.internal = {xlo, y};
            c.external = {xhi, y};
            c.degenerate = xlo == xhi;
        }
        out.push_back(c);
    }
    return out;
}

ConstraintCycle build_sxy(std::span<const IntervalConstraint> sx,
                          std::span<const IntervalConstraint> sy,
                          std::span<const Cell> cells,
                          const DigitalContour& contour,
                          const BinaryImage* image) {
    std::vector<IntervalConstraint> merged;
    std::map<std::pair<std::uint32_t, std::uint32_t>, bool> seen;
    const auto push_unique = [&](const IntervalConstraint& c) {
        const auto key = std::minmax(c.source_a, c.source_b);
        if (seen.emplace(std::make_pair(key.first, key.second), true).second)
            merged.push_back(c);
    };
    for (const auto& c : sx) push_unique(c);
    for (const auto& c : sy) push_unique(c);

    std::vector<int> dist_to_fg, dist_to_bg;
    if (image) {
        dist_to_fg = chebyshev_distance_to(*image, true);
        dist_to_bg = chebyshev_distance_to(*image, false);
    }

    const auto img_sign = [&](Vec2 p) -> int {
        if (!image) return 0;
        return depth_score(*image, dist_to_fg, dist_to_bg, p) > 0 ? 1 : -1;
    };
    const auto pip_sign = [&](Vec2 p) -> int { return point_in_contour(contour, p) ? 1 : -1; };

    // Decides which side of a constraint is the shape interior by probing
    // beyond each end along the interval axis: the image first, the contour
    // polygon as fallback, each at growing probe distances (endpoints often
    // sit exactly on pixel corners or contour edges). Returns +1 when side 1
    // is interior, -1 when side 2 is, and 0 when both sides agree at every
    // level — the interval does not straddle the boundary at all.
    const auto classify = [&](Vec2 b1, Vec2 d1, Vec2 b2, Vec2 d2) -> int {
        for (const double t : {0.5, 1.0, 1.5}) {
            const int s1 = img_sign(b1 + t * d1);
            const int s2 = img_sign(b2 + t * d2);
            if (s1 != s2) return s1 > s2 ? 1 : -1;
        }
        for (const double t : {0.5, 1.0}) {
            const int s1 = pip_sign(b1 + t * d1);
            const int s2 = pip_sign(b2 + t * d2);
            if (s1 != s2) return s1 > s2 ? 1 : -1;
        }
        return 0;
    };

    // Constraints that do not straddle the traced boundary impose no
    // crossing requirement on the reconstruction and are dropped: the
    // classification must find the two sides distinct AND the (slightly
    // extended) interval must meet the contour polygon. Wholly interior
    // intervals appear where a coarse box layer sits next to the boundary.
    std::vector<IntervalConstraint> kept;
    kept.reserve(merged.size());
    for (IntervalConstraint& c : merged) {
        if (c.degenerate) {
            const Vec2 d = c.axis == Axis::y ? Vec2{0.0, 1.0} : Vec2{1.0, 0.0};
            const int cmp = classify(c.internal, d, c.internal, -1.0 * d);
            if (cmp == 0) continue;
            const Vec2 outward = cmp > 0 ? -1.0 * d : d;
            // corner contacts widen symmetrically to the smaller source cell
            // so the crossing demand matches the scale of the local boxes
            const Cell& ca = cells[c.source_a];
            const Cell& cb = cells[c.source_b];
            const double s =
                0.5 * std::min(std::min(ca.size.x, ca.size.y), std::min(cb.size.x, cb.size.y));
            const Vec2 corner = c.internal;
            c.internal = corner - s * outward;
            c.external = corner + s * outward;
            if (!segment_hits_polygon(contour, c.internal - 0.5 * outward,
                                      c.external + 0.5 * outward))
                continue;
            kept.push_back(c);
            continue;
        }
        Vec2 u = c.external - c.internal;
        const double len = std::max(std::abs(u.x), std::abs(u.y));
        u = (1.0 / len) * u;
        const int cmp = classify(c.internal, -1.0 * u, c.external, u);
        if (cmp == 0) continue;
        if (cmp < 0) std::swap(c.internal, c.external);
        const Vec2 out_dir = (c.external - c.internal);
        const double olen = std::max(std::abs(out_dir.x), std::abs(out_dir.y));
        const Vec2 ou = (1.0 / olen) * out_dir;
        if (!segment_hits_polygon(contour, c.internal - 0.5 * ou, c.external + 0.5 * ou))
            continue;
        kept.push_back(c);
    }
    merged = std::move(kept);
    if (merged.empty()) throw std::runtime_error("build_sxy: no boundary-crossing constraints");

    const std::size_t clen = contour.size();
    for (IntervalConstraint& c : merged) {
        std::vector<std::uint32_t> covered = cells[c.source_a].indices;
        covered.insert(covered.end(), cells[c.source_b].indices.begin(),
                       cells[c.source_b].indices.end());
        if (covered.empty())
            throw std::runtime_error("build_sxy: source cells carry no contour indices");
        c.abscissa = circular_mean(covered, clen);
    }

    std::sort(merged.begin(), merged.end(),
              [](const IntervalConstraint& a, const IntervalConstraint& b) {
                  if (a.abscissa != b.abscissa) return a.abscissa < b.abscissa;
                  const auto ka = std::minmax(a.source_a, a.source_b);
                  const auto kb = std::minmax(b.source_a, b.source_b);
                  return ka < kb;
              });

    ConstraintCycle cycle;
    cycle.constraints = std::move(merged);
    return cycle;
}

std::string sxy_to_json(const ConstraintCycle& cycle) {
    nlohmann::json arr = nlohmann::json::array();
    for (const IntervalConstraint& c : cycle.constraints) {
        nlohmann::json j;
        j["axis"] = c.axis == Axis::x ? "x" : "y";
        j["internal"] = {c.internal.x, c.internal.y};
        j["external"] = {c.external.x, c.external.y};
        j["abscissa"] = c.abscissa;
        arr.push_back(std::move(j));
    }
    return arr.dump(2);
}

}  // namespace arcline
