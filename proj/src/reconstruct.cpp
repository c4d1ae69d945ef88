#include "arcline/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace arcline {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kCrossTol = 1e-9;

double wrap_angle(double a) {
    while (a < 0) a += 2 * kPi;
    while (a >= 2 * kPi) a -= 2 * kPi;
    return a;
}

struct FittedLine {
    Vec2 point;  // centroid
    Vec2 dir;    // unit direction
};

FittedLine fit_line_tls(const std::vector<Vec2>& pts) {
    Vec2 mean{0, 0};
    for (const Vec2& p : pts) mean = mean + p;
    mean = (1.0 / pts.size()) * mean;
    double sxx = 0, sxy = 0, syy = 0;
    for (const Vec2& p : pts) {
        const Vec2 d = p - mean;
        sxx += d.x * d.x;
        sxy += d.x * d.y;
        syy += d.y * d.y;
    }
    // principal eigenvector of [[sxx, sxy], [sxy, syy]]
    const double tr = sxx + syy;
    const double det = sxx * syy - sxy * sxy;
    const double lambda = tr / 2 + std::sqrt(std::max(0.0, tr * tr / 4 - det));
    Vec2 dir;
    if (std::abs(sxy) > 1e-15)
        dir = {lambda - syy, sxy};
    else
        dir = sxx >= syy ? Vec2{1, 0} : Vec2{0, 1};
    const double len = norm(dir);
    if (len < 1e-15) dir = {1, 0};
    else dir = (1.0 / len) * dir;
    return {mean, dir};
}

struct FittedCircle {
    Vec2 center;
    double radius;
    bool ok;
};

// Kasa algebraic fit: least squares on x^2 + y^2 = 2ux + 2vy + w.
FittedCircle fit_circle_kasa(const std::vector<Vec2>& pts) {
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0, sxz = 0, syz = 0, sz = 0;
    const double n = static_cast<double>(pts.size());
    for (const Vec2& p : pts) {
        const double z = p.x * p.x + p.y * p.y;
        sx += p.x;
        sy += p.y;
        sxx += p.x * p.x;
        syy += p.y * p.y;
        sxy += p.x * p.y;
        sxz += p.x * z;
        syz += p.y * z;
        sz += z;
    }
    // normal equations for (2u, 2v, w)
    const double a11 = sxx, a12 = sxy, a13 = sx;
    const double a21 = sxy, a22 = syy, a23 = sy;
    const double a31 = sx, a32 = sy, a33 = n;
    const double b1 = sxz, b2 = syz, b3 = sz;
    const double det = a11 * (a22 * a33 - a23 * a32) - a12 * (a21 * a33 - a23 * a31) +
                       a13 * (a21 * a32 - a22 * a31);
    // scale-aware singularity test: collinear points give a vanishing determinant
    double scale = std::max({std::abs(a11), std::abs(a22), std::abs(a33), 1.0});
    if (std::abs(det) < 1e-9 * scale * scale * scale) return {{0, 0}, 0, false};
    const double d1 = b1 * (a22 * a33 - a23 * a32) - a12 * (b2 * a33 - a23 * b3) +
                      a13 * (b2 * a32 - a22 * b3);
    const double d2 = a11 * (b2 * a33 - a23 * b3) - b1 * (a21 * a33 - a23 * a31) +
                      a13 * (a21 * b3 - b2 * a31);
    const double d3 = a11 * (a22 * b3 - b2 * a32) - a12 * (a21 * b3 - b2 * a31) +
                      b1 * (a21 * a32 - a22 * a31);
    const double uu = d1 / det / 2, vv = d2 / det / 2, w = d3 / det;
    const double r2 = w + uu * uu + vv * vv;
    if (r2 <= 0) return {{0, 0}, 0, false};
    return {{uu, vv}, std::sqrt(r2), true};
}

Vec2 project_on_line(const FittedLine& l, Vec2 p) {
    return l.point + dot(p - l.point, l.dir) * l.dir;
}

Vec2 project_on_circle(const FittedCircle& c, Vec2 p) {
    const Vec2 d = p - c.center;
    const double len = norm(d);
    if (len < 1e-12) return c.center + Vec2{c.radius, 0};
    return c.center + (c.radius / len) * d;
}

// does angle theta lie on the arc from `start` with signed sweep?
bool angle_on_arc(double start, double sweep, double theta, double tol) {
    const double span = std::abs(sweep);
    const double delta =
        sweep >= 0 ? wrap_angle(theta - start) : wrap_angle(start - theta);
    return delta <= span + tol || delta >= 2 * kPi - tol;
}

bool segment_hits_segment(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1) {
    const auto orient = [](Vec2 o, Vec2 p, Vec2 q) { return cross(p - o, q - o); };
    const double d1 = orient(b0, b1, a0);
    const double d2 = orient(b0, b1, a1);
    const double d3 = orient(a0, a1, b0);
    const double d4 = orient(a0, a1, b1);
    const double tol = kCrossTol * (1 + norm(a1 - a0)) * (1 + norm(b1 - b0));
    if (((d1 > tol && d2 < -tol) || (d1 < -tol && d2 > tol)) &&
        ((d3 > tol && d4 < -tol) || (d3 < -tol && d4 > tol)))
        return true;
    // touching / collinear cases
    const auto on_segment = [&](Vec2 p, Vec2 q, Vec2 r) {
        if (std::abs(orient(p, q, r)) > tol) return false;
        return std::min(p.x, q.x) - 1e-9 <= r.x && r.x <= std::max(p.x, q.x) + 1e-9 &&
               std::min(p.y, q.y) - 1e-9 <= r.y && r.y <= std::max(p.y, q.y) + 1e-9;
    };
    return on_segment(b0, b1, a0) || on_segment(b0, b1, a1) || on_segment(a0, a1, b0) ||
           on_segment(a0, a1, b1);
}

bool arc_hits_segment(const GeomPrimitive& arc, Vec2 s0, Vec2 s1) {
    const Vec2 d = s1 - s0;
    const Vec2 f = s0 - arc.center;
    const double a = dot(d, d);
    const double b = 2 * dot(f, d);
    const double c = dot(f, f) - arc.radius * arc.radius;
    if (a < 1e-18) {  // degenerate interval: point-on-arc test
        if (std::abs(norm(f) - arc.radius) > 1e-6) return false;
        return angle_on_arc(arc.start_angle, arc.sweep,
                            std::atan2(f.y, f.x), 1e-6);
    }
    const double disc = b * b - 4 * a * c;
    if (disc < 0) return false;
    const double sq = std::sqrt(disc);
    for (const double t : {(-b - sq) / (2 * a), (-b + sq) / (2 * a)}) {
        if (t < -1e-9 || t > 1 + 1e-9) continue;
        const Vec2 hit = s0 + t * d;
        const Vec2 rel = hit - arc.center;
        if (angle_on_arc(arc.start_angle, arc.sweep, std::atan2(rel.y, rel.x), 1e-9))
            return true;
    }
    return false;
}

bool primitive_hits_interval(const GeomPrimitive& p, const IntervalConstraint& c) {
    if (p.kind == PrimitiveKind::segment)
        return segment_hits_segment(p.p0, p.p1, c.internal, c.external);
    return arc_hits_segment(p, c.internal, c.external);
}

}  // namespace

Reconstruction realize(const PrimitiveCycle& cycle, const ConstraintCycle& constraints,
                       PrimitiveKind kind) {
    const std::size_t len = cycle.length();
    const std::size_t n = constraints.n();
    if (len == 0 || n == 0) throw std::invalid_argument("realize: empty cycle or constraints");
    if (cycle.breakpoints.size() != len)
        throw std::invalid_argument("realize: breakpoint count mismatch");

    // span of primitive k: breakpoints[k-1] .. breakpoints[k] (cyclic,
    // inclusive); a single chosen primitive spans the whole cycle
    std::vector<std::vector<std::uint32_t>> span_indices(len);
    for (std::size_t k = 0; k < len; ++k) {
        const std::uint32_t from = cycle.breakpoints[(k + len - 1) % len];
        const std::uint32_t to = cycle.breakpoints[k];
        std::size_t count;
        if (len == 1)
            count = n;
        else
            count = (to + n - from) % n + 1;
        if (count < 2) throw std::runtime_error("realize: fewer than 2 midpoints in a span");
        for (std::size_t t = 0; t < count; ++t)
            span_indices[k].push_back(static_cast<std::uint32_t>((from + t) % n));
    }

    const auto midpoint = [&](std::uint32_t idx) {
        const IntervalConstraint& c = constraints.constraints[idx];
        return 0.5 * (c.internal + c.external);
    };

    struct SpanFit {
        bool is_arc = false;
        FittedLine line;
        FittedCircle circle{};
        bool degenerate = false;
        std::vector<Vec2> mids;
    };
    std::vector<SpanFit> fits(len);
    for (std::size_t k = 0; k < len; ++k) {
        SpanFit& f = fits[k];
        for (const std::uint32_t idx : span_indices[k]) f.mids.push_back(midpoint(idx));
        if (kind == PrimitiveKind::arc) {
            f.circle = fit_circle_kasa(f.mids);
            if (f.circle.ok) {
                f.is_arc = true;
            } else {
                f.is_arc = false;
                f.degenerate = true;  // collinear midpoints: realized as a segment
                f.line = fit_line_tls(f.mids);
            }
        } else {
            f.line = fit_line_tls(f.mids);
        }
    }

    // junction j sits between primitive j-1 and primitive j, at the shared
    // breakpoint constraint's midpoint projected onto both fits and averaged
    Reconstruction rec;
    rec.junctions.resize(len);
    rec.junction_gaps.resize(len);
    rec.junction_tolerances.resize(len);
    for (std::size_t k = 0; k < len; ++k) {
        const std::size_t prev = (k + len - 1) % len;
        const Vec2 m = midpoint(cycle.breakpoints[prev]);
        const auto project = [&](const SpanFit& f) {
            return f.is_arc ? project_on_circle(f.circle, m) : project_on_line(f.line, m);
        };
        const Vec2 pa = project(fits[prev]);
        const Vec2 pb = project(fits[k]);
        rec.junctions[k] = 0.5 * (pa + pb);
        rec.junction_gaps[k] = dist(pa, pb);
        double max_cell = 0.0;
        for (const std::uint32_t idx : span_indices[prev])
            max_cell = std::max(max_cell, constraints.constraints[idx].source_size);
        for (const std::uint32_t idx : span_indices[k])
            max_cell = std::max(max_cell, constraints.constraints[idx].source_size);
        rec.junction_tolerances[k] = 2.0 * max_cell;
    }

    rec.primitives.resize(len);
    for (std::size_t k = 0; k < len; ++k) {
        const SpanFit& f = fits[k];
        GeomPrimitive& p = rec.primitives[k];
        const Vec2 a = rec.junctions[k];
        const Vec2 b = rec.junctions[(k + 1) % len];
        if (!f.is_arc) {
            p.kind = PrimitiveKind::segment;
            p.degenerate_line_arc = f.degenerate;
            if (len == 1) {
                // a single line span cannot close a loop: clip the fitted
                // line to the extent of the span midpoints
                double tmin = 1e300, tmax = -1e300;
                for (const Vec2& m : f.mids) {
                    const double t = dot(m - f.line.point, f.line.dir);
                    tmin = std::min(tmin, t);
                    tmax = std::max(tmax, t);
                }
                p.p0 = f.line.point + tmin * f.line.dir;
                p.p1 = f.line.point + tmax * f.line.dir;
                rec.junctions[k] = p.p0;
                rec.junction_gaps[k] = 0.0;
            } else {
                p.p0 = a;
                p.p1 = b;
            }
            if (dist(p.p0, p.p1) < 1e-12)
                throw std::runtime_error("realize: degenerate segment endpoints");
            continue;
        }
        p.kind = PrimitiveKind::arc;
        p.center = f.circle.center;
        p.radius = f.circle.radius;
        const Vec2 sa = project_on_circle(f.circle, a) - f.circle.center;
        const Vec2 sb = project_on_circle(f.circle, b) - f.circle.center;
        p.start_angle = std::atan2(sa.y, sa.x);
        const double end_angle = std::atan2(sb.y, sb.x);

        // traversal direction that visits the span midpoints in order
        double drift = 0.0;
        for (std::size_t t = 0; t + 1 < f.mids.size(); ++t) {
            const Vec2 u = f.mids[t] - f.circle.center;
            const Vec2 v = f.mids[t + 1] - f.circle.center;
            double dth = std::atan2(v.y, v.x) - std::atan2(u.y, u.x);
            while (dth > kPi) dth -= 2 * kPi;
            while (dth < -kPi) dth += 2 * kPi;
            drift += dth;
        }
        const bool ccw = drift >= 0;
        double sweep;
        if (len == 1) {
            sweep = ccw ? 2 * kPi : -2 * kPi;  // full circle
        } else {
            sweep = ccw ? wrap_angle(end_angle - p.start_angle)
                        : -wrap_angle(p.start_angle - end_angle);
            if (sweep == 0.0) sweep = ccw ? 2 * kPi : -2 * kPi;
        }
        p.sweep = sweep;
        p.p0 = a;
        p.p1 = b;
    }

    // intervals the final chain fails to cross
    std::vector<char> crossed(n, 0);
    for (std::size_t k = 0; k < len; ++k)
        for (const std::uint32_t idx : span_indices[k])
            if (!crossed[idx] &&
                primitive_hits_interval(rec.primitives[k], constraints.constraints[idx]))
                crossed[idx] = 1;
    for (std::uint32_t idx = 0; idx < n; ++idx)
        if (!crossed[idx]) rec.missed_constraints.push_back(idx);
    return rec;
}

// ---------------------------------------------------------------------------
// exports

namespace {

void svg_path_for(const GeomPrimitive& p, std::ostream& os) {
    if (p.kind == PrimitiveKind::segment) {
        os << "M " << p.p0.x << " " << p.p0.y << " L " << p.p1.x << " " << p.p1.y;
        return;
    }
    // arcs with |sweep| > pi are split in two so the flags stay unambiguous
    const int pieces = std::abs(p.sweep) > kPi ? 2 : 1;
    const double step = p.sweep / pieces;
    double ang = p.start_angle;
    Vec2 cur{p.center.x + p.radius * std::cos(ang), p.center.y + p.radius * std::sin(ang)};
    os << "M " << cur.x << " " << cur.y;
    for (int k = 0; k < pieces; ++k) {
        ang += step;
        const Vec2 nxt{p.center.x + p.radius * std::cos(ang),
                       p.center.y + p.radius * std::sin(ang)};
        os << " A " << p.radius << " " << p.radius << " 0 0 " << (step >= 0 ? 1 : 0) << " "
           << nxt.x << " " << nxt.y;
    }
}

}  // namespace

void export_svg(const Reconstruction& rec, const std::string& path,
                const SvgOverlays* overlays) {
    if (rec.primitives.empty()) throw std::runtime_error("export_svg: empty reconstruction");

    double xmin = 1e300, ymin = 1e300, xmax = -1e300, ymax = -1e300;
    const auto grow = [&](Vec2 p, double pad) {
        xmin = std::min(xmin, p.x - pad);
        ymin = std::min(ymin, p.y - pad);
        xmax = std::max(xmax, p.x + pad);
        ymax = std::max(ymax, p.y + pad);
    };
    for (const GeomPrimitive& p : rec.primitives) {
        if (p.kind == PrimitiveKind::arc)
            grow(p.center, p.radius);
        else {
            grow(p.p0, 0);
            grow(p.p1, 0);
        }
    }
    if (overlays && overlays->boxes)
        for (const Cell& c : *overlays->boxes)
            grow(c.center, std::max(c.size.x, c.size.y));
    const double pad = 2.0;
    xmin -= pad;
    ymin -= pad;
    xmax += pad;
    ymax += pad;

    std::ostringstream os;
    os.precision(10);
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << xmin << " " << ymin << " "
       << (xmax - xmin) << " " << (ymax - ymin) << "\">\n";

    if (overlays && overlays->boxes) {
        os << "<g id=\"boxes\" fill=\"none\" stroke=\"#bbbbbb\" stroke-width=\"0.15\">\n";
        for (const Cell& c : *overlays->boxes)
            os << "  <rect x=\"" << c.center.x - c.size.x / 2 << "\" y=\""
               << c.center.y - c.size.y / 2 << "\" width=\"" << c.size.x << "\" height=\""
               << c.size.y << "\"/>\n";
        os << "</g>\n";
    }
    if (overlays && overlays->intervals) {
        os << "<g id=\"intervals\" stroke=\"#cc4444\" stroke-width=\"0.2\">\n";
        for (const IntervalConstraint& c : overlays->intervals->constraints) {
            os << "  <line x1=\"" << c.internal.x << "\" y1=\"" << c.internal.y << "\" x2=\""
               << c.external.x << "\" y2=\"" << c.external.y << "\"/>\n";
            os << "  <circle cx=\"" << c.external.x << "\" cy=\"" << c.external.y
               << "\" r=\"0.25\" fill=\"#000000\"/>\n";
        }
        os << "</g>\n";
    }
    if (overlays && overlays->maximal) {
        os << "<g id=\"maximal\" fill=\"none\" stroke-width=\"0.3\">\n";
        int hue = 0;
        for (const MaximalPrimitive& p : *overlays->maximal) {
            os << "  <g stroke=\"hsl(" << (hue % 360) << ",80%,45%)\">";
            if (std::holds_alternative<CircleWitness>(p.witness)) {
                const CircleWitness& cw = std::get<CircleWitness>(p.witness);
                if (!cw.degenerate_line)
                    os << "<circle cx=\"" << cw.center.x << "\" cy=\"" << cw.center.y
                       << "\" r=\"" << cw.radius << "\"/>";
            }
            os << "</g>\n";
            hue += 61;
        }
        os << "</g>\n";
    }

    os << "<g id=\"reconstruction\" fill=\"none\" stroke=\"#000000\" stroke-width=\"0.5\">\n";
    for (const GeomPrimitive& p : rec.primitives) {
        os << "  <path d=\"";
        svg_path_for(p, os);
        os << "\"/>\n";
    }
    os << "</g>\n</svg>\n";

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("export_svg: cannot open '" + path + "'");
    out << os.str();
    if (!out) throw std::runtime_error("export_svg: write failure on '" + path + "'");
}

std::string reconstruction_to_json(const Reconstruction& rec) {
    nlohmann::json j;
    j["junctions"] = nlohmann::json::array();
    for (const Vec2& p : rec.junctions) j["junctions"].push_back({p.x, p.y});
    j["missed"] = rec.missed_constraints;
    j["primitives"] = nlohmann::json::array();
    for (const GeomPrimitive& p : rec.primitives) {
        nlohmann::json pj;
        if (p.kind == PrimitiveKind::segment) {
            pj["kind"] = "segment";
            pj["p0"] = {p.p0.x, p.p0.y};
            pj["p1"] = {p.p1.x, p.p1.y};
            if (p.degenerate_line_arc) pj["degenerate_line_arc"] = true;
        } else {
            pj["kind"] = "arc";
            pj["center"] = {p.center.x, p.center.y};
            pj["radius"] = p.radius;
            pj["start_angle"] = p.start_angle;
            pj["sweep"] = p.sweep;
            pj["p0"] = {p.p0.x, p.p0.y};
            pj["p1"] = {p.p1.x, p.p1.y};
        }
        j["primitives"].push_back(std::move(pj));
    }
    return j.dump(2);
}

void export_json(const Reconstruction& rec, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("export_json: cannot open '" + path + "'");
    out << reconstruction_to_json(rec) << "\n";
    if (!out) throw std::runtime_error("export_json: write failure on '" + path + "'");
}

namespace {

Vec2 vec2_from_json(const nlohmann::json& j, const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw std::runtime_error(std::string("reconstruction_from_json: bad ") + what);
    return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

Reconstruction reconstruction_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("reconstruction_from_json: parse error: ") +
                                 e.what());
    }
    if (!j.is_object() || !j.contains("primitives") || !j.contains("junctions") ||
        !j.contains("missed"))
        throw std::runtime_error("reconstruction_from_json: missing required keys");
    if (!j["primitives"].is_array() || !j["junctions"].is_array() || !j["missed"].is_array())
        throw std::runtime_error("reconstruction_from_json: wrong key types");

    Reconstruction rec;
    for (const auto& pj : j["junctions"]) rec.junctions.push_back(vec2_from_json(pj, "junction"));
    for (const auto& mj : j["missed"]) {
        if (!mj.is_number_unsigned())
            throw std::runtime_error("reconstruction_from_json: bad missed index");
        rec.missed_constraints.push_back(mj.get<std::uint32_t>());
    }
    for (const auto& pj : j["primitives"]) {
        if (!pj.is_object() || !pj.contains("kind"))
            throw std::runtime_error("reconstruction_from_json: bad primitive");
        GeomPrimitive p;
        const std::string kind = pj["kind"].get<std::string>();
        if (kind == "segment") {
            p.kind = PrimitiveKind::segment;
            p.p0 = vec2_from_json(pj.at("p0"), "p0");
            p.p1 = vec2_from_json(pj.at("p1"), "p1");
            p.degenerate_line_arc = pj.value("degenerate_line_arc", false);
        } else if (kind == "arc") {
            p.kind = PrimitiveKind::arc;
            p.center = vec2_from_json(pj.at("center"), "center");
            p.radius = pj.at("radius").get<double>();
            p.start_angle = pj.at("start_angle").get<double>();
            p.sweep = pj.at("sweep").get<double>();
            p.p0 = vec2_from_json(pj.at("p0"), "p0");
            p.p1 = vec2_from_json(pj.at("p1"), "p1");
        } else {
            throw std::runtime_error("reconstruction_from_json: unknown primitive kind");
        }
        rec.primitives.push_back(p);
    }
    if (rec.primitives.size() != rec.junctions.size())
        throw std::runtime_error("reconstruction_from_json: |junctions| != |primitives|");
    return rec;
}

Reconstruction load_reconstruction_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_reconstruction_json: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return reconstruction_from_json(ss.str());
}

}  // namespace arcline
