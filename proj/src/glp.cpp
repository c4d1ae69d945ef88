#include "arcline/glp.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

namespace arcline {

namespace {

constexpr int kMaxDim = 4;
constexpr double kTinyCoef = 1e-13;

struct Row {
    std::array<double, kMaxDim> a{};
    double b = 0.0;
};

// ---------------------------------------------------------------------------
// Seidel's randomized incremental LP: maximize obj.x subject to rows a.x <= b
// and |x_i| <= box_i, dimension d <= 4. Constraints are processed in a
// shuffled order; a violated constraint pins the optimum to its boundary and
// the problem recurses with that variable eliminated.

bool seidel_solve(int d, std::span<const Row> rows, const std::array<double, kMaxDim>& obj,
                  const std::array<double, kMaxDim>& box, SplitMix64& rng,
                  std::array<double, kMaxDim>& x_out) {
    if (d == 1) {
        double lo = -box[0], hi = box[0];
        for (const Row& r : rows) {
            const double a = r.a[0];
            if (std::abs(a) < kTinyCoef) {
                if (r.b < -1e-9 * std::max(1.0, std::abs(r.b))) return false;
                continue;
            }
            const double v = r.b / a;
            if (a > 0)
                hi = std::min(hi, v);
            else
                lo = std::max(lo, v);
        }
        if (lo > hi + 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)})) return false;
        x_out[0] = obj[0] >= 0 ? hi : lo;
        return true;
    }

    std::array<double, kMaxDim> x{};
    for (int i = 0; i < d; ++i) x[i] = obj[i] >= 0 ? box[i] : -box[i];

    std::vector<std::uint32_t> order(rows.size());
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[rng.below(i)]);

    for (std::size_t t = 0; t < order.size(); ++t) {
        const Row& rk = rows[order[t]];
        double lhs = 0.0;
        for (int i = 0; i < d; ++i) lhs += rk.a[i] * x[i];
        const double scale = std::max({1.0, std::abs(lhs), std::abs(rk.b)});
        if (lhs <= rk.b + 1e-11 * scale) continue;

        int piv = 0;
        for (int i = 1; i < d; ++i)
            if (std::abs(rk.a[i]) > std::abs(rk.a[piv])) piv = i;
        if (std::abs(rk.a[piv]) < kTinyCoef) return false;

        const double inv = 1.0 / rk.a[piv];
        const auto substitute = [&](const Row& r) {
            Row s;
            const double f = r.a[piv] * inv;
            int w = 0;
            for (int i = 0; i < d; ++i) {
                if (i == piv) continue;
                s.a[w++] = r.a[i] - f * rk.a[i];
            }
            s.b = r.b - f * rk.b;
            return s;
        };
        std::vector<Row> sub;
        sub.reserve(t + 2);
        for (std::size_t u = 0; u < t; ++u) sub.push_back(substitute(rows[order[u]]));
        {
            Row bp;
            bp.a[piv] = 1.0;
            bp.b = box[piv];
            sub.push_back(substitute(bp));
            Row bm;
            bm.a[piv] = -1.0;
            bm.b = box[piv];
            sub.push_back(substitute(bm));
        }

        std::array<double, kMaxDim> sobj{}, sbox{};
        {
            const double fo = obj[piv] * inv;
            int w = 0;
            for (int i = 0; i < d; ++i) {
                if (i == piv) continue;
                sobj[w] = obj[i] - fo * rk.a[i];
                sbox[w] = box[i];
                ++w;
            }
        }
        std::array<double, kMaxDim> sx{};
        if (!seidel_solve(d - 1, sub, sobj, sbox, rng, sx)) return false;
        double acc = rk.b;
        int w = 0;
        for (int i = 0; i < d; ++i) {
            if (i == piv) continue;
            x[i] = sx[w++];
            acc -= rk.a[i] * x[i];
        }
        x[piv] = acc * inv;
    }
    x_out = x;
    return true;
}

std::uint64_t content_seed(std::span<const IntervalConstraint> slice) {
    std::uint64_t h = 0x243f6a8885a308d3ull ^ slice.size();
    const auto mix_double = [&](double v) {
        h = mix64(h ^ std::bit_cast<std::uint64_t>(v));
    };
    for (const IntervalConstraint& c : slice) {
        mix_double(c.internal.x);
        mix_double(c.internal.y);
        mix_double(c.external.x);
        mix_double(c.external.y);
    }
    return h;
}

double max_abs_coord(std::span<const IntervalConstraint> slice) {
    double m = 1.0;
    for (const IntervalConstraint& c : slice) {
        m = std::max({m, std::abs(c.internal.x), std::abs(c.internal.y),
                      std::abs(c.external.x), std::abs(c.external.y)});
    }
    return m;
}

// max-margin separating line LP over (a, b, c, t)
std::optional<LineWitness> solve_line(std::span<const IntervalConstraint> slice,
                                      std::uint64_t seed) {
    std::vector<Row> rows;
    rows.reserve(2 * slice.size());
    for (const IntervalConstraint& p : slice) {
        Row rin;  // a*px + b*py - c + t <= 0
        rin.a = {p.internal.x, p.internal.y, -1.0, 1.0};
        rin.b = 0.0;
        rows.push_back(rin);
        Row rex;  // -(a*qx + b*qy) + c + t <= 0
        rex.a = {-p.external.x, -p.external.y, 1.0, 1.0};
        rex.b = 0.0;
        rows.push_back(rex);
    }
    const double m = max_abs_coord(slice);
    const std::array<double, kMaxDim> box{1.0, 1.0, 2.0 * (m + 1.0), 1.0};
    const std::array<double, kMaxDim> obj{0.0, 0.0, 0.0, 1.0};

    for (int attempt = 0; attempt < 3; ++attempt) {
        SplitMix64 rng(mix64(seed + 0x51ull * attempt));
        std::array<double, kMaxDim> x{};
        if (!seidel_solve(kMaxDim, rows, obj, box, rng, x)) continue;
        if (x[3] <= kFeasibilityEps) continue;
        const double len = std::hypot(x[0], x[1]);
        if (len < kTinyCoef) continue;
        LineWitness w{x[0] / len, x[1] / len, x[2] / len};
        if (validate_line_witness(w, slice)) return w;
    }
    return std::nullopt;
}

// max-margin separating lifted plane z = a*x + b*y + w over (a, b, w, t)
std::optional<CircleWitness> solve_circle(std::span<const IntervalConstraint> slice,
                                          CircleOrientation orientation, std::uint64_t seed) {
    const bool inside = orientation == CircleOrientation::internal_inside;
    std::vector<Row> rows;
    rows.reserve(2 * slice.size());
    const auto push = [&](Vec2 p, bool below) {
        const double z = p.x * p.x + p.y * p.y;
        Row r;
        if (below) {  // z - a*x - b*y - w + t <= 0
            r.a = {-p.x, -p.y, -1.0, 1.0};
            r.b = -z;
        } else {  // a*x + b*y + w - z + t <= 0
            r.a = {p.x, p.y, 1.0, 1.0};
            r.b = z;
        }
        rows.push_back(r);
    };
    for (const IntervalConstraint& c : slice) {
        push(c.internal, inside);
        push(c.external, !inside);
    }
    const double m = max_abs_coord(slice);
    const std::array<double, kMaxDim> box{64.0 * (m + 1.0), 64.0 * (m + 1.0),
                                          256.0 * (m + 1.0) * (m + 1.0), 1.0};
    const std::array<double, kMaxDim> obj{0.0, 0.0, 0.0, 1.0};

    for (int attempt = 0; attempt < 3; ++attempt) {
        SplitMix64 rng(mix64(seed + 0x9dull * attempt));
        std::array<double, kMaxDim> x{};
        if (!seidel_solve(kMaxDim, rows, obj, box, rng, x)) continue;
        if (x[3] <= kFeasibilityEps) continue;
        const double r2 = x[2] + (x[0] * x[0] + x[1] * x[1]) / 4.0;
        if (r2 <= 0.0) continue;
        CircleWitness w;
        w.center = {x[0] / 2.0, x[1] / 2.0};
        w.radius = std::sqrt(r2);
        w.orientation = orientation;
        if (validate_circle_witness(w, slice)) return w;
    }
    return std::nullopt;
}

}  // namespace

std::optional<LineWitness> line_feasible(std::span<const IntervalConstraint> slice,
                                         std::uint64_t seed) {
    if (slice.empty()) throw std::invalid_argument("line_feasible: empty slice");
    if (seed == 0) seed = content_seed(slice);
    return solve_line(slice, seed);
}

std::optional<CircleWitness> circle_feasible(std::span<const IntervalConstraint> slice,
                                             std::uint64_t seed) {
    if (slice.empty()) throw std::invalid_argument("circle_feasible: empty slice");
    if (seed == 0) seed = content_seed(slice);
    if (auto w = solve_circle(slice, CircleOrientation::internal_inside, seed)) return w;
    if (auto w = solve_circle(slice, CircleOrientation::internal_outside, mix64(seed)))
        return w;
    if (auto lw = line_feasible(slice, mix64(seed ^ 0xc1ull))) {
        CircleWitness w;
        w.degenerate_line = true;
        w.line = *lw;
        w.radius = std::numeric_limits<double>::infinity();
        return w;
    }
    return std::nullopt;
}

bool validate_line_witness(const LineWitness& w, std::span<const IntervalConstraint> slice,
                           double eps) {
    for (const IntervalConstraint& c : slice) {
        if (w.a * c.internal.x + w.b * c.internal.y > w.c + eps) return false;
        if (!(w.a * c.external.x + w.b * c.external.y > w.c - eps)) return false;
    }
    return true;
}

bool validate_circle_witness(const CircleWitness& w, std::span<const IntervalConstraint> slice,
                             double eps) {
    if (w.degenerate_line) return validate_line_witness(w.line, slice, eps);
    const bool inside = w.orientation == CircleOrientation::internal_inside;
    for (const IntervalConstraint& c : slice) {
        const double di = dist(c.internal, w.center);
        const double de = dist(c.external, w.center);
        if (inside) {
            if (di > w.radius + eps) return false;
            if (!(de > w.radius - eps)) return false;
        } else {
            if (di < w.radius - eps) return false;
            if (!(de < w.radius + eps)) return false;
        }
    }
    return true;
}

std::vector<IntervalConstraint> cyclic_slice(const ConstraintCycle& cycle, std::size_t start,
                                             std::size_t len) {
    const std::size_t n = cycle.n();
    std::vector<IntervalConstraint> out;
    out.reserve(len);
    for (std::size_t t = 0; t < len; ++t) out.push_back(cycle.constraints[(start + t) % n]);
    return out;
}

std::vector<MaximalPrimitive> maximal_primitives(const ConstraintCycle& cycle,
                                                 PrimitiveKind kind) {
    const std::size_t n = cycle.n();
    if (n < 3) throw std::invalid_argument("maximal_primitives: fewer than 3 constraints");

    const auto feasible = [&](std::size_t start, std::size_t len,
                              MaximalPrimitive* prim) -> bool {
        const std::vector<IntervalConstraint> slice = cyclic_slice(cycle, start, len);
        const std::uint64_t seed = mix64(start * 0x100000001b3ull + len);
        if (kind == PrimitiveKind::segment) {
            const auto w = line_feasible(slice, seed);
            if (!w) return false;
            if (prim) prim->witness = *w;
            return true;
        }
        const auto w = circle_feasible(slice, seed);
        if (!w) return false;
        if (prim) prim->witness = *w;
        return true;
    };

    struct Span {
        std::size_t start, len;
    };
    std::vector<Span> spans;
    std::size_t len = 1;
    for (std::size_t i = 0; i < n; ++i) {
        while (len < n && feasible(i, len + 1, nullptr)) ++len;
        if (len == n) {
            MaximalPrimitive p;
            p.kind = kind;
            p.i = 0;
            p.j = static_cast<std::uint32_t>(n - 1);
            feasible(0, n, &p);
            return {p};
        }
        spans.push_back({i, len});
        if (len > 1) --len;
    }

    const auto contains = [&](const Span& big, const Span& small) {
        if (big.len < small.len) return false;
        const std::size_t off = (small.start + n - big.start) % n;
        return off + small.len <= big.len;
    };
    std::vector<MaximalPrimitive> out;
    for (std::size_t i = 0; i < spans.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < spans.size() && !dominated; ++j) {
            if (i != j && contains(spans[j], spans[i]) &&
                !(spans[i].start == spans[j].start && spans[i].len == spans[j].len))
                dominated = true;
        }
        if (dominated) continue;
        MaximalPrimitive p;
        p.kind = kind;
        p.i = static_cast<std::uint32_t>(spans[i].start);
        p.j = static_cast<std::uint32_t>((spans[i].start + spans[i].len - 1) % n);
        if (!feasible(spans[i].start, spans[i].len, &p))
            throw std::logic_error("maximal_primitives: recorded span lost feasibility");
        out.push_back(std::move(p));
    }
    std::sort(out.begin(), out.end(),
              [](const MaximalPrimitive& a, const MaximalPrimitive& b) { return a.i < b.i; });
    return out;
}

std::string primitives_to_json(const std::vector<MaximalPrimitive>& prims) {
    nlohmann::json arr = nlohmann::json::array();
    for (const MaximalPrimitive& p : prims) {
        nlohmann::json j;
        j["kind"] = p.kind == PrimitiveKind::segment ? "segment" : "arc";
        j["i"] = p.i;
        j["j"] = p.j;
        nlohmann::json w;
        if (std::holds_alternative<LineWitness>(p.witness)) {
            const LineWitness& lw = std::get<LineWitness>(p.witness);
            w["type"] = "line";
            w["a"] = lw.a;
            w["b"] = lw.b;
            w["c"] = lw.c;
        } else {
            const CircleWitness& cw = std::get<CircleWitness>(p.witness);
            if (cw.degenerate_line) {
                w["type"] = "line";
                w["degenerate_line"] = true;
                w["a"] = cw.line.a;
                w["b"] = cw.line.b;
                w["c"] = cw.line.c;
            } else {
                w["type"] = "circle";
                w["cx"] = cw.center.x;
                w["cy"] = cw.center.y;
                w["r"] = cw.radius;
                w["orientation"] =
                    cw.orientation == CircleOrientation::internal_inside ? "inside" : "outside";
            }
        }
        j["witness"] = std::move(w);
        arr.push_back(std::move(j));
    }
    return arr.dump(2);
}

}  // namespace arcline
