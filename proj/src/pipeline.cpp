#include "arcline/pipeline.hpp"

#include <stdexcept>
#include <string>

namespace arcline {

namespace {

template <typename F>
auto stage(const char* name, F&& f) {
    try {
        return f();
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string(name) + ": " + e.what());
    }
}

bool pair_feasible(const ConstraintCycle& cycle, std::size_t a, std::size_t b,
                   PrimitiveKind kind) {
    const std::vector<IntervalConstraint> slice = {cycle.constraints[a % cycle.n()],
                                                   cycle.constraints[b % cycle.n()]};
    if (kind == PrimitiveKind::segment) return line_feasible(slice).has_value();
    return circle_feasible(slice).has_value();
}

double interval_length(const IntervalConstraint& c) { return dist(c.internal, c.external); }

// Consecutive maximal spans that touch without overlapping leave the arc
// graph with no valid cycle: the boundary pair of constraints cannot be
// pierced together by any primitive. Such conflicts come from pixel-scale
// artifacts the meaningful boxes did not absorb. The less consistent
// constraint of each offending pair is dropped and the cover recomputed.
std::vector<MaximalPrimitive> maximal_primitives_repaired(ConstraintCycle& cycle,
                                                          PrimitiveKind kind) {
    for (int round = 0;; ++round) {
        if (cycle.n() < 3)
            throw std::runtime_error("constraint conflicts left fewer than 3 constraints");
        std::vector<MaximalPrimitive> prims = maximal_primitives(cycle, kind);
        const std::size_t n = cycle.n();
        const std::size_t m = prims.size();
        std::vector<std::size_t> drops;
        for (std::size_t k = 0; k < m && m > 1; ++k) {
            const MaximalPrimitive& cur = prims[k];
            const MaximalPrimitive& nxt = prims[(k + 1) % m];
            const std::size_t reach = (cur.j + n - cur.i) % n;
            const std::size_t off_next = (nxt.i + n - cur.i) % n;
            if (off_next <= reach) continue;  // overlapping neighbours
            const std::size_t a = cur.j;
            const std::size_t b = nxt.i;  // == a + 1 (mod n)
            const bool drop_a_ok = pair_feasible(cycle, (a + n - 1) % n, b, kind);
            const bool drop_b_ok = pair_feasible(cycle, a, (b + 1) % n, kind);
            std::size_t victim;
            if (drop_a_ok != drop_b_ok) {
                victim = drop_a_ok ? a : b;
            } else {
                const double la = interval_length(cycle.constraints[a]);
                const double lb = interval_length(cycle.constraints[b]);
                victim = la < lb ? a : (lb < la ? b : b);
            }
            drops.push_back(victim);
        }
        if (drops.empty()) return prims;
        if (round > 64) throw std::runtime_error("constraint conflicts did not settle");
        std::sort(drops.begin(), drops.end());
        drops.erase(std::unique(drops.begin(), drops.end()), drops.end());
        for (auto it = drops.rbegin(); it != drops.rend(); ++it)
            cycle.constraints.erase(cycle.constraints.begin() + static_cast<long>(*it));
    }
}

}  // namespace

PipelineResult run_pipeline(const BinaryImage& img, const DigitalContour& contour,
                            const PipelineOptions& options) {
    PipelineResult r;
    r.boxes = stage("mscale", [&] { return meaningful_boxes(contour, options.max_scale); });
    r.sxy = stage("igrid", [&] {
        const auto curves = build_k_curves(r.boxes);
        const auto sx = extract_interfaces(curves.first, r.boxes);
        const auto sy = extract_interfaces(curves.second, r.boxes);
        return build_sxy(sx, sy, r.boxes, contour, &img);
    });
    r.primitives = stage("glp", [&] { return maximal_primitives_repaired(r.sxy, options.kind); });
    r.cycle = stage("mindss", [&] {
        r.graph = arc_graph_from_primitives(r.primitives, r.sxy.n());
        return min_cycle(r.graph);
    });
    r.reconstruction =
        stage("reconstruct", [&] { return realize(r.cycle, r.sxy, options.kind); });
    return r;
}

}  // namespace arcline
