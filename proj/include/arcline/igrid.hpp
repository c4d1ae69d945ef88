#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "arcline/mscale.hpp"
#include "arcline/raster.hpp"

namespace arcline {

enum class AdjacencyKind { ve, e };

/// Ordered chain of cells for one axis ordering; `order` holds indices into
/// the cell list the chain was built from.
struct KCurve {
    AdjacencyKind kind = AdjacencyKind::ve;
    std::vector<std::uint32_t> order;
};

/// Axis along which the two endpoints of a constraint differ.
enum class Axis { x, y };

/// 1-D interval constraint of the cyclic list S_XY: an axis-aligned segment
/// on the common boundary of two cells, with one endpoint inside the shape
/// (internal, P-circle) and one outside (external, P-bullet). Before
/// build_sxy classifies them the two endpoints are stored in lexicographic
/// order.
struct IntervalConstraint {
    Axis axis = Axis::x;
    Vec2 internal;
    Vec2 external;
    double abscissa = 0.0;
    std::uint32_t source_a = 0;  // cell ids (indices into the box list)
    std::uint32_t source_b = 0;
    bool degenerate = false;     // corner contact; external is epsilon-inflated
    double source_size = 1.0;    // max side length of the two source cells
};

/// Cyclic list S_XY, sorted by curvilinear abscissa.
struct ConstraintCycle {
    std::vector<IntervalConstraint> constraints;

    std::size_t n() const { return constraints.size(); }
};

/// Def 3 "vertex and edge" adjacency. Cell coordinates produced by this
/// pipeline are dyadic rationals, so the double arithmetic below is exact.
bool ve_adjacent(const Cell& r1, const Cell& r2);

/// Def 3 edge adjacency: exclusive-or of the two clauses, strict inequalities.
bool e_adjacent(const Cell& r1, const Cell& r2);

/// The two ordered chains: first sorted by (min-x edge, min-y edge), second
/// by (min-y edge, min-x edge). Requires at least 3 pairwise non-overlapping
/// cells.
std::pair<KCurve, KCurve> build_k_curves(std::span<const Cell> cells);

/// Shared interfaces of order-consecutive ve-adjacent pairs. Corner contacts
/// become degenerate point intervals and are flagged. Non-adjacent
/// consecutive pairs emit nothing.
std::vector<IntervalConstraint> extract_interfaces(const KCurve& curve,
                                                   std::span<const Cell> cells);

/// Merges S_X and S_Y, deduplicates shared pairs, assigns curvilinear
/// abscissae (circular mean of the contour indices covered by both source
/// cells), classifies the internal/external endpoints against the image
/// (contour point-in-polygon as fallback) and sorts cyclically by abscissa.
ConstraintCycle build_sxy(std::span<const IntervalConstraint> sx,
                          std::span<const IntervalConstraint> sy,
                          std::span<const Cell> cells,
                          const DigitalContour& contour,
                          const BinaryImage* image = nullptr);

/// JSON dump: ordered array of {axis, internal:[x,y], external:[x,y], abscissa}.
std::string sxy_to_json(const ConstraintCycle& cycle);

}  // namespace arcline
