#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "arcline/mindss.hpp"

namespace arcline {

/// One realized primitive of the closed chain. Segments are stored by their
/// endpoints; arcs by center, radius, start angle and signed sweep (the end
/// angle is start + sweep). degenerate_line_arc marks an arc span whose
/// midpoints were collinear and was realized as a segment instead.
struct GeomPrimitive {
    PrimitiveKind kind = PrimitiveKind::segment;
    Vec2 p0, p1;              // segment endpoints
    Vec2 center;              // arc
    double radius = 0.0;      // arc
    double start_angle = 0.0; // arc
    double sweep = 0.0;       // arc, signed, |sweep| in (0, 2*pi]
    bool degenerate_line_arc = false;
};

/// Closed chain of primitives. junctions[p] is where primitive p starts and
/// primitive p-1 ends. junction_gaps reports the pre-clipping disagreement of
/// the two fitted primitives at each junction, junction_tolerances the
/// corresponding tau_join bound (twice the largest source cell size in the
/// two adjacent spans). missed_constraints lists the intervals the final
/// chain fails to cross.
struct Reconstruction {
    std::vector<GeomPrimitive> primitives;
    std::vector<Vec2> junctions;
    std::vector<std::uint32_t> missed_constraints;
    std::vector<double> junction_gaps;
    std::vector<double> junction_tolerances;
};

/// Realizes the minimal cycle geometrically: constraint midpoints of every
/// span (breakpoint to next breakpoint) are fitted by total least squares
/// (segments) or a Kasa algebraic circle fit (arcs); junctions average the
/// projections of the shared breakpoint midpoint onto both primitives.
Reconstruction realize(const PrimitiveCycle& cycle, const ConstraintCycle& constraints,
                       PrimitiveKind kind);

/// Optional overlay layers for the SVG export.
struct SvgOverlays {
    const std::vector<Cell>* boxes = nullptr;
    const ConstraintCycle* intervals = nullptr;
    const std::vector<MaximalPrimitive>* maximal = nullptr;
};

/// Writes one path element per primitive (two arc commands for a full
/// circle). Throws on an empty reconstruction or I/O failure.
void export_svg(const Reconstruction& rec, const std::string& path,
                const SvgOverlays* overlays = nullptr);

/// Serializes {primitives:[{kind,...}], junctions:[[x,y]], missed:[int]}.
void export_json(const Reconstruction& rec, const std::string& path);
std::string reconstruction_to_json(const Reconstruction& rec);

/// Parses and validates the export_json schema; throws on violations.
Reconstruction reconstruction_from_json(const std::string& text);
Reconstruction load_reconstruction_json(const std::string& path);

}  // namespace arcline
