#pragma once

#include "arcline/reconstruct.hpp"

namespace arcline {

struct PipelineOptions {
    PrimitiveKind kind = PrimitiveKind::segment;
    int max_scale = 10;
};

/// Every intermediate of one contour's run, kept for inspection and overlays.
struct PipelineResult {
    std::vector<Cell> boxes;
    ConstraintCycle sxy;
    std::vector<MaximalPrimitive> primitives;
    ArcGraph graph;
    PrimitiveCycle cycle;
    Reconstruction reconstruction;
};

/// Full run for one contour: meaningful boxes, k-curves, S_XY, maximal
/// primitives, minimal cycle, geometric realization. Throws with the failing
/// stage name prefixed.
PipelineResult run_pipeline(const BinaryImage& img, const DigitalContour& contour,
                            const PipelineOptions& options);

}  // namespace arcline
