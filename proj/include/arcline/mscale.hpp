#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "arcline/raster.hpp"

namespace arcline {

/// Arithmetic digital straight segment: every covered contour point (x, y)
/// satisfies 0 <= a*x - b*y + mu < |a| + |b|, with gcd(|a|, |b|) = 1.
struct DigitalStraightSegment {
    int a = 0;
    int b = 0;
    long long mu = 0;
    std::uint32_t first = 0;  // contour index of the first covered point
    std::uint32_t last = 0;   // contour index of the last covered point (cyclic, inclusive)
};

/// Per-point profile of mean maximal-segment length against grid scale.
struct MultiScaleProfile {
    std::uint32_t point_index = 0;
    std::vector<int> scales;           // strictly increasing, starts at 1
    std::vector<double> mean_lengths;  // subsampled-grid units (point counts)
};

/// Irregular isothetic cell: center and strictly positive per-axis size,
/// plus the contour indices whose meaningful box it is.
struct Cell {
    Vec2 center;
    Vec2 size;
    std::vector<std::uint32_t> indices;
};

/// Maps every point to (floor(x/h), floor(y/h)), collapses consecutive
/// duplicates and re-closes. Returns an empty contour (the degenerate
/// marker) when fewer than 4 distinct points remain.
DigitalContour subsample(const DigitalContour& contour, int h);

/// Same, also reporting for each input index the subsampled index it maps to.
DigitalContour subsample_with_map(const DigitalContour& contour, int h,
                                  std::vector<std::uint32_t>* index_map);

/// Decides whether the point run can be covered by one arithmetic line of
/// width |a| + |b|. Optionally reports a witness with gcd(|a|, |b|) = 1.
bool dss_recognizable(std::span<const IVec2> pts, DigitalStraightSegment* witness = nullptr);

/// All maximal digital straight segments of the cyclic contour, ordered by
/// first index. Every contour point is covered by at least one of them.
std::vector<DigitalStraightSegment> maximal_segments(const DigitalContour& contour);

/// One profile per contour point over scales 1..max_scale (truncated where
/// subsampling degenerates).
std::vector<MultiScaleProfile> multiscale_profiles(const DigitalContour& contour, int max_scale);

/// Smallest scale from which the profile decreases; the last scale when it
/// never does. Requires at least 2 entries.
int noise_level(const MultiScaleProfile& profile);

/// One meaningful box per contour point (deduplicated, overlap-resolved);
/// each box records the contour indices it covers, in contour order of
/// first occurrence.
std::vector<Cell> meaningful_boxes(const DigitalContour& contour, int max_scale);

/// JSON dump: array of {cx, cy, lx, ly, indices[]}.
std::string boxes_to_json(const std::vector<Cell>& boxes);

}  // namespace arcline
