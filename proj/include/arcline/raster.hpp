#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "arcline/geom.hpp"

namespace arcline {

/// Binary raster, row-major, true = foreground.
class BinaryImage {
public:
    BinaryImage() = default;
    BinaryImage(int width, int height, bool fill = false);

    int width() const { return width_; }
    int height() const { return height_; }
    bool empty() const { return pixels_.empty(); }

    bool in_bounds(int x, int y) const {
        return x >= 0 && y >= 0 && x < width_ && y < height_;
    }
    bool at(int x, int y) const { return pixels_[index(x, y)] != 0; }
    void set(int x, int y, bool v) { pixels_[index(x, y)] = v ? 1 : 0; }

    /// Out-of-bounds reads count as background.
    bool at_or(int x, int y, bool fallback = false) const {
        return in_bounds(x, y) ? at(x, y) : fallback;
    }

    std::size_t foreground_count() const;

    friend bool operator==(const BinaryImage&, const BinaryImage&) = default;

private:
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * width_ + x;
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> pixels_;
};

enum class Orientation { counterclockwise, clockwise };

/// Closed 8-connected pixel boundary. Orientation is stated for the stored
/// (x right, y down) frame: counterclockwise means positive signed area of
/// the point loop, which renders clockwise on screen. Outer boundaries are
/// counterclockwise, hole boundaries clockwise.
struct DigitalContour {
    std::vector<IVec2> points;
    Orientation orientation = Orientation::counterclockwise;

    std::size_t size() const { return points.size(); }
};

/// Reads PBM P1/P4 or PGM P2/P5. PGM is thresholded at 128 (dark pixels are
/// foreground). Throws std::runtime_error on I/O failure, malformed header,
/// zero dimensions or truncated payload.
BinaryImage load_image(const std::string& path);

/// P4 writer, row-major, MSB-first bit packing, rows padded to a byte.
void save_pbm(const BinaryImage& img, const std::string& path);

/// Moore-neighbor tracing with Jacob's stopping criterion. Outer boundaries
/// come out counterclockwise, holes clockwise; every contour starts at its
/// lexicographically smallest (row, column) pixel. Contours shorter than 4
/// points are discarded. An empty image yields an empty sequence.
std::vector<DigitalContour> trace_contours(const BinaryImage& img);

/// Twice the signed area of the cyclic point loop.
long long signed_area2(const std::vector<IVec2>& pts);

/// Checks the DigitalContour invariants (cyclic 8-adjacency, no repeated
/// point, length >= 4, orientation tag consistent with the area sign).
bool contour_valid(const DigitalContour& c, std::string* why = nullptr);

/// 8-connected foreground labelling; labels are assigned in row-major scan
/// order starting from 0, background pixels get -1.
std::vector<int> label_components8(const BinaryImage& img, int* count = nullptr);

/// Chebyshev distance of every pixel to the nearest pixel with value
/// `target`. Pixels at value `target` get distance 0; if no such pixel
/// exists all entries are a large sentinel.
std::vector<int> chebyshev_distance_to(const BinaryImage& img, bool target);

/// Even-odd test against the contour polygon (points joined by straight
/// edges). Points on the polygon itself are reported as outside.
bool point_in_contour(const DigitalContour& c, Vec2 p);

}  // namespace arcline
