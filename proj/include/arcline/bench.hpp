#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "arcline/pipeline.hpp"

namespace arcline {

/// Noise scales of the degradation model.
struct NoiseLadder {
    std::vector<double> scales;  // strictly increasing

    static NoiseLadder standard() { return {{1, 3, 5, 7, 10}}; }
};

/// Rotation angles applied to the test shape, in radians.
struct RotationSet {
    std::vector<double> angles;

    static RotationSet standard();
};

enum class BenchShape { hexagon, ellipse };

/// Per-experiment outcome: the primitive-count matrix, the per-scale quality
/// values and the resulting Lipschitz estimate. alpha/sigma are absent for
/// single-scale ladders.
struct RobustnessReport {
    BenchShape shape = BenchShape::hexagon;
    PrimitiveKind kind = PrimitiveKind::segment;
    NoiseLadder ladder;
    RotationSet rotations;
    int p_star = 1;
    std::vector<std::vector<int>> counts;  // counts[k][t]: scale k, angle t
    std::vector<double> q_values;          // one per scale
    std::optional<double> alpha;
    std::optional<double> sigma;
};

/// Published reference value of a competing method, kept as data.
struct ReferenceEntry {
    std::string method;
    double alpha;
    double sigma;
};

/// Fills a regular hexagon (circumradius, rotated analytically before
/// digitization) by center-of-pixel inclusion. Throws when the shape does
/// not fit.
BinaryImage make_hexagon(double radius, double angle, int image_size);

/// Analytic ellipse fill with semi-axes a and b. b <= 0 is an error.
BinaryImage make_ellipse(double a, double b, double angle, int image_size);

/// Boundary-distance pixel-flip degradation: every pixel at Chebyshev
/// distance d from the opposite-value region flips with probability q^d,
/// q = scale/20. Deterministic given (img, scale, seed). The result is
/// cleaned: largest foreground component kept, interior holes below 9
/// pixels filled.
BinaryImage kanungo_noise(const BinaryImage& img, double scale, std::uint64_t seed);

/// Same degradation without the cleaning step (exposed for statistics).
BinaryImage kanungo_noise_raw(const BinaryImage& img, double scale, std::uint64_t seed);

/// Largest-component / small-hole cleaning used after degradation.
BinaryImage clean_binary(const BinaryImage& img);

/// Q of one noise scale: sum of the five per-angle primitive counts over
/// 5 * p_star.
double q_measure(const std::vector<int>& counts, int p_star);

/// (alpha, sigma) per the Lipschitz robustness definition: alpha is the
/// maximal signed per-unit-scale increase of Q, sigma the scale where it
/// occurs (ties to the smallest). With absolute_dy the numerator uses
/// |Q_{k+1} - Q_k| instead.
std::pair<double, double> robustness(const std::vector<double>& q_values,
                                     const NoiseLadder& ladder, bool absolute_dy = false);

/// Full protocol: for each (scale, angle) generate the shape, degrade it
/// with a seed derived from (seed, k, t), run the reconstruction pipeline on
/// the largest outer contour and count primitives.
RobustnessReport run_experiment(BenchShape shape, PrimitiveKind kind, const NoiseLadder& ladder,
                                const RotationSet& rotations, std::uint64_t seed);

/// Published (alpha, sigma) table for the given primitive kind.
std::vector<ReferenceEntry> reference_table(PrimitiveKind kind);

std::string report_to_json(const RobustnessReport& report);
std::string report_to_csv(const RobustnessReport& report);

}  // namespace arcline
