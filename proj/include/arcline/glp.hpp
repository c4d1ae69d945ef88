#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "arcline/igrid.hpp"

namespace arcline {

/// Separating line a*x + b*y = c with a^2 + b^2 = 1; the internal side is
/// a*x + b*y <= c, external endpoints lie strictly on the > side (up to the
/// documented tolerance).
struct LineWitness {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

enum class CircleOrientation { internal_inside, internal_outside };

/// Separating circle. When no proper circle exists but a line does, the
/// line is accepted as an infinite-radius circle: degenerate_line is set and
/// `line` carries the separator.
struct CircleWitness {
    Vec2 center;
    double radius = 0.0;
    CircleOrientation orientation = CircleOrientation::internal_inside;
    bool degenerate_line = false;
    LineWitness line;
};

enum class PrimitiveKind { segment, arc };

/// Maximal run [i; j] of constraint indices pierced by one primitive; both
/// one-step extensions are infeasible.
struct MaximalPrimitive {
    std::uint32_t i = 0;
    std::uint32_t j = 0;
    PrimitiveKind kind = PrimitiveKind::segment;
    std::variant<LineWitness, CircleWitness> witness;
};

/// Tolerance used for feasibility decisions and witness validation.
inline constexpr double kFeasibilityEps = 1e-9;

/// Looks for a line with every internal endpoint on the closed side and
/// every external endpoint strictly outside. 2-D separability solved as a
/// low-dimensional feasibility LP with margin maximization (randomized
/// incremental, seeded from the slice content).
std::optional<LineWitness> line_feasible(std::span<const IntervalConstraint> slice,
                                         std::uint64_t seed = 0);

/// Same for circles via the paraboloid lift (x, y) -> (x, y, x^2 + y^2):
/// circle separation in 2-D is plane separation in 3-D. Both orientations
/// are tried (internal-inside preferred); lines are accepted as
/// infinite-radius circles.
std::optional<CircleWitness> circle_feasible(std::span<const IntervalConstraint> slice,
                                             std::uint64_t seed = 0);

bool validate_line_witness(const LineWitness& w, std::span<const IntervalConstraint> slice,
                           double eps = kFeasibilityEps);
bool validate_circle_witness(const CircleWitness& w, std::span<const IntervalConstraint> slice,
                             double eps = kFeasibilityEps);

/// Two-pointer sweep over the cyclic constraint list; returns the maximal
/// primitives ordered by start index. If one primitive pierces all n
/// constraints it is returned alone.
std::vector<MaximalPrimitive> maximal_primitives(const ConstraintCycle& cycle,
                                                 PrimitiveKind kind);

/// Materializes the cyclic slice [start, start+len) of the cycle.
std::vector<IntervalConstraint> cyclic_slice(const ConstraintCycle& cycle, std::size_t start,
                                             std::size_t len);

/// JSON dump: array of {kind, i, j, witness...}.
std::string primitives_to_json(const std::vector<MaximalPrimitive>& prims);

}  // namespace arcline
