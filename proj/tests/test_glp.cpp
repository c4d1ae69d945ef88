#include "doctest.h"

#include "arcline/glp.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace arcline;

namespace {

IntervalConstraint make_constraint(Vec2 internal, Vec2 external) {
    IntervalConstraint c;
    c.internal = internal;
    c.external = external;
    c.axis = internal.x == external.x ? Axis::y : Axis::x;
    return c;
}

// random axis-aligned integer constraint in [-10, 10]^2
IntervalConstraint random_constraint(SplitMix64& rng) {
    const int x = static_cast<int>(rng.below(21)) - 10;
    const int y = static_cast<int>(rng.below(21)) - 10;
    const int len = 1 + static_cast<int>(rng.below(5));
    const bool vertical = rng.below(2) == 0;
    const bool flip = rng.below(2) == 0;
    Vec2 a{static_cast<double>(x), static_cast<double>(y)};
    Vec2 b = vertical ? Vec2{a.x, a.y + len} : Vec2{a.x + len, a.y};
    if (b.x > 10 || b.y > 10) b = vertical ? Vec2{a.x, a.y - len} : Vec2{a.x - len, a.y};
    if (flip) std::swap(a, b);
    return make_constraint(a, b);
}

std::vector<IntervalConstraint> random_slice(SplitMix64& rng, std::size_t max_len) {
    const std::size_t len = 1 + rng.below(max_len);
    std::vector<IntervalConstraint> out;
    for (std::size_t i = 0; i < len; ++i) out.push_back(random_constraint(rng));
    return out;
}

ConstraintCycle cycle_from(std::vector<IntervalConstraint> cs) {
    for (std::size_t i = 0; i < cs.size(); ++i) cs[i].abscissa = static_cast<double>(i);
    ConstraintCycle cycle;
    cycle.constraints = std::move(cs);
    return cycle;
}

}  // namespace

TEST_CASE("parallel stabbing: witness exists") {
    std::vector<IntervalConstraint> slice;
    for (int x = 0; x <= 2; ++x)
        slice.push_back(make_constraint({static_cast<double>(x), 0},
                                        {static_cast<double>(x), 1}));
    const auto w = line_feasible(slice);
    REQUIRE(w.has_value());
    CHECK(validate_line_witness(*w, slice));
    CHECK(w->a * w->a + w->b * w->b == doctest::Approx(1.0));
}

TEST_CASE("interleaved endpoints: no line") {
    std::vector<IntervalConstraint> slice;
    slice.push_back(make_constraint({0, 0}, {0, 1}));
    slice.push_back(make_constraint({1, 1}, {1, 0}));
    slice.push_back(make_constraint({2, 0}, {2, 1}));
    CHECK_FALSE(line_feasible(slice).has_value());
    CHECK_FALSE(oracle::line_separable_bruteforce(slice));
}

TEST_CASE("single constraint is always line-feasible") {
    SplitMix64 rng(31);
    for (int t = 0; t < 50; ++t) {
        const std::vector<IntervalConstraint> slice = {random_constraint(rng)};
        const auto w = line_feasible(slice);
        REQUIRE(w.has_value());
        CHECK(validate_line_witness(*w, slice));
    }
}

TEST_CASE("concentric rings: separating circle centered near origin") {
    std::vector<IntervalConstraint> slice;
    slice.push_back(make_constraint({1, 0}, {2, 0}));
    slice.push_back(make_constraint({0, 1}, {0, 2}));
    slice.push_back(make_constraint({-1, 0}, {-2, 0}));
    slice.push_back(make_constraint({0, -1}, {0, -2}));
    const auto w = circle_feasible(slice);
    REQUIRE(w.has_value());
    CHECK_FALSE(w->degenerate_line);
    CHECK(w->orientation == CircleOrientation::internal_inside);
    CHECK(validate_circle_witness(*w, slice));
    CHECK(norm(w->center) < 1.0);
    CHECK(w->radius >= 1.0);
    CHECK(w->radius < 2.0);
}

TEST_CASE("swapped rings: internal-outside orientation") {
    std::vector<IntervalConstraint> slice;
    slice.push_back(make_constraint({2, 0}, {1, 0}));
    slice.push_back(make_constraint({0, 2}, {0, 1}));
    slice.push_back(make_constraint({-2, 0}, {-1, 0}));
    slice.push_back(make_constraint({0, -2}, {0, -1}));
    const auto w = circle_feasible(slice);
    REQUIRE(w.has_value());
    CHECK_FALSE(w->degenerate_line);
    CHECK(w->orientation == CircleOrientation::internal_outside);
    CHECK(validate_circle_witness(*w, slice));
}

TEST_CASE("interleaved radial endpoints: no circle") {
    std::vector<IntervalConstraint> slice;
    // internal at radii 1 and 2 alternating, external at 1.5
    const double r15 = 1.5;
    slice.push_back(make_constraint({1, 0}, {r15, 0}));
    slice.push_back(make_constraint({0, 2}, {0, r15}));
    slice.push_back(make_constraint({-1, 0}, {-r15, 0}));
    slice.push_back(make_constraint({0, -2}, {0, -r15}));
    CHECK_FALSE(circle_feasible(slice).has_value());
    CHECK_FALSE(oracle::circle_separable_bruteforce(slice));
}

TEST_CASE("line accepted as infinite-radius circle") {
    // internal points collinear, external strictly above: no proper circle is
    // required, the line fallback must fire if both circle orientations fail
    std::vector<IntervalConstraint> slice;
    for (int x = 0; x <= 3; ++x)
        slice.push_back(make_constraint({static_cast<double>(x), 0},
                                        {static_cast<double>(x), 1}));
    const auto w = circle_feasible(slice);
    REQUIRE(w.has_value());
    CHECK(validate_circle_witness(*w, slice));
}

TEST_CASE("oracle equivalence on random slices") {
    SplitMix64 rng(424242);
    int line_feasible_count = 0, circle_feasible_count = 0;
    for (int trial = 0; trial < 250; ++trial) {
        const auto slice = random_slice(rng, 8);
        const auto lw = line_feasible(slice);
        const bool oracle_line = oracle::line_separable_bruteforce(slice);
        CHECK_MESSAGE(lw.has_value() == oracle_line, "line trial ", trial);
        if (lw) {
            ++line_feasible_count;
            CHECK(validate_line_witness(*lw, slice));
        }
        const auto cw = circle_feasible(slice);
        const bool oracle_circle = oracle::circle_separable_bruteforce(slice);
        CHECK_MESSAGE(cw.has_value() == oracle_circle, "circle trial ", trial);
        if (cw) {
            ++circle_feasible_count;
            CHECK(validate_circle_witness(*cw, slice));
        }
    }
    CHECK(line_feasible_count > 10);
    CHECK(circle_feasible_count > line_feasible_count);  // circles subsume lines
}

TEST_CASE("monotonicity: sub-slices of feasible slices stay feasible") {
    SplitMix64 rng(777);
    int tested = 0;
    while (tested < 150) {
        const auto slice = random_slice(rng, 8);
        const bool line_ok = line_feasible(slice).has_value();
        const bool circle_ok = circle_feasible(slice).has_value();
        if (!line_ok && !circle_ok) continue;
        ++tested;
        for (int sub = 0; sub < 5; ++sub) {
            const std::size_t lo = rng.below(slice.size());
            const std::size_t hi = lo + rng.below(slice.size() - lo) + 1;
            const std::vector<IntervalConstraint> part(slice.begin() + lo, slice.begin() + hi);
            if (line_ok) CHECK(line_feasible(part).has_value());
            if (circle_ok) CHECK(circle_feasible(part).has_value());
        }
    }
}

TEST_CASE("maximal primitives on a straight strip: one full cover") {
    std::vector<IntervalConstraint> cs;
    for (int x = 0; x < 8; ++x)
        cs.push_back(make_constraint({static_cast<double>(x), 0},
                                     {static_cast<double>(x), 1}));
    const ConstraintCycle cycle = cycle_from(cs);
    const auto prims = maximal_primitives(cycle, PrimitiveKind::segment);
    REQUIRE(prims.size() == 1);
    CHECK(prims[0].i == 0);
    CHECK(prims[0].j == 7);
}

TEST_CASE("maximal primitives of a square of constraints") {
    // constraints around a square: internal endpoints on the square sides,
    // external one unit outward
    std::vector<IntervalConstraint> cs;
    const int side = 6;
    for (int x = 0; x < side; ++x)
        cs.push_back(make_constraint({static_cast<double>(x), 0}, {static_cast<double>(x), -1}));
    for (int y = 0; y < side; ++y)
        cs.push_back(make_constraint({static_cast<double>(side), static_cast<double>(y)},
                                     {static_cast<double>(side + 1), static_cast<double>(y)}));
    for (int x = side; x > 0; --x)
        cs.push_back(make_constraint({static_cast<double>(x), static_cast<double>(side)},
                                     {static_cast<double>(x), static_cast<double>(side + 1)}));
    for (int y = side; y > 0; --y)
        cs.push_back(make_constraint({0, static_cast<double>(y)}, {-1, static_cast<double>(y)}));
    const ConstraintCycle cycle = cycle_from(cs);
    const auto prims = maximal_primitives(cycle, PrimitiveKind::segment);
    CHECK(prims.size() >= 4);
    const std::size_t n = cycle.n();
    // coverage and maximality against the feasibility oracle
    std::vector<int> covered(n, 0);
    for (const MaximalPrimitive& p : prims) {
        const std::size_t len = (p.j + n - p.i) % n + 1;
        for (std::size_t t = 0; t < len; ++t) ++covered[(p.i + t) % n];
        const auto left = cyclic_slice(cycle, (p.i + n - 1) % n, len + 1);
        const auto right = cyclic_slice(cycle, p.i, len + 1);
        CHECK_FALSE(line_feasible(left).has_value());
        CHECK_FALSE(line_feasible(right).has_value());
    }
    for (const int c : covered) CHECK(c >= 1);
}

TEST_CASE("a span like [1;9] whose extensions fail is reported exactly") {
    // eleven constraints; 1..9 lie on a strip pierceable by a horizontal
    // line, 0 and 10 are oriented against it
    std::vector<IntervalConstraint> cs;
    cs.push_back(make_constraint({-1, 1}, {-1, 0}));  // 0: flipped
    for (int x = 0; x <= 8; ++x)                      // 1..9
        cs.push_back(make_constraint({static_cast<double>(x), 0},
                                     {static_cast<double>(x), 1}));
    cs.push_back(make_constraint({9, 1}, {9, 0}));    // 10: flipped
    const ConstraintCycle cycle = cycle_from(cs);
    const auto prims = maximal_primitives(cycle, PrimitiveKind::segment);
    bool found = false;
    for (const MaximalPrimitive& p : prims)
        if (p.i == 1 && p.j == 9) found = true;
    CHECK(found);
}

TEST_CASE("witnesses of maximal primitives re-validate") {
    SplitMix64 rng(1234);
    std::vector<IntervalConstraint> cs;
    for (int k = 0; k < 12; ++k) cs.push_back(random_constraint(rng));
    const ConstraintCycle cycle = cycle_from(cs);
    for (const PrimitiveKind kind : {PrimitiveKind::segment, PrimitiveKind::arc}) {
        const auto prims = maximal_primitives(cycle, kind);
        const std::size_t n = cycle.n();
        for (const MaximalPrimitive& p : prims) {
            const std::size_t len = (p.j + n - p.i) % n + 1;
            const auto slice = cyclic_slice(cycle, p.i, len);
            if (kind == PrimitiveKind::segment)
                CHECK(validate_line_witness(std::get<LineWitness>(p.witness), slice));
            else
                CHECK(validate_circle_witness(std::get<CircleWitness>(p.witness), slice));
        }
    }
}
