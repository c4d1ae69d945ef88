#include "doctest.h"

#include <cmath>

#include "arcline/bench.hpp"
#include "helpers.hpp"

using namespace arcline;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("hexagon digitization is rotation-stable in pixel count") {
    const BinaryImage base = make_hexagon(60, 0.0, 160);
    const double count0 = static_cast<double>(base.foreground_count());
    for (const double angle : {kPi / 3, kPi / 8, kPi / 4}) {
        const BinaryImage rot = make_hexagon(60, angle, 160);
        const double c = static_cast<double>(rot.foreground_count());
        CHECK(std::abs(c - count0) / count0 <= 0.01);
    }
}

TEST_CASE("hexagon exceeding the image is an error") {
    CHECK_THROWS_AS(make_hexagon(100, 0.0, 160), std::invalid_argument);
}

TEST_CASE("circle case of the ellipse digitizes 4-fold symmetric") {
    const BinaryImage img = make_ellipse(40, 40, 0.0, 120);
    // 4-fold symmetry about the center
    const double c = (120 - 1) / 2.0;
    for (int y = 0; y < 120; ++y)
        for (int x = 0; x < 120; ++x) {
            const int mx = static_cast<int>(2 * c) - x;
            const int my = static_cast<int>(2 * c) - y;
            CHECK(img.at(x, y) == img.at(mx, my));
        }
}

TEST_CASE("rotated ellipse area matches pi*a*b within 2%") {
    for (const double angle : {0.0, kPi / 8, kPi / 4}) {
        const BinaryImage img = make_ellipse(60, 40, angle, 160);
        const double area = static_cast<double>(img.foreground_count());
        const double expected = kPi * 60 * 40;
        CHECK(std::abs(area - expected) / expected <= 0.02);
    }
}

TEST_CASE("degenerate ellipse axis is an error") {
    CHECK_THROWS_AS(make_ellipse(40, 0, 0.0, 160), std::invalid_argument);
}

TEST_CASE("kanungo with q = 0 is the identity") {
    const BinaryImage img = make_hexagon(40, 0.0, 120);
    CHECK(kanungo_noise_raw(img, 0.0, 7) == img);
}

TEST_CASE("kanungo flip rate at distance 1 approximates q") {
    // aggregate independent degradations until 10^4 boundary-adjacent samples
    const BinaryImage img = testutil::filled_rect(200, 20, 20, 179, 179);
    const std::vector<int> to_bg = chebyshev_distance_to(img, false);
    const std::vector<int> to_fg = chebyshev_distance_to(img, true);
    std::size_t boundary = 0, flipped = 0;
    for (std::uint64_t seed = 0; boundary < 10000; ++seed) {
        const BinaryImage noisy = kanungo_noise_raw(img, 10.0, 12345 + seed);  // q = 0.5
        for (int y = 0; y < 200; ++y)
            for (int x = 0; x < 200; ++x) {
                const std::size_t i = static_cast<std::size_t>(y) * 200 + x;
                const int d = img.at(x, y) ? to_bg[i] : to_fg[i];
                if (d != 1) continue;
                ++boundary;
                if (noisy.at(x, y) != img.at(x, y)) ++flipped;
            }
    }
    const double rate = static_cast<double>(flipped) / static_cast<double>(boundary);
    CHECK(std::abs(rate - 0.5) <= 0.02);
}

TEST_CASE("kanungo is deterministic") {
    const BinaryImage img = make_hexagon(40, 0.3, 120);
    CHECK(kanungo_noise(img, 5.0, 99) == kanungo_noise(img, 5.0, 99));
}

TEST_CASE("kanungo rejects q >= 1") {
    const BinaryImage img = make_hexagon(40, 0.0, 120);
    CHECK_THROWS_AS(kanungo_noise(img, 20.0, 1), std::invalid_argument);
}

TEST_CASE("cleaning keeps one component and fills small holes") {
    BinaryImage img(40, 40);
    for (int y = 5; y <= 30; ++y)
        for (int x = 5; x <= 30; ++x) img.set(x, y, true);
    img.set(15, 15, false);            // 1-pixel hole: filled
    img.set(35, 35, true);             // speck: dropped
    const BinaryImage cleaned = clean_binary(img);
    CHECK(cleaned.at(15, 15));
    CHECK_FALSE(cleaned.at(35, 35));
}

TEST_CASE("q_measure arithmetic") {
    CHECK(q_measure({6, 6, 6, 6, 6}, 6) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(q_measure({6, 7, 6, 8, 6}, 6) == doctest::Approx(1.1).epsilon(1e-12));
    CHECK(q_measure({4, 4, 4, 4, 4}, 4) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(q_measure({1, 2, 3}, 4), std::invalid_argument);
    CHECK_THROWS_AS(q_measure({6, 6, 6, 6, 6}, 0), std::invalid_argument);
}

TEST_CASE("q_measure scales linearly") {
    const double q1 = q_measure({3, 4, 5, 6, 7}, 5);
    const double q2 = q_measure({6, 8, 10, 12, 14}, 10);
    CHECK(q1 == doctest::Approx(q2).epsilon(1e-12));
}

TEST_CASE("robustness arithmetic on the worked example") {
    const NoiseLadder ladder{{1, 3, 5, 7, 10}};
    const auto [alpha, sigma] = robustness({1.0, 1.1, 1.3, 1.2, 1.4}, ladder);
    CHECK(alpha == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(sigma == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("robustness of constant Q is (0, first scale)") {
    const NoiseLadder ladder{{1, 3, 5, 7, 10}};
    const auto [alpha, sigma] = robustness({1.0, 1.0, 1.0, 1.0, 1.0}, ladder);
    CHECK(alpha == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(sigma == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("robustness is translation-invariant in Q") {
    const NoiseLadder ladder{{1, 3, 5, 7, 10}};
    const auto [a1, s1] = robustness({1.0, 1.1, 1.3, 1.2, 1.4}, ladder);
    const auto [a2, s2] = robustness({3.0, 3.1, 3.3, 3.2, 3.4}, ladder);
    CHECK(a1 == doctest::Approx(a2).epsilon(1e-12));
    CHECK(s1 == doctest::Approx(s2));
}

TEST_CASE("absolute-dy variant differs when quality improves fastest") {
    const NoiseLadder ladder{{1, 2}};
    const auto [signed_a, ss] = robustness({2.0, 1.0}, ladder);
    const auto [abs_a, as] = robustness({2.0, 1.0}, ladder, true);
    CHECK(signed_a == doctest::Approx(-1.0));
    CHECK(abs_a == doctest::Approx(1.0));
    (void)ss;
    (void)as;
}

TEST_CASE("reference tables carry the published values") {
    const auto seg = reference_table(PrimitiveKind::segment);
    REQUIRE(seg.size() == 5);
    CHECK(seg.back().method == "Ours (published)");
    CHECK(seg.back().alpha == doctest::Approx(0.063));
    CHECK(seg.back().sigma == doctest::Approx(1.0));
    const auto arc = reference_table(PrimitiveKind::arc);
    REQUIRE(arc.size() == 8);
    bool found = false;
    for (const ReferenceEntry& e : arc)
        if (e.method == "Ours (published)") {
            found = true;
            CHECK(e.alpha == doctest::Approx(0.05));
            CHECK(e.sigma == doctest::Approx(1.0));
        }
    CHECK(found);
}

TEST_CASE("zero-noise hexagon/segment run lands near the ideal count") {
    const NoiseLadder ladder{{0.0}};
    const RotationSet rotations = RotationSet::standard();
    const RobustnessReport report =
        run_experiment(BenchShape::hexagon, PrimitiveKind::segment, ladder, rotations, 1);
    REQUIRE(report.q_values.size() == 1);
    CHECK(report.q_values[0] >= 1.0);
    CHECK(report.q_values[0] <= 1.34);
    CHECK_FALSE(report.alpha.has_value());
}

TEST_CASE("zero-noise ellipse/arc run lands near the ideal count") {
    const NoiseLadder ladder{{0.0}};
    const RobustnessReport report = run_experiment(BenchShape::ellipse, PrimitiveKind::arc,
                                                   ladder, RotationSet::standard(), 1);
    REQUIRE(report.q_values.size() == 1);
    CHECK(report.q_values[0] >= 0.75);
    CHECK(report.q_values[0] <= 1.5);
}

TEST_CASE("experiments are deterministic given the seed") {
    const NoiseLadder ladder{{1.0, 3.0}};
    const RobustnessReport a = run_experiment(BenchShape::hexagon, PrimitiveKind::segment,
                                              ladder, RotationSet::standard(), 42);
    const RobustnessReport b = run_experiment(BenchShape::hexagon, PrimitiveKind::segment,
                                              ladder, RotationSet::standard(), 42);
    CHECK(a.counts == b.counts);
    CHECK(report_to_json(a) == report_to_json(b));
    CHECK(report_to_csv(a) == report_to_csv(b));
}

TEST_CASE("report invariants are recomputable") {
    const NoiseLadder ladder{{1.0, 3.0, 5.0}};
    const RobustnessReport r = run_experiment(BenchShape::hexagon, PrimitiveKind::segment,
                                              ladder, RotationSet::standard(), 3);
    REQUIRE(r.alpha.has_value());
    const auto [alpha, sigma] = robustness(r.q_values, r.ladder);
    CHECK(*r.alpha == doctest::Approx(alpha).epsilon(1e-12));
    CHECK(*r.sigma == doctest::Approx(sigma).epsilon(1e-12));
    for (std::size_t k = 0; k < r.counts.size(); ++k)
        CHECK(r.q_values[k] == doctest::Approx(q_measure(r.counts[k], r.p_star)).epsilon(1e-12));
}
