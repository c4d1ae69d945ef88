#include "doctest.h"

#include <set>

#include "arcline/raster.hpp"
#include "helpers.hpp"

using namespace arcline;
using testutil::TempFile;

TEST_CASE("load P1 with single center pixel") {
    TempFile f("p1_center.pbm");
    f.write("P1\n3 3\n0 0 0\n0 1 0\n0 0 0\n");
    const BinaryImage img = load_image(f.path());
    CHECK(img.width() == 3);
    CHECK(img.height() == 3);
    CHECK(img.foreground_count() == 1);
    CHECK(img.at(1, 1));
}

TEST_CASE("load all-zero P4") {
    TempFile f("p4_zero.pbm");
    f.write(std::string("P4\n9 2\n") + std::string(4, '\0'));
    const BinaryImage img = load_image(f.path());
    CHECK(img.foreground_count() == 0);
}

TEST_CASE("truncated P4 payload is a malformed payload error") {
    TempFile f("p4_trunc.pbm");
    f.write("P4\n16 4\n\x01\x02");
    CHECK_THROWS_WITH_AS(load_image(f.path()),
                         doctest::Contains("malformed payload"), std::runtime_error);
}

TEST_CASE("missing file reports cannot open") {
    CHECK_THROWS_WITH_AS(load_image("/nonexistent/arcline.pbm"),
                         doctest::Contains("cannot open"), std::runtime_error);
}

TEST_CASE("zero dimensions rejected") {
    TempFile f("p1_empty.pbm");
    f.write("P1\n0 0\n");
    CHECK_THROWS_WITH_AS(load_image(f.path()), doctest::Contains("zero"), std::runtime_error);
}

TEST_CASE("PGM threshold at 128") {
    TempFile f("p2.pgm");
    f.write("P2\n2 1\n255\n127 128\n");
    const BinaryImage img = load_image(f.path());
    CHECK(img.at(0, 0));        // dark pixel is foreground
    CHECK_FALSE(img.at(1, 0));  // at threshold: background
}

TEST_CASE("PBM round-trip reproduces pixels") {
    SplitMix64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const int w = 1 + static_cast<int>(rng.below(40));
        const int h = 1 + static_cast<int>(rng.below(20));
        BinaryImage img(w, h);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) img.set(x, y, rng.below(2) == 0);
        TempFile f("roundtrip_" + std::to_string(trial) + ".pbm");
        save_pbm(img, f.path());
        CHECK(load_image(f.path()) == img);
    }
}

TEST_CASE("filled 10x10 square traces to one 36-point counterclockwise contour") {
    const BinaryImage img = testutil::filled_rect(16, 3, 3, 12, 12);
    const auto contours = trace_contours(img);
    REQUIRE(contours.size() == 1);
    CHECK(contours[0].size() == 36);
    CHECK(contours[0].orientation == Orientation::counterclockwise);
    CHECK(signed_area2(contours[0].points) > 0);
    std::string why;
    CHECK_MESSAGE(contour_valid(contours[0], &why), why);
    // deterministic start point: lowest row, then lowest column
    CHECK(contours[0].points[0] == IVec2{3, 3});
}

TEST_CASE("square with a hole yields outer CCW and inner CW contours") {
    BinaryImage img = testutil::filled_rect(16, 2, 2, 11, 11);
    for (int y = 5; y <= 8; ++y)
        for (int x = 5; x <= 8; ++x) img.set(x, y, false);
    const auto contours = trace_contours(img);
    REQUIRE(contours.size() == 2);
    CHECK(contours[0].orientation == Orientation::counterclockwise);
    CHECK(contours[1].orientation == Orientation::clockwise);
    CHECK(signed_area2(contours[1].points) < 0);
    std::string why;
    CHECK_MESSAGE(contour_valid(contours[0], &why), why);
    CHECK_MESSAGE(contour_valid(contours[1], &why), why);
    // hole boundary pixels are foreground pixels around the hole
    for (const IVec2 p : contours[1].points) CHECK(img.at(p.x, p.y));
}

TEST_CASE("empty image yields empty sequence") {
    const BinaryImage img(8, 8);
    CHECK(trace_contours(img).empty());
}

TEST_CASE("tracing is deterministic") {
    const BinaryImage img = testutil::filled_disk(32, 15.5, 15.5, 10);
    const auto a = trace_contours(img);
    const auto b = trace_contours(img);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].points == b[i].points);
        CHECK(a[i].orientation == b[i].orientation);
    }
}

TEST_CASE("traced contours satisfy invariants on random blobs") {
    SplitMix64 rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        BinaryImage img(24, 24);
        // union of random disks: blobby but connected enough for tracing
        for (int k = 0; k < 3; ++k) {
            const double cx = 6 + static_cast<double>(rng.below(12));
            const double cy = 6 + static_cast<double>(rng.below(12));
            const double r = 2 + static_cast<double>(rng.below(4));
            for (int y = 0; y < 24; ++y)
                for (int x = 0; x < 24; ++x)
                    if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r) img.set(x, y, true);
        }
        for (const DigitalContour& c : trace_contours(img)) {
            std::string why;
            CHECK_MESSAGE(contour_valid(c, &why), why);
        }
    }
}

TEST_CASE("two separate components give two contours in scan order") {
    BinaryImage img(20, 10);
    for (int y = 2; y <= 5; ++y)
        for (int x = 2; x <= 5; ++x) img.set(x, y, true);
    for (int y = 3; y <= 6; ++y)
        for (int x = 12; x <= 15; ++x) img.set(x, y, true);
    const auto contours = trace_contours(img);
    REQUIRE(contours.size() == 2);
    CHECK(contours[0].points[0].y <= contours[1].points[0].y);
}

TEST_CASE("point_in_contour: interior, exterior, boundary") {
    const BinaryImage img = testutil::filled_rect(12, 2, 2, 9, 9);
    const auto contours = trace_contours(img);
    REQUIRE(contours.size() == 1);
    CHECK(point_in_contour(contours[0], {5.5, 5.5}));
    CHECK_FALSE(point_in_contour(contours[0], {0.5, 0.5}));
    CHECK_FALSE(point_in_contour(contours[0], {2.0, 5.0}));  // on the polygon
}

TEST_CASE("chebyshev distance transform") {
    BinaryImage img(5, 5);
    img.set(2, 2, true);
    const auto d = chebyshev_distance_to(img, true);
    CHECK(d[2 * 5 + 2] == 0);
    CHECK(d[0] == 2);
    CHECK(d[2 * 5 + 0] == 2);
    CHECK(d[1 * 5 + 1] == 1);
}
