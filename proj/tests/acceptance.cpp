// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "arcline/bench.hpp"
#include "arcline/pipeline.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace arcline;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::cout << "criterion " << criterion << ": " << (pass ? "PASS" : "FAIL") << " — "
              << detail << "\n";
    if (!pass) ++failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// --------------------------------------------------------------------------
// 1. minDSS optimality against brute force

void criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    SplitMix64 rng(987654321);
    int done = 0, mismatches = 0;
    while (done < 500) {
        const auto maybe = oracle::random_arc_graph(rng, 40, 12);
        if (!maybe) continue;
        ++done;
        const PrimitiveCycle mine = min_cycle(*maybe);
        const PrimitiveCycle brute = brute_force_min_cycle(*maybe);
        if (mine.length() != brute.length()) ++mismatches;
        if (!cycle_valid(*maybe, mine)) ++mismatches;
    }
    const double dt = seconds_since(t0);
    std::ostringstream os;
    os << "minDSS optimality: " << done << " instances, " << mismatches << " mismatches, "
       << dt << " s";
    report(1, mismatches == 0 && dt < 10.0, os.str());
}

// --------------------------------------------------------------------------
// 2. GLP oracle equivalence

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
    IntervalConstraint c;
    c.internal = a;
    c.external = b;
    c.axis = a.x == b.x ? Axis::y : Axis::x;
    return c;
}

std::vector<IntervalConstraint> random_slice(SplitMix64& rng, std::size_t max_len) {
    const std::size_t len = 1 + rng.below(max_len);
    std::vector<IntervalConstraint> out;
    for (std::size_t i = 0; i < len; ++i) out.push_back(random_constraint(rng));
    return out;
}

void criterion2() {
    SplitMix64 rng(13579);
    int line_mismatch = 0, circle_mismatch = 0, invalid_witness = 0;
    const int total = 500;
    for (int trial = 0; trial < total; ++trial) {
        const auto slice = random_slice(rng, 8);
        const auto lw = line_feasible(slice);
        if (lw.has_value() != oracle::line_separable_bruteforce(slice)) ++line_mismatch;
        if (lw && !validate_line_witness(*lw, slice, 1e-9)) ++invalid_witness;
        const auto cw = circle_feasible(slice);
        if (cw.has_value() != oracle::circle_separable_bruteforce(slice)) ++circle_mismatch;
        if (cw && !validate_circle_witness(*cw, slice, 1e-9)) ++invalid_witness;
    }
    std::ostringstream os;
    os << "GLP oracle equivalence: " << total << " slices, line mismatches " << line_mismatch
       << ", circle mismatches " << circle_mismatch << ", invalid witnesses "
       << invalid_witness;
    report(2, line_mismatch == 0 && circle_mismatch == 0 && invalid_witness == 0, os.str());
}

// --------------------------------------------------------------------------
// 3. feasibility monotonicity

void criterion3() {
    SplitMix64 rng(24680);
    int feasible_slices = 0, violations = 0;
    while (feasible_slices < 1000) {
        const auto slice = random_slice(rng, 8);
        const bool line_ok = line_feasible(slice).has_value();
        const bool circle_ok = circle_feasible(slice).has_value();
        if (!line_ok && !circle_ok) continue;
        ++feasible_slices;
        for (int sub = 0; sub < 3; ++sub) {
            const std::size_t lo = rng.below(slice.size());
            const std::size_t hi = lo + rng.below(slice.size() - lo) + 1;
            const std::vector<IntervalConstraint> part(slice.begin() + lo, slice.begin() + hi);
            if (line_ok && !line_feasible(part).has_value()) ++violations;
            if (circle_ok && !circle_feasible(part).has_value()) ++violations;
        }
    }
    std::ostringstream os;
    os << "feasibility monotonicity: " << feasible_slices << " feasible slices, " << violations
       << " violations";
    report(3, violations == 0, os.str());
}

// --------------------------------------------------------------------------
// 4. definition conformance: ve/e truth tables and the first-decrease rule

void criterion4() {
    int adjacency_errors = 0;
    std::vector<Cell> cells;
    for (double cx = -2.0; cx <= 2.0; cx += 0.5)
        for (double cy = -2.0; cy <= 2.0; cy += 0.5)
            for (double sx : {1.0, 2.0, 3.0})
                for (double sy : {1.0, 2.0, 3.0}) {
                    Cell c;
                    c.center = {cx, cy};
                    c.size = {sx, sy};
                    cells.push_back(c);
                }
    for (const Cell& a : cells) {
        for (const Cell& b : cells) {
            const double dx = std::abs(a.center.x - b.center.x);
            const double dy = std::abs(a.center.y - b.center.y);
            const double sx = (a.size.x + b.size.x) / 2;
            const double sy = (a.size.y + b.size.y) / 2;
            const bool ref_ve = (dx == sx && dy <= sy) || (dy == sy && dx <= sx);
            const bool c1 = dx == sx && dy < sy;
            const bool c2 = dy == sy && dx < sx;
            const bool ref_e = c1 != c2;
            if (ve_adjacent(a, b) != ref_ve) ++adjacency_errors;
            if (e_adjacent(a, b) != ref_e) ++adjacency_errors;
            if (ve_adjacent(a, b) != ve_adjacent(b, a)) ++adjacency_errors;
            if (e_adjacent(a, b) && !ve_adjacent(a, b)) ++adjacency_errors;
        }
    }

    int noise_errors = 0;
    SplitMix64 rng(31415);
    for (int t = 0; t < 100; ++t) {
        MultiScaleProfile p;
        const int len = 2 + static_cast<int>(rng.below(9));
        for (int k = 0; k < len; ++k) {
            p.scales.push_back(k + 1);
            p.mean_lengths.push_back(1.0 + static_cast<double>(rng.below(100)) / 10.0);
        }
        int expected = p.scales.back();
        for (int k = 0; k + 1 < len; ++k)
            if (p.mean_lengths[k + 1] < p.mean_lengths[k]) {
                expected = p.scales[k];
                break;
            }
        if (noise_level(p) != expected) ++noise_errors;
    }

    std::ostringstream os;
    os << "definition conformance: " << cells.size() * cells.size() << " cell pairs, "
       << adjacency_errors << " adjacency errors, " << noise_errors << " noise-level errors";
    report(4, adjacency_errors == 0 && noise_errors == 0, os.str());
}

// --------------------------------------------------------------------------
// 5. clean-shape reconstruction

void criterion5() {
    bool pass = true;
    std::ostringstream os;
    {
        const auto t0 = std::chrono::steady_clock::now();
        const BinaryImage img = testutil::filled_rect(80, 10, 10, 69, 69);
        const auto contours = trace_contours(img);
        PipelineOptions opts;
        opts.kind = PrimitiveKind::segment;
        const PipelineResult r = run_pipeline(img, contours[0], opts);
        const std::size_t count = r.reconstruction.primitives.size();
        const double dt = seconds_since(t0);
        os << "square(60) segments=" << count << " in " << dt << " s";
        if (count < 4 || count > 8 || dt >= 5.0) pass = false;
    }
    {
        const auto t0 = std::chrono::steady_clock::now();
        const BinaryImage img = testutil::filled_disk(100, 49.5, 49.5, 40);
        const auto contours = trace_contours(img);
        PipelineOptions opts;
        opts.kind = PrimitiveKind::arc;
        const PipelineResult r = run_pipeline(img, contours[0], opts);
        const std::size_t count = r.reconstruction.primitives.size();
        const double dt = seconds_since(t0);
        os << "; disk(40) arcs=" << count << " in " << dt << " s";
        if (count < 1 || count > 4 || dt >= 5.0) pass = false;
    }
    report(5, pass, "clean-shape reconstruction: " + os.str());
}

// --------------------------------------------------------------------------
// 6. robustness reproduction (scaled, stochastic)

void criterion6() {
    const auto t0 = std::chrono::steady_clock::now();
    const NoiseLadder ladder = NoiseLadder::standard();
    const RotationSet rotations = RotationSet::standard();
    bool pass = true;
    std::ostringstream os;
    for (const auto& [shape, kind, label] :
         {std::tuple{BenchShape::hexagon, PrimitiveKind::segment, "hexagon/segment"},
          std::tuple{BenchShape::ellipse, PrimitiveKind::arc, "ellipse/arc"}}) {
        double alpha_sum = 0;
        double q_min = 1e9, q_max = -1e9;
        for (const std::uint64_t seed : {1ull, 2ull, 3ull}) {
            const RobustnessReport r = run_experiment(shape, kind, ladder, rotations, seed);
            alpha_sum += r.alpha.value();
            for (const double q : r.q_values) {
                q_min = std::min(q_min, q);
                q_max = std::max(q_max, q);
            }
        }
        const double mean_alpha = alpha_sum / 3.0;
        os << label << ": mean alpha=" << mean_alpha << " Q in [" << q_min << ", " << q_max
           << "]; ";
        if (mean_alpha > 0.3 || q_min < 0.6 || q_max > 2.0) pass = false;
    }
    const double dt = seconds_since(t0);
    os << dt << " s";
    if (dt >= 600.0) pass = false;
    report(6, pass, "robustness: " + os.str());
}

// --------------------------------------------------------------------------
// 7. Eq. (2) and the robustness definition, pure arithmetic

void criterion7() {
    bool pass = true;
    const auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12; };
    pass = pass && close(q_measure({6, 6, 6, 6, 6}, 6), 1.0);
    pass = pass && close(q_measure({6, 7, 6, 8, 6}, 6), 1.1);
    pass = pass && close(q_measure({4, 4, 4, 4, 4}, 4), 1.0);
    {
        const NoiseLadder ladder{{1, 3, 5, 7, 10}};
        const auto [alpha, sigma] = robustness({1.0, 1.1, 1.3, 1.2, 1.4}, ladder);
        pass = pass && close(alpha, 0.1) && close(sigma, 3.0);
        const auto [a0, s0] = robustness({1.0, 1.0, 1.0, 1.0, 1.0}, ladder);
        pass = pass && close(a0, 0.0) && close(s0, 1.0);
    }
    report(7, pass, "Eq.(2) and robustness arithmetic at 1e-12");
}

// --------------------------------------------------------------------------
// 8. determinism of the CLI commands

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion8() {
#ifndef ARCLINE_CLI_PATH
    report(8, false, "determinism: CLI path not configured");
#else
    const std::string tmp = std::filesystem::temp_directory_path().string();
    const std::string img_path = tmp + "/arcline_acc_star.pbm";
    {
        BinaryImage img(64, 64);
        for (int y = 28; y <= 35; ++y)
            for (int x = 8; x <= 55; ++x) img.set(x, y, true);
        for (int y = 8; y <= 55; ++y)
            for (int x = 28; x <= 35; ++x) img.set(x, y, true);
        save_pbm(img, img_path);
    }
    const std::string base = std::string(ARCLINE_CLI_PATH);
    bool pass = true;
    const auto sys = [](const std::string& cmd) {
        return WEXITSTATUS(std::system((cmd + " >/dev/null 2>&1").c_str()));
    };
    const std::string r1 = tmp + "/arcline_acc_r1.json", r2 = tmp + "/arcline_acc_r2.json";
    pass &= sys(base + " reconstruct --input " + img_path + " --kind segment --json " + r1) == 0;
    pass &= sys(base + " reconstruct --input " + img_path + " --kind segment --json " + r2) == 0;
    pass &= !slurp(r1).empty() && slurp(r1) == slurp(r2);
    const std::string b1 = tmp + "/arcline_acc_b1.json", b2 = tmp + "/arcline_acc_b2.json";
    const std::string bench_args = " bench --shape hexagon --kind segment --ladder 1,3 --seed 5";
    pass &= sys(base + bench_args + " --json " + b1) == 0;
    pass &= sys(base + bench_args + " --json " + b2) == 0;
    pass &= !slurp(b1).empty() && slurp(b1) == slurp(b2);
    for (const std::string& p : {img_path, r1, r2, b1, b2}) std::remove(p.c_str());
    report(8, pass, "determinism: byte-identical reconstruct and bench JSON");
#endif
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    if (failures == 0)
        std::cout << "all acceptance criteria passed\n";
    else
        std::cout << failures << " acceptance criteria failed\n";
    return failures == 0 ? 0 : 1;
}
