#include "arcline/bench.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace arcline {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kFitMargin = 12;  // >= the largest standard noise scale

Vec2 rotate(Vec2 p, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * p.x - s * p.y, s * p.x + c * p.y};
}

BinaryImage fill_shape(int image_size, double extent, const auto& inside) {
    if (image_size <= 0) throw std::invalid_argument("image size must be positive");
    if (2 * (extent + kFitMargin) > image_size)
        throw std::invalid_argument("shape exceeds image");
    BinaryImage img(image_size, image_size);
    const double c = (image_size - 1) / 2.0;
    for (int y = 0; y < image_size; ++y)
        for (int x = 0; x < image_size; ++x)
            if (inside(Vec2{x - c, y - c})) img.set(x, y, true);
    return img;
}

}  // namespace

RotationSet RotationSet::standard() {
    return {{0.0, kPi / 8, kPi / 4, 3 * kPi / 8, kPi / 2}};
}

BinaryImage make_hexagon(double radius, double angle, int image_size) {
    if (radius <= 0) throw std::invalid_argument("make_hexagon: radius must be positive");
    // half-plane test against the 6 edges of the rotated regular hexagon
    std::vector<Vec2> verts(6);
    for (int k = 0; k < 6; ++k) {
        const double a = angle + k * kPi / 3;
        verts[k] = {radius * std::cos(a), radius * std::sin(a)};
    }
    return fill_shape(image_size, radius, [&](Vec2 p) {
        for (int k = 0; k < 6; ++k) {
            const Vec2 u = verts[k];
            const Vec2 v = verts[(k + 1) % 6];
            if (cross(v - u, p - u) < 0) return false;
        }
        return true;
    });
}

BinaryImage make_ellipse(double a, double b, double angle, int image_size) {
    if (a <= 0 || b <= 0) throw std::invalid_argument("make_ellipse: degenerate axis");
    return fill_shape(image_size, std::max(a, b), [&](Vec2 p) {
        const Vec2 q = rotate(p, -angle);
        const double u = q.x / a, v = q.y / b;
        return u * u + v * v <= 1.0;
    });
}

BinaryImage kanungo_noise_raw(const BinaryImage& img, double scale, std::uint64_t seed) {
    const double q = scale / 20.0;
    if (q >= 1.0) throw std::invalid_argument("kanungo_noise: flip probability >= 1");
    if (q <= 0.0) return img;

    const std::vector<int> to_fg = chebyshev_distance_to(img, true);
    const std::vector<int> to_bg = chebyshev_distance_to(img, false);
    BinaryImage out = img;
    SplitMix64 rng(mix64(seed ^ 0x6b79a3f2d1c05e4bull));
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * img.width() + x;
            const int d = img.at(x, y) ? to_bg[i] : to_fg[i];
            const double p = std::pow(q, d);
            if (rng.uniform01() < p) out.set(x, y, !img.at(x, y));
        }
    }
    return out;
}

BinaryImage clean_binary(const BinaryImage& img) {
    int ncomp = 0;
    const std::vector<int> labels = label_components8(img, &ncomp);
    if (ncomp == 0) return img;
    std::vector<std::size_t> sizes(ncomp, 0);
    for (const int l : labels)
        if (l >= 0) ++sizes[l];
    const int keep = static_cast<int>(
        std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    BinaryImage out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            out.set(x, y, labels[static_cast<std::size_t>(y) * img.width() + x] == keep);

    // fill 4-connected background pockets below 9 pixels that do not touch
    // the border
    std::vector<int> bg(static_cast<std::size_t>(out.width()) * out.height(), -1);
    int nbg = 0;
    std::vector<IVec2> queue;
    std::vector<std::vector<IVec2>> members;
    std::vector<char> border;
    for (int y = 0; y < out.height(); ++y) {
        for (int x = 0; x < out.width(); ++x) {
            if (out.at(x, y) || bg[static_cast<std::size_t>(y) * out.width() + x] >= 0) continue;
            const int id = nbg++;
            members.emplace_back();
            border.push_back(false);
            bg[static_cast<std::size_t>(y) * out.width() + x] = id;
            queue.assign(1, {x, y});
            while (!queue.empty()) {
                const IVec2 p = queue.back();
                queue.pop_back();
                members[id].push_back(p);
                if (p.x == 0 || p.y == 0 || p.x == out.width() - 1 || p.y == out.height() - 1)
                    border[id] = true;
                constexpr int dx[4] = {1, -1, 0, 0};
                constexpr int dy[4] = {0, 0, 1, -1};
                for (int k = 0; k < 4; ++k) {
                    const int nx = p.x + dx[k], ny = p.y + dy[k];
                    if (!out.in_bounds(nx, ny) || out.at(nx, ny)) continue;
                    int& l = bg[static_cast<std::size_t>(ny) * out.width() + nx];
                    if (l < 0) {
                        l = id;
                        queue.push_back({nx, ny});
                    }
                }
            }
        }
    }
    for (int id = 0; id < nbg; ++id)
        if (!border[id] && members[id].size() < 9)
            for (const IVec2 p : members[id]) out.set(p.x, p.y, true);
    return out;
}

BinaryImage kanungo_noise(const BinaryImage& img, double scale, std::uint64_t seed) {
    return clean_binary(kanungo_noise_raw(img, scale, seed));
}

double q_measure(const std::vector<int>& counts, int p_star) {
    if (counts.size() != 5) throw std::invalid_argument("q_measure: exactly 5 counts expected");
    if (p_star <= 0) throw std::invalid_argument("q_measure: p_star must be positive");
    long long sum = 0;
    for (const int c : counts) {
        if (c < 1) throw std::invalid_argument("q_measure: counts must be >= 1");
        sum += c;
    }
    return static_cast<double>(sum) / (5.0 * p_star);
}

std::pair<double, double> robustness(const std::vector<double>& q_values,
                                     const NoiseLadder& ladder, bool absolute_dy) {
    if (q_values.size() != ladder.scales.size() || q_values.size() < 2)
        throw std::invalid_argument("robustness: need >= 2 scales");
    double alpha = -std::numeric_limits<double>::infinity();
    double sigma = ladder.scales.front();
    for (std::size_t k = 0; k + 1 < q_values.size(); ++k) {
        double dy = q_values[k + 1] - q_values[k];
        if (absolute_dy) dy = std::abs(dy);
        const double dx = std::abs(ladder.scales[k + 1] - ladder.scales[k]);
        const double r = dy / dx;
        if (r > alpha) {
            alpha = r;
            sigma = ladder.scales[k];
        }
    }
    return {alpha, sigma};
}

RobustnessReport run_experiment(BenchShape shape, PrimitiveKind kind, const NoiseLadder& ladder,
                                const RotationSet& rotations, std::uint64_t seed) {
    if (ladder.scales.empty() || rotations.angles.empty())
        throw std::invalid_argument("run_experiment: empty ladder or rotation set");
    for (std::size_t k = 0; k + 1 < ladder.scales.size(); ++k)
        if (!(ladder.scales[k] < ladder.scales[k + 1]))
            throw std::invalid_argument("run_experiment: ladder must be strictly increasing");

    constexpr int kImageSize = 160;
    constexpr double kHexRadius = 60.0;
    constexpr double kEllipseA = 60.0, kEllipseB = 40.0;

    RobustnessReport report;
    report.shape = shape;
    report.kind = kind;
    report.ladder = ladder;
    report.rotations = rotations;
    report.p_star = shape == BenchShape::hexagon ? 6 : 4;

    PipelineOptions options;
    options.kind = kind;

    for (std::size_t k = 0; k < ladder.scales.size(); ++k) {
        std::vector<int> row;
        for (std::size_t t = 0; t < rotations.angles.size(); ++t) {
            const double angle = rotations.angles[t];
            BinaryImage img = shape == BenchShape::hexagon
                                  ? make_hexagon(kHexRadius, angle, kImageSize)
                                  : make_ellipse(kEllipseA, kEllipseB, angle, kImageSize);
            const std::uint64_t cell_seed = mix64(seed ^ mix64(k * 1000003ull + t));
            img = kanungo_noise(img, ladder.scales[k], cell_seed);
            const std::vector<DigitalContour> contours = trace_contours(img);
            const DigitalContour* outer = nullptr;
            for (const DigitalContour& c : contours)
                if (c.orientation == Orientation::counterclockwise &&
                    (!outer || c.size() > outer->size()))
                    outer = &c;
            if (!outer)
                throw std::runtime_error("run_experiment: no contour at scale index " +
                                         std::to_string(k) + ", angle index " +
                                         std::to_string(t));
            try {
                const PipelineResult r = run_pipeline(img, *outer, options);
                row.push_back(static_cast<int>(r.reconstruction.primitives.size()));
            } catch (const std::exception& e) {
                throw std::runtime_error("run_experiment: scale index " + std::to_string(k) +
                                         ", angle index " + std::to_string(t) + ": " + e.what());
            }
        }
        report.counts.push_back(row);
        report.q_values.push_back(q_measure(row, report.p_star));
    }

    if (report.q_values.size() >= 2) {
        const auto [a, s] = robustness(report.q_values, ladder);
        report.alpha = a;
        report.sigma = s;
    }
    return report;
}

std::vector<ReferenceEntry> reference_table(PrimitiveKind kind) {
    if (kind == PrimitiveKind::segment) {
        return {
            {"DLL (segments)", 9.472, 3.0},
            {"Frechet distance (d=5)", 1.111, 5.0},
            {"Visual curvature", 0.278, 3.0},
            {"Frechet distance (d=30)", 0.111, 1.0},
            {"Ours (published)", 0.063, 1.0},
        };
    }
    return {
        {"DLL (arcs)", 6.8, 5.0},
        {"GMC (w=1)", 4.5, 1.0},
        {"BCCA (w=1)", 4.025, 1.0},
        {"Ours (published)", 0.05, 1.0},
        {"BCCA (w=30)", 0.05, 7.0},
        {"GMC (w=30)", 0.025, 1.0},
        {"BCCA (w=10)", 0.0, 1.0},
        {"GMC (w=10)", 0.0, 1.0},
    };
}

std::string report_to_json(const RobustnessReport& report) {
    nlohmann::json j;
    j["shape"] = report.shape == BenchShape::hexagon ? "hexagon" : "ellipse";
    j["kind"] = report.kind == PrimitiveKind::segment ? "segment" : "arc";
    j["scales"] = report.ladder.scales;
    j["angles"] = report.rotations.angles;
    j["p_star"] = report.p_star;
    j["counts"] = report.counts;
    j["q_values"] = report.q_values;
    if (report.alpha) j["alpha"] = *report.alpha;
    if (report.sigma) j["sigma"] = *report.sigma;
    nlohmann::json ref = nlohmann::json::array();
    for (const ReferenceEntry& e : reference_table(report.kind)) {
        nlohmann::json ej;
        ej["method"] = e.method;
        ej["alpha"] = e.alpha;
        ej["sigma"] = e.sigma;
        ref.push_back(std::move(ej));
    }
    j["reference"] = std::move(ref);
    return j.dump(2);
}

std::string report_to_csv(const RobustnessReport& report) {
    std::ostringstream os;
    os.precision(12);
    os << "scale,angle,count\n";
    for (std::size_t k = 0; k < report.counts.size(); ++k)
        for (std::size_t t = 0; t < report.counts[k].size(); ++t)
            os << report.ladder.scales[k] << "," << report.rotations.angles[t] << ","
               << report.counts[k][t] << "\n";
    os << "Q";
    for (const double q : report.q_values) os << "," << q;
    os << "\n";
    if (report.alpha) os << "alpha," << *report.alpha << "\n";
    if (report.sigma) os << "sigma," << *report.sigma << "\n";
    return os.str();
}

}  // namespace arcline
