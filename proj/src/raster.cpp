#include "arcline/raster.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace arcline {

namespace {

constexpr int kDistInf = std::numeric_limits<int>::max() / 4;

// E, SE, S, SW, W, NW, N, NE — clockwise in the (x right, y down) frame.
constexpr int kDx8[8] = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr int kDy8[8] = {0, 1, 1, 1, 0, -1, -1, -1};

int dir_index(IVec2 from, IVec2 to) {
    for (int k = 0; k < 8; ++k) {
        if (from.x + kDx8[k] == to.x && from.y + kDy8[k] == to.y) return k;
    }
    throw std::logic_error("dir_index: pixels are not 8-adjacent");
}

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

// ---------------------------------------------------------------------------
// PNM parsing

struct PnmReader {
    std::istream& in;

    int next_header_int(const char* what) {
        // skip whitespace and '#' comments
        for (;;) {
            int c = in.peek();
            if (c == EOF) fail(std::string("malformed header: missing ") + what);
            if (c == '#') {
                std::string line;
                std::getline(in, line);
                continue;
            }
            if (std::isspace(c)) {
                in.get();
                continue;
            }
            break;
        }
        long long v = 0;
        if (!(in >> v)) fail(std::string("malformed header: bad ") + what);
        if (v < 0 || v > std::numeric_limits<int>::max())
            fail(std::string("malformed header: out-of-range ") + what);
        return static_cast<int>(v);
    }
};

BinaryImage read_p1(std::istream& in, int w, int h) {
    BinaryImage img(w, h);
    int got = 0;
    while (got < w * h) {
        int c = in.get();
        if (c == EOF) fail("malformed payload: truncated P1 data");
        if (std::isspace(c)) continue;
        if (c == '#') {
            std::string line;
            std::getline(in, line);
            continue;
        }
        if (c != '0' && c != '1') fail("malformed payload: bad P1 digit");
        img.set(got % w, got / w, c == '1');
        ++got;
    }
    return img;
}

BinaryImage read_p4(std::istream& in, int w, int h) {
    BinaryImage img(w, h);
    const int row_bytes = (w + 7) / 8;
    std::vector<char> row(row_bytes);
    for (int y = 0; y < h; ++y) {
        if (!in.read(row.data(), row_bytes)) fail("malformed payload: truncated P4 data");
        for (int x = 0; x < w; ++x) {
            const unsigned byte = static_cast<unsigned char>(row[x / 8]);
            img.set(x, y, (byte >> (7 - x % 8)) & 1u);
        }
    }
    return img;
}

BinaryImage read_p2(std::istream& in, int w, int h, int maxval) {
    BinaryImage img(w, h);
    for (int i = 0; i < w * h; ++i) {
        long long v;
        if (!(in >> v)) fail("malformed payload: truncated P2 data");
        if (v < 0 || v > maxval) fail("malformed payload: P2 sample out of range");
        img.set(i % w, i / w, v < 128);
    }
    return img;
}

BinaryImage read_p5(std::istream& in, int w, int h, int maxval) {
    if (maxval > 255) fail("malformed header: unsupported P5 maxval > 255");
    BinaryImage img(w, h);
    std::vector<char> row(w);
    for (int y = 0; y < h; ++y) {
        if (!in.read(row.data(), w)) fail("malformed payload: truncated P5 data");
        for (int x = 0; x < w; ++x)
            img.set(x, y, static_cast<unsigned char>(row[x]) < 128);
    }
    return img;
}

// ---------------------------------------------------------------------------
// Moore tracing

struct LabelGrid {
    const std::vector<int>& labels;
    int w, h, comp;

    bool member(IVec2 p) const {
        return p.x >= 0 && p.y >= 0 && p.x < w && p.y < h &&
               labels[static_cast<std::size_t>(p.y) * w + p.x] == comp;
    }
};

// Walks the boundary from `start` with initial backtrack `bt0`. The state
// (pixel, backtrack) evolves deterministically, so the walk is eventually
// periodic; tracing stops when a state repeats (Jacob's stopping criterion:
// the start pixel re-entered from the same direction). A transient prefix
// can occur on degenerate thin components and is dropped — only the
// periodic cycle is the boundary.
std::vector<IVec2> moore_walk(const LabelGrid& g, IVec2 start, IVec2 bt0) {
    struct State {
        IVec2 p, b;
        bool operator==(const State&) const = default;
    };
    const auto state_key = [&](const State& s) {
        const std::uint64_t a = static_cast<std::uint32_t>(s.p.y) * static_cast<std::uint64_t>(g.w) +
                                static_cast<std::uint32_t>(s.p.x);
        return a * 8 + static_cast<std::uint64_t>(dir_index(s.p, s.b));
    };
    std::vector<State> states;
    std::unordered_map<std::uint64_t, std::size_t> seen;
    states.push_back({start, bt0});
    seen.emplace(state_key(states[0]), 0);
    const std::size_t cap = 8ull * g.w * g.h + 16;
    for (;;) {
        const State cur = states.back();
        const int k0 = dir_index(cur.p, cur.b);
        IVec2 nbt = cur.b;
        bool found = false;
        State next{};
        for (int s = 1; s <= 8; ++s) {
            const int k = (k0 + s) % 8;
            const IVec2 p{cur.p.x + kDx8[k], cur.p.y + kDy8[k]};
            if (g.member(p)) {
                next = {p, nbt};
                found = true;
                break;
            }
            nbt = p;
        }
        if (!found) return {start};  // isolated pixel
        const auto it = seen.find(state_key(next));
        if (it != seen.end()) {
            std::vector<IVec2> walk;
            for (std::size_t s = it->second; s < states.size(); ++s) walk.push_back(states[s].p);
            return walk;
        }
        seen.emplace(state_key(next), states.size());
        states.push_back(next);
        if (states.size() > cap) throw std::logic_error("moore_walk: tracing did not terminate");
    }
}

// Removes out-and-back excursions (w[i-1] == w[i+1]) and consecutive
// duplicates, cyclically, until stable.
void collapse_spurs(std::vector<IVec2>& w) {
    bool changed = true;
    while (changed) {
        changed = false;
        // consecutive duplicates (cyclic)
        for (std::size_t i = 0; i < w.size();) {
            if (w.size() < 2) break;
            const std::size_t j = (i + 1) % w.size();
            if (w[i] == w[j]) {
                w.erase(w.begin() + static_cast<long>(j));
                changed = true;
            } else {
                ++i;
            }
        }
        if (w.size() < 3) break;
        for (std::size_t i = 0; i < w.size(); ++i) {
            const std::size_t prev = (i + w.size() - 1) % w.size();
            const std::size_t next = (i + 1) % w.size();
            if (w[prev] == w[next]) {
                w.erase(w.begin() + static_cast<long>(i));
                changed = true;
                break;
            }
        }
    }
}

struct IVec2Hash {
    std::size_t operator()(IVec2 p) const {
        return std::hash<long long>()((static_cast<long long>(p.x) << 32) ^
                                      static_cast<unsigned>(p.y));
    }
};

// Splits a closed walk with pinch points into simple cycles (loop erasure,
// emitting erased loops). Cycles shorter than 4 are dropped.
std::vector<std::vector<IVec2>> split_simple_cycles(const std::vector<IVec2>& walk) {
    std::vector<std::vector<IVec2>> out;
    std::vector<IVec2> stack;
    std::unordered_map<IVec2, std::size_t, IVec2Hash> pos;
    for (const IVec2& p : walk) {
        auto it = pos.find(p);
        if (it != pos.end()) {
            const std::size_t base = it->second;
            std::vector<IVec2> loop(stack.begin() + static_cast<long>(base), stack.end());
            if (loop.size() >= 4) out.push_back(loop);
            for (std::size_t k = base; k < stack.size(); ++k)
                if (!(stack[k] == p)) pos.erase(stack[k]);
            stack.resize(base);
        }
        pos[p] = stack.size();
        stack.push_back(p);
    }
    if (stack.size() >= 4) out.push_back(stack);
    return out;
}

void rotate_to_lexmin(std::vector<IVec2>& pts) {
    const auto cmp = [](IVec2 a, IVec2 b) {
        return a.y != b.y ? a.y < b.y : a.x < b.x;
    };
    auto it = std::min_element(pts.begin(), pts.end(), cmp);
    std::rotate(pts.begin(), it, pts.end());
}

DigitalContour finalize_contour(std::vector<IVec2> pts, bool outer) {
    const bool want_positive = outer;
    if ((signed_area2(pts) > 0) != want_positive) std::reverse(pts.begin(), pts.end());
    rotate_to_lexmin(pts);
    DigitalContour c;
    c.points = std::move(pts);
    c.orientation = outer ? Orientation::counterclockwise : Orientation::clockwise;
    return c;
}

}  // namespace

BinaryImage::BinaryImage(int width, int height, bool fill) {
    if (width <= 0 || height <= 0) fail("zero image dimensions");
    width_ = width;
    height_ = height;
    pixels_.assign(static_cast<std::size_t>(width) * height, fill ? 1 : 0);
}

std::size_t BinaryImage::foreground_count() const {
    return static_cast<std::size_t>(std::count(pixels_.begin(), pixels_.end(), 1));
}

BinaryImage load_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot open '" + path + "'");
    char m0 = 0, m1 = 0;
    in.get(m0);
    in.get(m1);
    if (!in || m0 != 'P') fail("malformed header: not a PNM file");

    PnmReader r{in};
    const int w = r.next_header_int("width");
    const int h = r.next_header_int("height");
    if (w == 0 || h == 0) fail("zero image dimensions");

    switch (m1) {
        case '1':
            return read_p1(in, w, h);
        case '4':
            in.get();  // single whitespace byte before payload
            return read_p4(in, w, h);
        case '2': {
            const int maxval = r.next_header_int("maxval");
            return read_p2(in, w, h, maxval);
        }
        case '5': {
            const int maxval = r.next_header_int("maxval");
            in.get();
            return read_p5(in, w, h, maxval);
        }
        default:
            fail("malformed header: unsupported PNM type");
    }
}

void save_pbm(const BinaryImage& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("cannot open '" + path + "' for writing");
    out << "P4\n" << img.width() << " " << img.height() << "\n";
    const int row_bytes = (img.width() + 7) / 8;
    std::vector<char> row(row_bytes);
    for (int y = 0; y < img.height(); ++y) {
        std::fill(row.begin(), row.end(), 0);
        for (int x = 0; x < img.width(); ++x)
            if (img.at(x, y)) row[x / 8] |= static_cast<char>(0x80u >> (x % 8));
        out.write(row.data(), row_bytes);
    }
    if (!out) fail("write failure on '" + path + "'");
}

long long signed_area2(const std::vector<IVec2>& pts) {
    long long acc = 0;
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i) {
        const IVec2 a = pts[i];
        const IVec2 b = pts[(i + 1) % n];
        acc += static_cast<long long>(a.x) * b.y - static_cast<long long>(b.x) * a.y;
    }
    return acc;
}

bool contour_valid(const DigitalContour& c, std::string* why) {
    const auto bad = [&](const char* msg) {
        if (why) *why = msg;
        return false;
    };
    const std::size_t n = c.points.size();
    if (n < 4) return bad("fewer than 4 points");
    std::unordered_map<IVec2, int, IVec2Hash> seen;
    for (std::size_t i = 0; i < n; ++i) {
        if (!seen.emplace(c.points[i], 1).second) return bad("repeated point");
        const IVec2 a = c.points[i];
        const IVec2 b = c.points[(i + 1) % n];
        const int d = std::max(std::abs(a.x - b.x), std::abs(a.y - b.y));
        if (d != 1) return bad("consecutive points not 8-adjacent");
    }
    const long long area = signed_area2(c.points);
    if (area == 0) return bad("zero area");
    const bool ccw = area > 0;
    if (ccw != (c.orientation == Orientation::counterclockwise))
        return bad("orientation tag does not match area sign");
    return true;
}

std::vector<int> label_components8(const BinaryImage& img, int* count) {
    const int w = img.width(), h = img.height();
    std::vector<int> labels(static_cast<std::size_t>(w) * h, -1);
    int next = 0;
    std::vector<IVec2> queue;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!img.at(x, y) || labels[static_cast<std::size_t>(y) * w + x] >= 0) continue;
            const int id = next++;
            queue.assign(1, {x, y});
            labels[static_cast<std::size_t>(y) * w + x] = id;
            while (!queue.empty()) {
                const IVec2 p = queue.back();
                queue.pop_back();
                for (int k = 0; k < 8; ++k) {
                    const int nx = p.x + kDx8[k], ny = p.y + kDy8[k];
                    if (!img.in_bounds(nx, ny) || !img.at(nx, ny)) continue;
                    int& l = labels[static_cast<std::size_t>(ny) * w + nx];
                    if (l < 0) {
                        l = id;
                        queue.push_back({nx, ny});
                    }
                }
            }
        }
    }
    if (count) *count = next;
    return labels;
}

std::vector<int> chebyshev_distance_to(const BinaryImage& img, bool target) {
    const int w = img.width(), h = img.height();
    std::vector<int> d(static_cast<std::size_t>(w) * h, kDistInf);
    const auto at = [&](int x, int y) -> int& {
        return d[static_cast<std::size_t>(y) * w + x];
    };
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (img.at(x, y) == target) at(x, y) = 0;
    // forward pass
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            int best = at(x, y);
            if (x > 0) best = std::min(best, at(x - 1, y) + 1);
            if (y > 0) {
                best = std::min(best, at(x, y - 1) + 1);
                if (x > 0) best = std::min(best, at(x - 1, y - 1) + 1);
                if (x + 1 < w) best = std::min(best, at(x + 1, y - 1) + 1);
            }
            at(x, y) = best;
        }
    }
    // backward pass
    for (int y = h - 1; y >= 0; --y) {
        for (int x = w - 1; x >= 0; --x) {
            int best = at(x, y);
            if (x + 1 < w) best = std::min(best, at(x + 1, y) + 1);
            if (y + 1 < h) {
                best = std::min(best, at(x, y + 1) + 1);
                if (x > 0) best = std::min(best, at(x - 1, y + 1) + 1);
                if (x + 1 < w) best = std::min(best, at(x + 1, y + 1) + 1);
            }
            at(x, y) = best;
        }
    }
    return d;
}

bool point_in_contour(const DigitalContour& c, Vec2 p) {
    const std::size_t n = c.points.size();
    // on-boundary points are reported as outside
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a{static_cast<double>(c.points[i].x), static_cast<double>(c.points[i].y)};
        const Vec2 b{static_cast<double>(c.points[(i + 1) % n].x),
                     static_cast<double>(c.points[(i + 1) % n].y)};
        const Vec2 ab = b - a, ap = p - a;
        if (std::abs(cross(ab, ap)) > 1e-12) continue;
        const double t = dot(ap, ab);
        if (t >= -1e-12 && t <= dot(ab, ab) + 1e-12) return false;
    }
    bool inside = false;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a{static_cast<double>(c.points[i].x), static_cast<double>(c.points[i].y)};
        const Vec2 b{static_cast<double>(c.points[(i + 1) % n].x),
                     static_cast<double>(c.points[(i + 1) % n].y)};
        if ((a.y > p.y) != (b.y > p.y)) {
            const double xint = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (p.x < xint) inside = !inside;
        }
    }
    return inside;
}

std::vector<DigitalContour> trace_contours(const BinaryImage& img) {
    std::vector<DigitalContour> out;
    if (img.empty() || img.foreground_count() == 0) return out;

    const int w = img.width(), h = img.height();
    int ncomp = 0;
    const std::vector<int> labels = label_components8(img, &ncomp);
    const auto label_at = [&](int x, int y) {
        return labels[static_cast<std::size_t>(y) * w + x];
    };

    const auto emit = [&](const std::vector<IVec2>& walk, bool outer) {
        std::vector<IVec2> copy = walk;
        collapse_spurs(copy);
        for (auto& cycle : split_simple_cycles(copy)) {
            DigitalContour c = finalize_contour(std::move(cycle), outer);
            if (contour_valid(c)) out.push_back(std::move(c));
        }
    };

    // outer boundaries, one per component, in label order
    std::vector<IVec2> starts(static_cast<std::size_t>(ncomp), {-1, -1});
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const int l = label_at(x, y);
            if (l >= 0 && starts[l].x < 0) starts[l] = {x, y};
        }
    for (int comp = 0; comp < ncomp; ++comp) {
        const IVec2 s = starts[comp];
        const LabelGrid g{labels, w, h, comp};
        emit(moore_walk(g, s, {s.x - 1, s.y}), /*outer=*/true);
    }

    // hole boundaries: 4-connected background components not touching the border
    std::vector<int> bg(static_cast<std::size_t>(w) * h, -1);
    int nbg = 0;
    std::vector<IVec2> queue;
    std::vector<char> touches_border;
    std::vector<IVec2> bg_start;
    constexpr int kDx4[4] = {1, -1, 0, 0};
    constexpr int kDy4[4] = {0, 0, 1, -1};
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (img.at(x, y) || bg[static_cast<std::size_t>(y) * w + x] >= 0) continue;
            const int id = nbg++;
            touches_border.push_back(false);
            bg_start.push_back({x, y});
            bg[static_cast<std::size_t>(y) * w + x] = id;
            queue.assign(1, {x, y});
            while (!queue.empty()) {
                const IVec2 p = queue.back();
                queue.pop_back();
                if (p.x == 0 || p.y == 0 || p.x == w - 1 || p.y == h - 1)
                    touches_border[id] = true;
                for (int k = 0; k < 4; ++k) {
                    const int nx = p.x + kDx4[k], ny = p.y + kDy4[k];
                    if (!img.in_bounds(nx, ny) || img.at(nx, ny)) continue;
                    int& l = bg[static_cast<std::size_t>(ny) * w + nx];
                    if (l < 0) {
                        l = id;
                        queue.push_back({nx, ny});
                    }
                }
            }
        }
    }
    for (int hole = 0; hole < nbg; ++hole) {
        if (touches_border[hole]) continue;
        const IVec2 b = bg_start[hole];     // topmost-leftmost hole pixel
        const IVec2 s{b.x, b.y - 1};        // foreground pixel above it
        const LabelGrid g{labels, w, h, label_at(s.x, s.y)};
        emit(moore_walk(g, s, b), /*outer=*/false);
    }
    return out;
}

}  // namespace arcline
