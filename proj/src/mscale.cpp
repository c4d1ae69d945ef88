#include "arcline/mscale.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

namespace arcline {

namespace {

int floor_div(int a, int b) {
    int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

// Monotone-chain convex hull; tolerates duplicates, returns the full hull
// (counterclockwise, no collinear vertices).
std::vector<IVec2> convex_hull(std::span<const IVec2> pts) {
    std::vector<IVec2> p(pts.begin(), pts.end());
    std::sort(p.begin(), p.end(), [](IVec2 a, IVec2 b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    p.erase(std::unique(p.begin(), p.end()), p.end());
    const std::size_t n = p.size();
    if (n <= 2) return p;
    const auto cross3 = [](IVec2 o, IVec2 a, IVec2 b) {
        return static_cast<long long>(a.x - o.x) * (b.y - o.y) -
               static_cast<long long>(a.y - o.y) * (b.x - o.x);
    };
    std::vector<IVec2> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross3(hull[k - 2], hull[k - 1], p[i]) <= 0) --k;
        hull[k++] = p[i];
    }
    for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross3(hull[k - 2], hull[k - 1], p[i]) <= 0) --k;
        hull[k++] = p[i];
    }
    hull.resize(k - 1);
    return hull;
}

struct CandidateDir {
    int a, b;
};

void canonicalize(int& a, int& b) {
    if (a < 0 || (a == 0 && b < 0)) {
        a = -a;
        b = -b;
    }
}

bool try_direction(std::span<const IVec2> pts, int a, int b, DigitalStraightSegment* witness) {
    long long rmin = std::numeric_limits<long long>::max();
    long long rmax = std::numeric_limits<long long>::min();
    for (const IVec2& p : pts) {
        const long long r = static_cast<long long>(a) * p.x - static_cast<long long>(b) * p.y;
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
    }
    const long long width = static_cast<long long>(std::abs(a)) + std::abs(b);
    if (rmax - rmin > width - 1) return false;
    if (witness) {
        witness->a = a;
        witness->b = b;
        witness->mu = -rmin;
    }
    return true;
}

}  // namespace

namespace {

// shared by the public single-origin subsampling and the shifted covers the
// profile estimation averages over
DigitalContour subsample_shifted(const DigitalContour& contour, int h, int ox, int oy,
                                 std::vector<std::uint32_t>* index_map);

}  // namespace

DigitalContour subsample_with_map(const DigitalContour& contour, int h,
                                  std::vector<std::uint32_t>* index_map) {
    return subsample_shifted(contour, h, 0, 0, index_map);
}

namespace {

DigitalContour subsample_shifted(const DigitalContour& contour, int h, int ox, int oy,
                                 std::vector<std::uint32_t>* index_map) {
    if (h < 1) throw std::invalid_argument("subsample: h must be >= 1");
    DigitalContour out;
    out.orientation = contour.orientation;
    if (index_map) index_map->assign(contour.size(), 0);
    if (contour.points.empty()) return out;

    std::vector<IVec2> mapped(contour.size());
    for (std::size_t i = 0; i < contour.size(); ++i)
        mapped[i] = {floor_div(contour.points[i].x - ox, h),
                     floor_div(contour.points[i].y - oy, h)};

    // collapse consecutive duplicates, remembering where each input lands
    std::vector<IVec2> seq;
    std::vector<std::uint32_t> land(contour.size());
    for (std::size_t i = 0; i < mapped.size(); ++i) {
        if (seq.empty() || !(seq.back() == mapped[i])) seq.push_back(mapped[i]);
        land[i] = static_cast<std::uint32_t>(seq.size() - 1);
    }
    // re-close: the last run may equal the first point
    while (seq.size() > 1 && seq.back() == seq.front()) {
        const std::uint32_t dropped = static_cast<std::uint32_t>(seq.size() - 1);
        seq.pop_back();
        for (auto& l : land)
            if (l == dropped) l = 0;
    }

    std::vector<IVec2> distinct = seq;
    std::sort(distinct.begin(), distinct.end(), [](IVec2 a, IVec2 b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 4) return out;  // degenerate marker

    out.points = std::move(seq);
    if (index_map) *index_map = std::move(land);
    return out;
}

}  // namespace

DigitalContour subsample(const DigitalContour& contour, int h) {
    return subsample_with_map(contour, h, nullptr);
}

bool dss_recognizable(std::span<const IVec2> pts, DigitalStraightSegment* witness) {
    if (pts.empty()) return false;
    // Candidate directions: the axes plus one per convex-hull edge. The
    // minimal arithmetic width over directions is attained at one of these.
    std::vector<CandidateDir> cands = {{1, 0}, {0, 1}};
    const std::vector<IVec2> hull = convex_hull(pts);
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const IVec2 u = hull[i];
        const IVec2 v = hull[(i + 1) % hull.size()];
        int dx = v.x - u.x, dy = v.y - u.y;
        if (dx == 0 && dy == 0) continue;
        const int g = std::gcd(std::abs(dx), std::abs(dy));
        dx /= g;
        dy /= g;
        int a = dy, b = dx;  // a*dx - b*dy == 0 along the edge
        canonicalize(a, b);
        cands.push_back({a, b});
    }
    for (const CandidateDir& c : cands)
        if (try_direction(pts, c.a, c.b, witness)) return true;
    return false;
}

std::vector<DigitalStraightSegment> maximal_segments(const DigitalContour& contour) {
    const std::size_t n = contour.size();
    if (n < 4) throw std::invalid_argument("maximal_segments: contour shorter than 4 points");

    std::vector<IVec2> window;
    const auto recognizable = [&](std::size_t start, std::size_t len,
                                  DigitalStraightSegment* w) {
        window.clear();
        window.reserve(len);
        for (std::size_t t = 0; t < len; ++t) window.push_back(contour.points[(start + t) % n]);
        return dss_recognizable(window, w);
    };

    struct Span {
        std::size_t start, len;
        DigitalStraightSegment witness;
    };
    std::vector<Span> spans;
    std::size_t len = 1;
    for (std::size_t i = 0; i < n; ++i) {
        while (len < n && recognizable(i, len + 1, nullptr)) ++len;
        if (len == n) {
            DigitalStraightSegment w;
            recognizable(i, n, &w);
            w.first = 0;
            w.last = static_cast<std::uint32_t>(n - 1);
            return {w};
        }
        DigitalStraightSegment w;
        recognizable(i, len, &w);
        spans.push_back({i, len, w});
        if (len > 1) --len;  // window [i+1 .. j] stays recognizable
    }

    // keep only spans not contained in another span (cyclic containment)
    const auto contains = [&](const Span& big, const Span& small) {
        if (big.len < small.len) return false;
        const std::size_t off = (small.start + n - big.start) % n;
        return off + small.len <= big.len;
    };
    std::vector<DigitalStraightSegment> out;
    for (std::size_t i = 0; i < spans.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < spans.size() && !dominated; ++j) {
            if (i == j) continue;
            if (contains(spans[j], spans[i]) &&
                !(spans[i].len == spans[j].len && spans[i].start == spans[j].start))
                dominated = true;
        }
        if (!dominated) {
            DigitalStraightSegment seg = spans[i].witness;
            seg.first = static_cast<std::uint32_t>(spans[i].start);
            seg.last = static_cast<std::uint32_t>((spans[i].start + spans[i].len - 1) % n);
            out.push_back(seg);
        }
    }
    std::sort(out.begin(), out.end(), [](const DigitalStraightSegment& a,
                                         const DigitalStraightSegment& b) {
        return a.first < b.first;
    });
    return out;
}

std::vector<MultiScaleProfile> multiscale_profiles(const DigitalContour& contour, int max_scale) {
    const std::size_t n = contour.size();
    if (n < 4) throw std::invalid_argument("multiscale_profiles: contour shorter than 4 points");
    if (max_scale < 2) throw std::invalid_argument("multiscale_profiles: max_scale must be >= 2");

    std::vector<MultiScaleProfile> profiles(n);
    for (std::size_t i = 0; i < n; ++i) profiles[i].point_index = static_cast<std::uint32_t>(i);

    // Each scale averages the per-point mean segment length over all h*h
    // shifted subsampling covers; a single cover wiggles enough to trigger
    // the first-decrease rule spuriously inside heavy noise.
    std::vector<double> acc(n);
    for (int h = 1; h <= max_scale; ++h) {
        std::fill(acc.begin(), acc.end(), 0.0);
        int covers = 0;
        std::vector<std::uint32_t> map;
        for (int oy = 0; oy < h; ++oy) {
            for (int ox = 0; ox < h; ++ox) {
                const DigitalContour sub = subsample_shifted(contour, h, ox, oy, &map);
                if (sub.points.size() < 4) continue;  // this cover degenerates
                const std::size_t s = sub.points.size();
                const std::vector<DigitalStraightSegment> segs = maximal_segments(sub);
                std::vector<double> total(s, 0.0);
                std::vector<int> count(s, 0);
                for (const DigitalStraightSegment& seg : segs) {
                    const std::size_t len = (seg.last + s - seg.first) % s + 1;
                    for (std::size_t t = 0; t < len; ++t) {
                        const std::size_t idx = (seg.first + t) % s;
                        total[idx] += static_cast<double>(len);
                        ++count[idx];
                    }
                }
                for (std::size_t i = 0; i < n; ++i)
                    acc[i] += total[map[i]] / count[map[i]];
                ++covers;
            }
        }
        if (covers == 0) break;  // scale ladder exhausted
        for (std::size_t i = 0; i < n; ++i) {
            profiles[i].scales.push_back(h);
            profiles[i].mean_lengths.push_back(acc[i] / covers);
        }
    }
    return profiles;
}

int noise_level(const MultiScaleProfile& profile) {
    if (profile.scales.size() < 2 || profile.mean_lengths.size() != profile.scales.size())
        throw std::invalid_argument("noise_level: profile with < 2 entries");
    for (std::size_t i = 0; i + 1 < profile.mean_lengths.size(); ++i)
        if (profile.mean_lengths[i + 1] < profile.mean_lengths[i]) return profile.scales[i];
    return profile.scales.back();
}

namespace {

// Unimodal envelope: non-decreasing up to the profile maximum, then the
// running maximum of the tail. Measured profiles sag slightly before the
// noise hump; fed raw to the first-decrease rule those wiggles would place
// the noise level far below the actual noise amplitude.
MultiScaleProfile unimodal_envelope(const MultiScaleProfile& p) {
    MultiScaleProfile out = p;
    const std::size_t m = p.mean_lengths.size();
    std::size_t peak = 0;
    for (std::size_t i = 1; i < m; ++i)
        if (p.mean_lengths[i] > p.mean_lengths[peak]) peak = i;
    for (std::size_t i = 1; i <= peak; ++i)
        out.mean_lengths[i] = std::max(out.mean_lengths[i - 1], p.mean_lengths[i]);
    for (std::size_t i = m; i-- > peak + 1;) {
        const double tail_max =
            i + 1 < m ? std::max(p.mean_lengths[i], out.mean_lengths[i + 1]) : p.mean_lengths[i];
        out.mean_lengths[i] = tail_max;
    }
    return out;
}

}  // namespace

std::vector<Cell> meaningful_boxes(const DigitalContour& contour, int max_scale) {
    if (contour.size() < 4)
        throw std::invalid_argument("meaningful_boxes: degenerate subsampling at scale 1");
    const std::vector<MultiScaleProfile> profiles = multiscale_profiles(contour, max_scale);

    const std::size_t n = contour.size();
    std::vector<int> eta(n, 1);
    for (std::size_t i = 0; i < n; ++i)
        eta[i] = profiles[i].scales.size() >= 2 ? noise_level(unimodal_envelope(profiles[i])) : 1;

    const auto build = [&]() {
        std::vector<Cell> boxes;
        std::map<std::array<double, 3>, std::size_t> seen;  // (cx, cy, size) -> box
        for (std::size_t i = 0; i < n; ++i) {
            const IVec2 p = contour.points[i];
            const double cx = (floor_div(p.x, eta[i]) + 0.5) * eta[i];
            const double cy = (floor_div(p.y, eta[i]) + 0.5) * eta[i];
            const std::array<double, 3> key{cx, cy, static_cast<double>(eta[i])};
            auto it = seen.find(key);
            if (it == seen.end()) {
                Cell c;
                c.center = {cx, cy};
                c.size = {static_cast<double>(eta[i]), static_cast<double>(eta[i])};
                c.indices.push_back(static_cast<std::uint32_t>(i));
                seen.emplace(key, boxes.size());
                boxes.push_back(std::move(c));
            } else {
                boxes[it->second].indices.push_back(static_cast<std::uint32_t>(i));
            }
        }
        return boxes;
    };

    const auto lo = [](const Cell& c, int ax) {
        return ax == 0 ? c.center.x - c.size.x / 2 : c.center.y - c.size.y / 2;
    };
    const auto hi = [](const Cell& c, int ax) {
        return ax == 0 ? c.center.x + c.size.x / 2 : c.center.y + c.size.y / 2;
    };
    const auto contained = [&](const Cell& inner, const Cell& outer) {
        return lo(inner, 0) >= lo(outer, 0) && hi(inner, 0) <= hi(outer, 0) &&
               lo(inner, 1) >= lo(outer, 1) && hi(inner, 1) <= hi(outer, 1);
    };
    const auto overlaps = [&](const Cell& a, const Cell& b) {
        const double dx = (a.size.x + b.size.x) / 2 - std::abs(a.center.x - b.center.x);
        const double dy = (a.size.y + b.size.y) / 2 - std::abs(a.center.y - b.center.y);
        return dx > 0 && dy > 0;
    };

    // Boxes of different noise levels sit on different grids and can overlap
    // partially. The points of the smaller box are promoted to the larger
    // box's level until the collection tiles: a point overlapped by a
    // coarser box belongs to a region that is noisy at the coarser scale.
    std::vector<Cell> boxes;
    for (int round = 0;; ++round) {
        boxes = build();
        bool promoted = false;
        for (std::size_t i = 0; i < boxes.size() && !promoted; ++i) {
            for (std::size_t j = i + 1; j < boxes.size() && !promoted; ++j) {
                const Cell& a = boxes[i];
                const Cell& b = boxes[j];
                if (!overlaps(a, b)) continue;
                if (contained(a, b) || contained(b, a)) continue;  // handled by absorption
                const Cell& small = a.size.x <= b.size.x ? a : b;
                const Cell& big = a.size.x <= b.size.x ? b : a;
                for (const std::uint32_t idx : small.indices)
                    eta[idx] = std::max(eta[idx], static_cast<int>(big.size.x));
                promoted = true;
            }
        }
        if (!promoted) break;
        if (round > 16 * max_scale)
            throw std::logic_error("meaningful_boxes: overlap resolution did not settle");
    }

    // Absorption: a box fully contained in a larger one is merged into it.
    std::vector<std::size_t> order(boxes.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double sa = boxes[a].size.x * boxes[a].size.y;
        const double sb = boxes[b].size.x * boxes[b].size.y;
        return sa != sb ? sa > sb : a < b;
    });
    std::vector<char> dead(boxes.size(), 0);
    for (std::size_t oi = 0; oi < order.size(); ++oi) {
        const std::size_t big = order[oi];
        if (dead[big]) continue;
        for (std::size_t oj = oi + 1; oj < order.size(); ++oj) {
            const std::size_t small = order[oj];
            if (dead[small]) continue;
            if (contained(boxes[small], boxes[big])) {
                auto& dst = boxes[big].indices;
                dst.insert(dst.end(), boxes[small].indices.begin(), boxes[small].indices.end());
                dead[small] = 1;
            }
        }
    }

    std::vector<Cell> alive;
    for (std::size_t i = 0; i < boxes.size(); ++i)
        if (!dead[i]) alive.push_back(std::move(boxes[i]));
    for (Cell& c : alive) std::sort(c.indices.begin(), c.indices.end());
    return alive;
}

std::string boxes_to_json(const std::vector<Cell>& boxes) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Cell& c : boxes) {
        nlohmann::json j;
        j["cx"] = c.center.x;
        j["cy"] = c.center.y;
        j["lx"] = c.size.x;
        j["ly"] = c.size.y;
        j["indices"] = c.indices;
        arr.push_back(std::move(j));
    }
    return arr.dump(2);
}

}  // namespace arcline
