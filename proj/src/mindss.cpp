#include "arcline/mindss.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

namespace arcline {

namespace {

std::uint32_t span_len(const ArcGraph& g, const IndexInterval& a) {
    return (a.j + g.n - a.i) % g.n + 1;
}

struct Coverage {
    explicit Coverage(std::uint32_t n) : bits(n, 0), missing(n) {}

    void add(const ArcGraph& g, const IndexInterval& a) {
        const std::uint32_t len = span_len(g, a);
        for (std::uint32_t t = 0; t < len; ++t) {
            const std::uint32_t k = (a.i + t) % g.n;
            if (!bits[k]) {
                bits[k] = 1;
                --missing;
            }
        }
    }

    bool complete() const { return missing == 0; }

    std::vector<char> bits;
    std::uint32_t missing;
};

std::uint32_t breakpoint_for(const ArcGraph& g, std::uint32_t a, std::uint32_t b) {
    // first constraint of the successor's span; when the pair closes the
    // cycle through a wrap the predecessor's start is used instead
    if (arc_contains(g, g.arcs[a], g.arcs[b].i)) return g.arcs[b].i;
    if (arc_contains(g, g.arcs[b], g.arcs[a].i)) return g.arcs[a].i;
    throw std::logic_error("breakpoint_for: arcs do not overlap");
}

PrimitiveCycle finish_cycle(const ArcGraph& g, std::vector<std::uint32_t> chosen) {
    PrimitiveCycle c;
    c.chosen = std::move(chosen);
    c.breakpoints.resize(c.chosen.size());
    for (std::size_t k = 0; k < c.chosen.size(); ++k)
        c.breakpoints[k] =
            breakpoint_for(g, c.chosen[k], c.chosen[(k + 1) % c.chosen.size()]);
    return c;
}

// A chain is geometrically realizable when adjacent breakpoints are
// distinct (a span needs at least two constraints). A pair of arcs sharing
// a single constraint cannot close a 2-cycle through it twice.
bool chain_realizable(const ArcGraph& g, const std::vector<std::uint32_t>& chain) {
    if (chain.size() < 2) return true;
    std::vector<std::uint32_t> bps(chain.size());
    for (std::size_t k = 0; k < chain.size(); ++k) {
        if (!arcs_overlap(g, g.arcs[chain[k]], g.arcs[chain[(k + 1) % chain.size()]]))
            return false;
        bps[k] = breakpoint_for(g, chain[k], chain[(k + 1) % chain.size()]);
    }
    for (std::size_t k = 0; k < bps.size(); ++k)
        if (bps[k] == bps[(k + 1) % bps.size()]) return false;
    return true;
}

}  // namespace

ArcGraph arc_graph_from_primitives(const std::vector<MaximalPrimitive>& prims, std::size_t n) {
    ArcGraph g;
    g.n = static_cast<std::uint32_t>(n);
    g.arcs.reserve(prims.size());
    for (const MaximalPrimitive& p : prims) g.arcs.push_back({p.i, p.j});
    return g;
}

bool arc_contains(const ArcGraph& g, const IndexInterval& arc, std::uint32_t k) {
    return (k + g.n - arc.i) % g.n <= (arc.j + g.n - arc.i) % g.n;
}

bool arcs_overlap(const ArcGraph& g, const IndexInterval& a, const IndexInterval& b) {
    return arc_contains(g, a, b.i) || arc_contains(g, b, a.i);
}

std::uint32_t forward(const ArcGraph& g, std::uint32_t k) {
    // scan successor arcs while they overlap T_k forward (their start lies
    // on T_k); an arc overlapping only across the wrap is a predecessor in
    // disguise and stops the scan
    const std::uint32_t m = static_cast<std::uint32_t>(g.arcs.size());
    std::uint32_t j = 0;
    while (j + 1 < m && arc_contains(g, g.arcs[k], g.arcs[(k + j + 1) % m].i)) ++j;
    return (k + j) % m;
}

std::uint32_t backward(const ArcGraph& g, std::uint32_t k) {
    const std::uint32_t m = static_cast<std::uint32_t>(g.arcs.size());
    std::uint32_t j = 0;
    while (j + 1 < m && arc_contains(g, g.arcs[k], g.arcs[(k + m - j - 1) % m].j)) ++j;
    return (k + m - j) % m;
}

std::vector<std::uint32_t> smallest_separator(const ArcGraph& g) {
    if (g.arcs.empty()) throw std::invalid_argument("smallest_separator: no arcs");
    const std::uint32_t m = static_cast<std::uint32_t>(g.arcs.size());
    std::uint32_t best_size = m + 1;
    std::uint32_t best_start = 0, best_end = 0;
    for (std::uint32_t k = 0; k < m; ++k) {
        const std::uint32_t fk = forward(g, k);
        const std::uint32_t bk = backward(g, fk);
        const std::uint32_t size = (fk + m - bk) % m + 1;
        if (size < best_size || (size == best_size && bk < best_start)) {
            best_size = size;
            best_start = bk;
            best_end = fk;
        }
    }
    std::vector<std::uint32_t> out;
    for (std::uint32_t t = 0; t < best_size; ++t) out.push_back((best_start + t) % m);
    (void)best_end;
    return out;
}

PrimitiveCycle min_cycle(const ArcGraph& g) {
    std::string why;
    if (!graph_valid(g, &why)) throw std::invalid_argument("min_cycle: invalid graph: " + why);
    const std::uint32_t m = static_cast<std::uint32_t>(g.arcs.size());

    const auto try_chain = [&](std::uint32_t s) -> std::vector<std::uint32_t> {
        std::vector<std::uint32_t> chain{s};
        Coverage cov(g.n);
        cov.add(g, g.arcs[s]);
        std::uint32_t cur = s;
        for (std::uint32_t guard = 0; guard <= m; ++guard) {
            if (cov.complete() && arcs_overlap(g, g.arcs[cur], g.arcs[s]) &&
                chain_realizable(g, chain))
                return chain;
            const std::uint32_t nxt = forward(g, cur);
            if (nxt == cur) break;
            chain.push_back(nxt);
            cov.add(g, g.arcs[nxt]);
            cur = nxt;
        }
        return {};
    };

    std::vector<std::uint32_t> best;
    for (const std::uint32_t s : smallest_separator(g)) {
        const std::vector<std::uint32_t> chain = try_chain(s);
        if (!chain.empty() && (best.empty() || chain.size() < best.size())) best = chain;
    }
    if (best.empty()) throw std::logic_error("min_cycle: no valid cycle found");
    return finish_cycle(g, std::move(best));
}

PrimitiveCycle brute_force_min_cycle(const ArcGraph& g) {
    const std::size_t m = g.arcs.size();
    if (m > 14) throw std::invalid_argument("brute_force_min_cycle: too many arcs");
    if (m == 0) throw std::invalid_argument("brute_force_min_cycle: no arcs");

    for (std::size_t size = 1; size <= m; ++size) {
        // lexicographic combinations of `size` arc indices
        std::vector<std::uint32_t> comb(size);
        std::iota(comb.begin(), comb.end(), 0);
        for (;;) {
            Coverage cov(g.n);
            for (const std::uint32_t a : comb) cov.add(g, g.arcs[a]);
            bool ok = cov.complete();
            for (std::size_t k = 0; ok && k < size; ++k)
                ok = arcs_overlap(g, g.arcs[comb[k]], g.arcs[comb[(k + 1) % size]]);
            if (ok && chain_realizable(g, comb)) return finish_cycle(g, comb);

            // next combination
            std::size_t pos = size;
            while (pos > 0 && comb[pos - 1] == m - size + pos - 1) --pos;
            if (pos == 0) break;
            ++comb[pos - 1];
            for (std::size_t q = pos; q < size; ++q) comb[q] = comb[q - 1] + 1;
        }
    }
    throw std::logic_error("brute_force_min_cycle: no valid cycle found");
}

bool cycle_valid(const ArcGraph& g, const PrimitiveCycle& c, std::string* why) {
    const auto bad = [&](const char* msg) {
        if (why) *why = msg;
        return false;
    };
    if (c.chosen.empty()) return bad("empty cycle");
    if (c.breakpoints.size() != c.chosen.size()) return bad("breakpoint count mismatch");
    Coverage cov(g.n);
    for (const std::uint32_t a : c.chosen) {
        if (a >= g.arcs.size()) return bad("arc index out of range");
        cov.add(g, g.arcs[a]);
    }
    if (!cov.complete()) return bad("union of chosen arcs does not cover all constraints");
    for (std::size_t k = 0; k < c.chosen.size(); ++k) {
        const std::uint32_t a = c.chosen[k];
        const std::uint32_t b = c.chosen[(k + 1) % c.chosen.size()];
        if (c.chosen.size() > 1 && !arcs_overlap(g, g.arcs[a], g.arcs[b]))
            return bad("consecutive chosen arcs do not overlap");
        const std::uint32_t bp = c.breakpoints[k];
        if (!arc_contains(g, g.arcs[a], bp) || !arc_contains(g, g.arcs[b], bp))
            return bad("breakpoint outside the overlap of its adjacent arcs");
        if (c.chosen.size() > 1 && bp == c.breakpoints[(k + 1) % c.breakpoints.size()])
            return bad("adjacent breakpoints coincide");
    }
    return true;
}

bool graph_valid(const ArcGraph& g, std::string* why) {
    const auto bad = [&](const char* msg) {
        if (why) *why = msg;
        return false;
    };
    if (g.n == 0) return bad("n == 0");
    if (g.arcs.empty()) return bad("no arcs");
    Coverage cov(g.n);
    for (const IndexInterval& a : g.arcs) {
        if (a.i >= g.n || a.j >= g.n) return bad("arc endpoint out of range");
        cov.add(g, a);
    }
    if (!cov.complete()) return bad("arcs do not cover all constraints");
    for (std::size_t k = 0; k + 1 < g.arcs.size(); ++k)
        if (g.arcs[k].i >= g.arcs[k + 1].i) return bad("arcs not ordered by start index");
    for (std::size_t a = 0; a < g.arcs.size(); ++a)
        for (std::size_t b = 0; b < g.arcs.size(); ++b) {
            if (a == b) continue;
            const std::uint32_t off = (g.arcs[b].i + g.n - g.arcs[a].i) % g.n;
            if (off + span_len(g, g.arcs[b]) <= span_len(g, g.arcs[a]))
                return bad("an arc contains another");
        }
    return true;
}

std::string cycle_to_json(const PrimitiveCycle& c) {
    nlohmann::json j;
    j["length"] = c.chosen.size();
    j["chosen"] = c.chosen;
    j["breakpoints"] = c.breakpoints;
    return j.dump(2);
}

}  // namespace arcline
