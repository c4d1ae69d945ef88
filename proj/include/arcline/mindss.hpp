#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "arcline/glp.hpp"

namespace arcline {

/// Cyclic index interval [i; j] (inclusive) over n constraints.
struct IndexInterval {
    std::uint32_t i = 0;
    std::uint32_t j = 0;
};

/// Circular-arc graph of the maximal primitives: one arc per primitive,
/// ordered by start index, no arc containing another, every constraint
/// index covered by at least one arc.
struct ArcGraph {
    std::uint32_t n = 0;
    std::vector<IndexInterval> arcs;
};

/// Minimal cycle: chosen arc indices in traversal order and one breakpoint
/// constraint between each consecutive pair.
struct PrimitiveCycle {
    std::vector<std::uint32_t> chosen;
    std::vector<std::uint32_t> breakpoints;

    std::size_t length() const { return chosen.size(); }
};

ArcGraph arc_graph_from_primitives(const std::vector<MaximalPrimitive>& prims, std::size_t n);

/// True when constraint index k lies on the cyclic interval.
bool arc_contains(const ArcGraph& g, const IndexInterval& arc, std::uint32_t k);

/// True when the two arcs share at least one constraint index.
bool arcs_overlap(const ArcGraph& g, const IndexInterval& a, const IndexInterval& b);

/// Farthest forward move with arc overlap: the last arc of the consecutive
/// next-scan from k that still overlaps arc k; k itself when no successor
/// overlaps.
std::uint32_t forward(const ArcGraph& g, std::uint32_t k);

/// Mirror of forward using previous-scans.
std::uint32_t backward(const ArcGraph& g, std::uint32_t k);

/// The interval [backward(forward(k)); forward(k)] intersects every cycle;
/// this returns the smallest one over all k (ties by smallest start index),
/// as the list of its arc indices.
std::vector<std::uint32_t> smallest_separator(const ArcGraph& g);

/// Minimal-length cycle of overlapping arcs covering all n constraints:
/// greedy forward iteration from every member of the smallest separator,
/// keeping the shortest closed result.
PrimitiveCycle min_cycle(const ArcGraph& g);

/// Exhaustive oracle, at most 14 arcs.
PrimitiveCycle brute_force_min_cycle(const ArcGraph& g);

/// Checks the PrimitiveCycle invariants against the graph.
bool cycle_valid(const ArcGraph& g, const PrimitiveCycle& c, std::string* why = nullptr);

/// Checks the ArcGraph invariants (coverage, ordering, no containment).
bool graph_valid(const ArcGraph& g, std::string* why = nullptr);

/// JSON dump: {length, chosen:[...], breakpoints:[...]}.
std::string cycle_to_json(const PrimitiveCycle& c);

}  // namespace arcline
