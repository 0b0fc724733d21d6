#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "rrt/rng.hpp"
#include "rrt/tree.hpp"

namespace rrt {

// One merge of the Kingman n-coalescent. At step j (j = n down to 2) the
// a-th and b-th of the j current trees are merged, trees ordered by their
// smallest-labelled vertex; xi = true directs the new edge towards the root
// of tree a (tree a "wins"), xi = false towards the root of tree b.
struct MergeStep {
    std::uint32_t a = 0;  // 1 <= a < b <= j
    std::uint32_t b = 0;
    bool xi = false;
};

// Full record of one coalescent run. merges[0] is step n, merges.back() is
// step 2. final_tree keeps the original vertex identities (edges towards the
// root); label_map[v] is the label vertex v receives in the relabelled tree,
// i.e. the random-recursive-tree label of v.
struct CoalescentTrace {
    std::uint32_t n = 0;
    std::vector<MergeStep> merges;
    TreeTopology final_tree;
    std::vector<Vertex> label_map;  // size n+1; bijection [n] -> [n]
};

// Selection sets and coin flips of the tracked vertices {1..k}.
// steps[i] lists the steps at which vertex i+1's tree was one of the merged
// pair, in decreasing order; flips[i][m] is 1 when the edge created at
// steps[i][m] pointed away from that tree's root (the depth of vertex i+1
// increased).
struct SelectionRecord {
    std::uint32_t n = 0;
    std::uint32_t k = 0;
    std::vector<std::vector<std::uint32_t>> steps;
    std::vector<std::vector<std::uint8_t>> flips;
};

struct TruncatedView {
    std::uint32_t t_n = 0;
    std::vector<std::vector<std::uint32_t>> s1;  // per vertex, steps >= t_n
    std::vector<std::uint32_t> h1;               // flips summed over s1
    std::vector<std::uint32_t> h2;               // remaining depth, below t_n
};

// Runs the coalescent with fair merges and flips. When `rec` is non-null the
// selections/flips of vertices {1..k} are recorded into it.
CoalescentTrace run_coalescent(std::uint32_t n, Rng& rng,
                               SelectionRecord* rec = nullptr, std::uint32_t k = 0);

// Deterministic replay for injected merge/flip lists (tests, enumeration).
CoalescentTrace run_coalescent_with(std::uint32_t n, std::span<const MergeStep> merges,
                                    SelectionRecord* rec = nullptr, std::uint32_t k = 0);

// Relabels the final tree by label_map; the result is an increasing tree with
// the law of a random recursive tree.
TreeTopology relabelled(const CoalescentTrace& trace);

// Reads (degree, depth, label) of tracked vertex i from the flips alone:
// degree = length of the leading run of zeros, depth = number of ones,
// label = the step of the earliest one (largest step), or 1 if none.
VertexStats stats_from_flips(const SelectionRecord& rec, std::uint32_t i);

// Largest step at which two distinct tracked vertices were both selected;
// 0 if that never happens. Requires k >= 2.
std::uint32_t tau(const SelectionRecord& rec);

TruncatedView truncate(const SelectionRecord& rec, std::uint32_t t_n);

// True iff the given truncated selection sets are pairwise disjoint and every
// cardinality is within delta*log(n) of 2*log(n) (natural log).
bool predicate_B(std::span<const std::vector<std::uint32_t>> sets, std::uint32_t n,
                 double delta);

// Samples the coalescent conditioned on {d_n(i) >= d[i] for i in [k]}.
// Selections are drawn first; if the first d[i] selection steps of the
// tracked vertices are pairwise disjoint, those flips are forced in favour of
// the respective vertex and the rest drawn fair, which realises the exact
// conditional law (overlapping first-selections are incompatible with the
// event, so discarding them loses no mass). Retries up to `budget` times
// before reporting the condition unsatisfiable.
CoalescentTrace sample_conditional_degrees(std::uint32_t n, std::uint32_t k,
                                           std::span<const std::uint32_t> d, Rng& rng,
                                           SelectionRecord* rec = nullptr,
                                           std::uint64_t budget = 1'000'000);

// Debug-only serialization: one JSON object per merge with fields
// step, a, b, xi. Not a stability-guaranteed format.
void write_trace_jsonl(std::ostream& os, const CoalescentTrace& trace);

}  // namespace rrt
