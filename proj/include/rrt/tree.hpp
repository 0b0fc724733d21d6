#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "rrt/rng.hpp"

namespace rrt {

using Vertex = std::uint32_t;  // 1-based labels, matching [n]

// Rooted labelled tree stored as a flat parent array. parent[root] == 0.
// Holds both random recursive trees (root 1, parent[v] < v) and the final
// tree of a coalescent run, where the root can be any vertex.
struct TreeTopology {
    std::vector<Vertex> parent;  // size n+1, index 0 unused
    Vertex root = 1;

    std::uint32_t n() const { return static_cast<std::uint32_t>(parent.size()) - 1; }
    bool is_increasing() const;  // root == 1 and parent[v] < v for all v != 1
};

struct VertexStats {
    std::uint32_t degree = 0;  // in-degree
    std::uint32_t depth = 0;   // edge distance to root
    Vertex label = 0;
};

// Attaches vertex m+1 to a uniform vertex of [m], for m = 1..n-1.
TreeTopology build_rrt(std::uint32_t n, Rng& rng);
// Same, reusing the storage of `t` (hot loops build millions of trees).
void build_rrt_into(TreeTopology& t, std::uint32_t n, Rng& rng);

std::uint32_t in_degree(const TreeTopology& t, Vertex v);
std::uint32_t depth(const TreeTopology& t, Vertex v);
std::uint32_t distance(const TreeTopology& t, Vertex u, Vertex v);
Vertex lca(const TreeTopology& t, Vertex u, Vertex v);

// Batch variants, O(n) total; used by the experiment drivers.
std::vector<std::uint32_t> in_degrees(const TreeTopology& t);
std::vector<std::uint32_t> depths(const TreeTopology& t);

// All vertices sorted by decreasing in-degree, ties permuted uniformly with
// `rng`. Returns (degree, depth, label) triples.
std::vector<VertexStats> top_degree_order(const TreeTopology& t, Rng& rng);

// Structural audit: single root, in-range parents, acyclic and connected.
// Throws InvalidState on violation.
void validate(const TreeTopology& t);

// CSV edge list "child,parent" with a header row. `comment` lines (if any)
// are emitted first, each prefixed with '#'.
void write_edge_csv(std::ostream& os, const TreeTopology& t,
                    const std::vector<std::string>& comments = {});

}  // namespace rrt
