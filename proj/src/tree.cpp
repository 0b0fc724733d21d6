#include "rrt/tree.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

#include "rrt/errors.hpp"

namespace rrt {

namespace {

void check_vertex(const TreeTopology& t, Vertex v, const char* what) {
    if (v < 1 || v > t.n()) throw std::invalid_argument(std::string(what) + ": vertex out of range");
}

}  // namespace

bool TreeTopology::is_increasing() const {
    if (root != 1) return false;
    for (Vertex v = 2; v <= n(); ++v)
        if (parent[v] >= v) return false;
    return true;
}

void build_rrt_into(TreeTopology& t, std::uint32_t n, Rng& rng) {
    if (n == 0) throw std::invalid_argument("build_rrt: n must be >= 1");
    t.parent.assign(n + 1, 0);
    t.root = 1;
    for (std::uint32_t m = 1; m < n; ++m)
        t.parent[m + 1] = static_cast<Vertex>(rng.below(m)) + 1;
}

TreeTopology build_rrt(std::uint32_t n, Rng& rng) {
    TreeTopology t;
    build_rrt_into(t, n, rng);
    return t;
}

std::uint32_t in_degree(const TreeTopology& t, Vertex v) {
    check_vertex(t, v, "in_degree");
    std::uint32_t d = 0;
    for (Vertex u = 1; u <= t.n(); ++u)
        if (u != t.root && t.parent[u] == v) ++d;
    return d;
}

std::uint32_t depth(const TreeTopology& t, Vertex v) {
    check_vertex(t, v, "depth");
    std::uint32_t d = 0;
    while (v != t.root) {
        v = t.parent[v];
        ++d;
    }
    return d;
}

Vertex lca(const TreeTopology& t, Vertex u, Vertex v) {
    check_vertex(t, u, "lca");
    check_vertex(t, v, "lca");
    std::uint32_t du = depth(t, u), dv = depth(t, v);
    while (du > dv) {
        u = t.parent[u];
        --du;
    }
    while (dv > du) {
        v = t.parent[v];
        --dv;
    }
    while (u != v) {
        u = t.parent[u];
        v = t.parent[v];
    }
    return u;
}

std::uint32_t distance(const TreeTopology& t, Vertex u, Vertex v) {
    const Vertex a = lca(t, u, v);
    return depth(t, u) + depth(t, v) - 2 * depth(t, a);
}

std::vector<std::uint32_t> in_degrees(const TreeTopology& t) {
    std::vector<std::uint32_t> deg(t.n() + 1, 0);
    for (Vertex v = 1; v <= t.n(); ++v)
        if (v != t.root) ++deg[t.parent[v]];
    return deg;
}

std::vector<std::uint32_t> depths(const TreeTopology& t) {
    const std::uint32_t n = t.n();
    std::vector<std::uint32_t> dep(n + 1, 0);
    if (t.is_increasing()) {
        // parent[v] < v, so one forward pass settles every vertex
        for (Vertex v = 2; v <= n; ++v) dep[v] = dep[t.parent[v]] + 1;
        return dep;
    }
    std::vector<bool> known(n + 1, false);
    known[t.root] = true;
    std::vector<Vertex> path;
    for (Vertex v = 1; v <= n; ++v) {
        Vertex u = v;
        path.clear();
        while (!known[u]) {
            path.push_back(u);
            u = t.parent[u];
        }
        std::uint32_t d = dep[u];
        for (auto it = path.rbegin(); it != path.rend(); ++it) {
            dep[*it] = ++d;
            known[*it] = true;
        }
    }
    return dep;
}

std::vector<VertexStats> top_degree_order(const TreeTopology& t, Rng& rng) {
    const std::uint32_t n = t.n();
    const auto deg = in_degrees(t);
    const auto dep = depths(t);
    std::vector<Vertex> order(n);
    std::iota(order.begin(), order.end(), Vertex{1});
    // uniform permutation first, then a stable sort: ties end up in uniform
    // random relative order, reproducible from rng
    for (std::uint32_t i = n; i > 1; --i)
        std::swap(order[i - 1], order[rng.below(i)]);
    std::stable_sort(order.begin(), order.end(),
                     [&deg](Vertex a, Vertex b) { return deg[a] > deg[b]; });
    std::vector<VertexStats> out(n);
    for (std::uint32_t i = 0; i < n; ++i)
        out[i] = VertexStats{deg[order[i]], dep[order[i]], order[i]};
    return out;
}

void validate(const TreeTopology& t) {
    const std::uint32_t n = t.n();
    if (n == 0) throw InvalidState("validate: empty tree");
    if (t.root < 1 || t.root > n) throw InvalidState("validate: root out of range");
    if (t.parent[t.root] != 0) throw InvalidState("validate: root has a parent");
    std::uint64_t edges = 0;
    for (Vertex v = 1; v <= n; ++v) {
        if (v == t.root) continue;
        if (t.parent[v] < 1 || t.parent[v] > n) throw InvalidState("validate: parent out of range");
        ++edges;
    }
    if (edges != static_cast<std::uint64_t>(n) - 1) throw InvalidState("validate: edge count");
    // every vertex must reach the root (this also rules out cycles)
    std::vector<std::uint8_t> state(n + 1, 0);  // 0 unknown, 1 on path, 2 ok
    state[t.root] = 2;
    std::vector<Vertex> path;
    for (Vertex v = 1; v <= n; ++v) {
        Vertex u = v;
        path.clear();
        while (state[u] == 0) {
            state[u] = 1;
            path.push_back(u);
            u = t.parent[u];
        }
        if (state[u] == 1) throw InvalidState("validate: cycle detected");
        for (Vertex w : path) state[w] = 2;
    }
}

void write_edge_csv(std::ostream& os, const TreeTopology& t,
                    const std::vector<std::string>& comments) {
    for (const auto& c : comments) os << "# " << c << "\n";
    os << "child,parent\n";
    for (Vertex v = 1; v <= t.n(); ++v)
        if (v != t.root) os << v << ',' << t.parent[v] << "\n";
}

}  // namespace rrt
