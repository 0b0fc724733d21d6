#include "rrt/coalescent.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "rrt/errors.hpp"

namespace rrt {

namespace {

// Fenwick tree over the alive tree keys. The j trees present at step j are
// ordered by smallest-labelled vertex; merging the a-th and b-th (a < b)
// keeps the a-th key and removes the b-th, so an order-statistics structure
// over "key alive" flags yields the paper's ordering in O(log n) per step.
class AliveKeys {
  public:
    explicit AliveKeys(std::uint32_t n) : n_(n), tree_(n + 1, 0) {
        for (std::uint32_t i = 1; i <= n; ++i) {
            ++tree_[i];
            const std::uint32_t j = i + (i & -i);
            if (j <= n) tree_[j] += tree_[i];
        }
        top_ = 1;
        while ((top_ << 1) <= n_) top_ <<= 1;
    }

    void remove(std::uint32_t pos) {
        for (; pos <= n_; pos += pos & -pos) --tree_[pos];
    }

    // Key with rank r (1-based) among alive keys.
    std::uint32_t select(std::uint32_t r) const {
        std::uint32_t pos = 0;
        for (std::uint32_t step = top_; step; step >>= 1) {
            const std::uint32_t next = pos + step;
            if (next <= n_ && tree_[next] < r) {
                pos = next;
                r -= tree_[next];
            }
        }
        return pos + 1;
    }

  private:
    std::uint32_t n_;
    std::uint32_t top_;
    std::vector<std::uint32_t> tree_;
};

// Shared merge loop. `next_pair(j)` supplies ranks 1 <= a < b <= j;
// `next_flip(j, pa, pb)` the edge direction, where pa/pb are the keys
// (smallest labels) of the two merged trees. A true flip favours the
// a-side root.
template <class PairFn, class FlipFn>
CoalescentTrace run_core(std::uint32_t n, PairFn&& next_pair, FlipFn&& next_flip,
                         SelectionRecord* rec, std::uint32_t k) {
    if (n == 0) throw std::invalid_argument("run_coalescent: n must be >= 1");
    if (!rec) k = 0;
    if (rec) {
        if (k > n) throw std::invalid_argument("run_coalescent: k > n");
        rec->n = n;
        rec->k = k;
        rec->steps.assign(k, {});
        rec->flips.assign(k, {});
    }
    CoalescentTrace trace;
    trace.n = n;
    trace.merges.reserve(n - 1);
    trace.final_tree.parent.assign(n + 1, 0);
    trace.label_map.assign(n + 1, 0);

    AliveKeys alive(n);
    std::vector<Vertex> root_of(n + 1);
    std::iota(root_of.begin(), root_of.end(), Vertex{0});
    std::vector<Vertex> key(k + 1);
    std::iota(key.begin(), key.end(), Vertex{0});

    for (std::uint32_t j = n; j >= 2; --j) {
        const auto [a, b] = next_pair(j);
        const std::uint32_t pa = alive.select(a);
        const std::uint32_t pb = alive.select(b);
        const bool xi = next_flip(j, pa, pb);
        const Vertex ra = root_of[pa], rb = root_of[pb];
        const Vertex winner = xi ? ra : rb;
        const Vertex loser = xi ? rb : ra;
        trace.final_tree.parent[loser] = winner;
        trace.label_map[loser] = j;  // tail of the edge created at step j
        root_of[pa] = winner;
        for (std::uint32_t i = 1; i <= k; ++i) {
            if (key[i] == pa) {
                rec->steps[i - 1].push_back(j);
                rec->flips[i - 1].push_back(xi ? 0 : 1);
            } else if (key[i] == pb) {
                rec->steps[i - 1].push_back(j);
                rec->flips[i - 1].push_back(xi ? 1 : 0);
                key[i] = pa;
            }
        }
        alive.remove(pb);
        trace.merges.push_back(MergeStep{a, b, xi});
    }
    trace.final_tree.root = root_of[1];  // key 1 is never removed
    trace.label_map[trace.final_tree.root] = 1;
    return trace;
}

}  // namespace

CoalescentTrace run_coalescent(std::uint32_t n, Rng& rng, SelectionRecord* rec,
                               std::uint32_t k) {
    return run_core(
        n, [&rng](std::uint32_t j) { return rng.unordered_pair(j); },
        [&rng](std::uint32_t, std::uint32_t, std::uint32_t) { return rng.coin(); }, rec, k);
}

CoalescentTrace run_coalescent_with(std::uint32_t n, std::span<const MergeStep> merges,
                                    SelectionRecord* rec, std::uint32_t k) {
    if (n == 0) throw std::invalid_argument("run_coalescent_with: n must be >= 1");
    if (merges.size() != static_cast<std::size_t>(n) - 1)
        throw std::invalid_argument("run_coalescent_with: need exactly n-1 merges");
    for (std::uint32_t j = n; j >= 2; --j) {
        const auto& m = merges[n - j];
        if (m.a < 1 || m.a >= m.b || m.b > j)
            throw std::invalid_argument("run_coalescent_with: merge ranks out of range");
    }
    return run_core(
        n,
        [&merges, n](std::uint32_t j) {
            const auto& m = merges[n - j];
            return std::pair<std::uint32_t, std::uint32_t>{m.a, m.b};
        },
        [&merges, n](std::uint32_t j, std::uint32_t, std::uint32_t) { return merges[n - j].xi; },
        rec, k);
}

TreeTopology relabelled(const CoalescentTrace& trace) {
    const std::uint32_t n = trace.n;
    TreeTopology out;
    out.parent.assign(n + 1, 0);
    out.root = 1;
    for (Vertex v = 1; v <= n; ++v)
        if (v != trace.final_tree.root)
            out.parent[trace.label_map[v]] = trace.label_map[trace.final_tree.parent[v]];
    return out;
}

namespace {

void check_record(const SelectionRecord& rec) {
    if (rec.n == 0 || rec.steps.size() != rec.k || rec.flips.size() != rec.k)
        throw InvalidState("selection record incomplete");
    for (std::uint32_t i = 0; i < rec.k; ++i)
        if (rec.steps[i].size() != rec.flips[i].size())
            throw InvalidState("selection record incomplete: steps/flips mismatch");
}

}  // namespace

VertexStats stats_from_flips(const SelectionRecord& rec, std::uint32_t i) {
    check_record(rec);
    if (i < 1 || i > rec.k) throw std::invalid_argument("stats_from_flips: vertex not tracked");
    const auto& flips = rec.flips[i - 1];
    const auto& steps = rec.steps[i - 1];
    VertexStats s;
    s.label = 1;  // h_{i,1} = 1 convention: the final root gets label 1
    bool in_streak = true;
    for (std::size_t m = 0; m < flips.size(); ++m) {
        if (flips[m]) {
            ++s.depth;
            if (in_streak) {
                s.label = steps[m];
                in_streak = false;
            }
        } else if (in_streak) {
            ++s.degree;
        }
    }
    return s;
}

std::uint32_t tau(const SelectionRecord& rec) {
    check_record(rec);
    if (rec.k < 2) throw std::invalid_argument("tau: need at least two tracked vertices");
    // steps lists are in decreasing order; scan them in lockstep from the top
    std::vector<std::size_t> at(rec.k, 0);
    for (std::uint32_t j = rec.n; j >= 2; --j) {
        std::uint32_t selected = 0;
        for (std::uint32_t i = 0; i < rec.k; ++i) {
            if (at[i] < rec.steps[i].size() && rec.steps[i][at[i]] == j) {
                ++selected;
                ++at[i];
            }
        }
        if (selected >= 2) return j;
    }
    return 0;
}

TruncatedView truncate(const SelectionRecord& rec, std::uint32_t t_n) {
    check_record(rec);
    if (t_n < 2 || t_n > rec.n) throw std::invalid_argument("truncate: t_n out of range");
    TruncatedView view;
    view.t_n = t_n;
    view.s1.resize(rec.k);
    view.h1.assign(rec.k, 0);
    view.h2.assign(rec.k, 0);
    for (std::uint32_t i = 0; i < rec.k; ++i) {
        const auto& steps = rec.steps[i];
        const auto& flips = rec.flips[i];
        std::size_t m = 0;
        for (; m < steps.size() && steps[m] >= t_n; ++m) {
            view.s1[i].push_back(steps[m]);
            view.h1[i] += flips[m];
        }
        for (; m < steps.size(); ++m) view.h2[i] += flips[m];
    }
    return view;
}

bool predicate_B(std::span<const std::vector<std::uint32_t>> sets, std::uint32_t n,
                 double delta) {
    if (!(delta > 0.0 && delta < 2.0))
        throw std::invalid_argument("predicate_B: delta must lie in (0,2)");
    const double logn = std::log(static_cast<double>(n));
    std::vector<std::uint32_t> all;
    for (const auto& J : sets) {
        if (std::abs(static_cast<double>(J.size()) - 2.0 * logn) > delta * logn) return false;
        all.insert(all.end(), J.begin(), J.end());
    }
    std::sort(all.begin(), all.end());
    return std::adjacent_find(all.begin(), all.end()) == all.end();
}

CoalescentTrace sample_conditional_degrees(std::uint32_t n, std::uint32_t k,
                                           std::span<const std::uint32_t> d, Rng& rng,
                                           SelectionRecord* rec, std::uint64_t budget) {
    if (n == 0) throw std::invalid_argument("sample_conditional_degrees: n must be >= 1");
    if (k < 1 || k > n) throw std::invalid_argument("sample_conditional_degrees: bad k");
    if (d.size() != k) throw std::invalid_argument("sample_conditional_degrees: |d| != k");
    std::uint64_t dsum = 0;
    for (auto di : d) dsum += di;
    if (dsum > static_cast<std::uint64_t>(n) - 1)
        throw UnsatisfiableCondition(
            "sample_conditional_degrees: degree thresholds exceed total degree n-1");

    std::vector<MergeStep> pairs(n - 1);
    std::vector<Vertex> key(k + 1);
    std::vector<std::uint32_t> selections(k + 1);
    // forced_for[j] = tracked vertex whose zero-streak covers step j (0 = none)
    std::vector<std::uint32_t> forced_for(n + 1);

    for (std::uint64_t attempt = 0; attempt < budget; ++attempt) {
        // Pass 1: selection structure only. Tree membership does not depend
        // on the flips, so tracked keys can be evolved without them. The
        // attempt is viable iff every tracked vertex is selected at least
        // d[i] times and the first d[i] selection steps are pairwise
        // disjoint across tracked vertices; overlapping streaks make the
        // event impossible, so they are discarded, not reweighted.
        AliveKeys alive(n);
        std::iota(key.begin(), key.end(), Vertex{0});
        std::fill(selections.begin(), selections.end(), 0);
        std::fill(forced_for.begin(), forced_for.end(), 0);
        bool ok = true;
        for (std::uint32_t j = n; j >= 2 && ok; --j) {
            const auto [a, b] = rng.unordered_pair(j);
            pairs[n - j] = MergeStep{a, b, false};
            const std::uint32_t pa = alive.select(a);
            const std::uint32_t pb = alive.select(b);
            for (std::uint32_t i = 1; i <= k; ++i) {
                if (key[i] != pa && key[i] != pb) continue;
                if (selections[i] < d[i - 1]) {
                    if (forced_for[j] != 0) {
                        ok = false;
                        break;
                    }
                    forced_for[j] = i;
                }
                ++selections[i];
                if (key[i] == pb) key[i] = pa;
            }
            alive.remove(pb);
        }
        if (ok)
            for (std::uint32_t i = 1; i <= k; ++i)
                if (selections[i] < d[i - 1]) ok = false;
        if (!ok) continue;

        // Pass 2: replay the merges; flips along the streaks are forced to
        // favour the respective vertex, the rest are fair. The callback keeps
        // its own copy of the tracked keys to know which side the forced
        // vertex sits on.
        std::vector<Vertex> ckey(k + 1);
        std::iota(ckey.begin(), ckey.end(), Vertex{0});
        SelectionRecord local;
        SelectionRecord* out = rec ? rec : &local;
        return run_core(
            n,
            [&pairs, n](std::uint32_t j) {
                const auto& m = pairs[n - j];
                return std::pair<std::uint32_t, std::uint32_t>{m.a, m.b};
            },
            [&](std::uint32_t j, std::uint32_t pa, std::uint32_t pb) -> bool {
                bool xi;
                if (const std::uint32_t i = forced_for[j]; i != 0)
                    xi = (ckey[i] == pa);  // edge towards vertex i's root
                else
                    xi = rng.coin();
                for (std::uint32_t i = 1; i <= k; ++i)
                    if (ckey[i] == pb) ckey[i] = pa;
                return xi;
            },
            out, k);
    }
    throw UnsatisfiableCondition("sample_conditional_degrees: rejection budget exhausted");
}

void write_trace_jsonl(std::ostream& os, const CoalescentTrace& trace) {
    for (std::uint32_t idx = 0; idx < trace.merges.size(); ++idx) {
        const auto& m = trace.merges[idx];
        os << "{\"step\":" << (trace.n - idx) << ",\"a\":" << m.a << ",\"b\":" << m.b
           << ",\"xi\":" << (m.xi ? 1 : 0) << "}\n";
    }
}

}  // namespace rrt
