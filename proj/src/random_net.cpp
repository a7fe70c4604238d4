#include "phylo/random_net.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <set>
#include <stdexcept>
#include <string>

#include "phylo/decompose.hpp"

namespace phylo {

namespace {

/// Mutable arc-list representation used while growing a network. Arcs are
/// kept in construction order so every random draw is reproducible.
struct Growth {
    std::vector<ArcKey> arcs;
    std::map<VertexId, std::string> labels;
    std::mt19937_64 rng;
    int next_internal = 1;
    int next_leaf = 1;

    explicit Growth(std::uint64_t seed) : rng(seed) {}

    int pick(int n) {  // uniform index in [0, n)
        return static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(rng));
    }

    VertexId fresh_internal() { return "i" + std::to_string(next_internal++); }
    VertexId fresh_leaf() {
        VertexId v = "t" + std::to_string(next_leaf++);
        labels.emplace(v, v);
        return v;
    }

    /// Replaces arc index `i` by tail->s->head and returns s.
    VertexId subdivide(int i) {
        VertexId s = fresh_internal();
        ArcKey old = arcs[i];
        arcs[i] = ArcKey(old.tail, s);
        arcs.push_back(ArcKey(s, old.head));
        return s;
    }

    bool reaches(const VertexId& from, const VertexId& to) const {
        std::set<VertexId> seen{from};
        std::deque<VertexId> queue{from};
        while (!queue.empty()) {
            VertexId u = queue.front();
            queue.pop_front();
            if (u == to) return true;
            for (const ArcKey& a : arcs) {
                if (a.tail == u && seen.insert(a.head).second) queue.push_back(a.head);
            }
        }
        return false;
    }
};

}  // namespace

DirectedNetwork generate_random_directed(const GeneratorConfig& cfg) {
    const int n = cfg.leaf_count;
    const int level = cfg.target_level;
    const int k = cfg.target_reticulation_number;
    const auto [chain_lo, chain_hi] = cfg.chain_length_range;
    if (n < 2 || level < 0 || k < 0 || chain_lo < 0 || chain_hi < chain_lo) {
        throw std::invalid_argument("infeasible generator config: counts out of range");
    }
    if (k < level) {
        throw std::invalid_argument(
            "infeasible generator config: reticulation number below level");
    }
    if (k > 0 && level == 0) {
        throw std::invalid_argument(
            "infeasible generator config: reticulations always create a level-1 blob");
    }
    if (k > 0 && n < 3) {
        throw std::invalid_argument(
            "infeasible generator config: reticulations need at least 3 leaves");
    }

    Growth g(cfg.rng_seed);
    const VertexId rho = "rho";
    g.arcs.emplace_back(rho, g.fresh_leaf());
    g.arcs.emplace_back(rho, g.fresh_leaf());

    // Phase 1: random tree. When chains are requested, they fill the leaf
    // budget above a small base tree; otherwise plain leaf additions do.
    const int base_leaves = chain_hi > 0 ? std::min(n, 4) : n;
    int leaves = 2;
    while (leaves < base_leaves) {
        VertexId s = g.subdivide(g.pick(static_cast<int>(g.arcs.size())));
        g.arcs.emplace_back(s, g.fresh_leaf());
        ++leaves;
    }

    // Phase 2: reticulations. The first `level` of them draw both arcs
    // from the blob grown so far, fusing into one level-`level` blob; the
    // rest use the triangle pattern (two consecutive arcs), each of which
    // yields its own level-1 blob no matter where it lands.
    std::set<VertexId> blob;  // vertices of the big blob
    for (int r = 0; r < k; ++r) {
        const bool in_blob = r < level;
        bool placed = false;
        for (int attempt = 0; attempt < 64 * static_cast<int>(g.arcs.size()) && !placed;
             ++attempt) {
            if (in_blob && r > 0) {
                std::vector<int> candidates;
                for (std::size_t i = 0; i < g.arcs.size(); ++i) {
                    if (blob.count(g.arcs[i].tail) > 0 && blob.count(g.arcs[i].head) > 0) {
                        candidates.push_back(static_cast<int>(i));
                    }
                }
                if (candidates.size() < 2) break;
                int i1 = candidates[g.pick(static_cast<int>(candidates.size()))];
                int i2 = candidates[g.pick(static_cast<int>(candidates.size()))];
                if (i1 == i2) continue;
                // A cycle appears exactly when the second subdivider
                // reaches the first, i.e. head2 reaches tail1.
                if (g.arcs[i2].head == g.arcs[i1].tail ||
                    g.reaches(g.arcs[i2].head, g.arcs[i1].tail)) {
                    continue;
                }
                VertexId s1 = g.subdivide(i1);
                VertexId s2 = g.subdivide(i2);
                g.arcs.emplace_back(s1, s2);
            } else {
                // Seed insertion / triangle: subdivide a cut arc (u,v), then
                // a cut arc out of v, and join the subdividers. Always
                // acyclic (w cannot reach its ancestor u), and the new blob
                // {s1,v,s2} shares no edge with older blobs, so it stays a
                // separate level-1 blob instead of fusing into one.
                DirectedNetwork snapshot(g.arcs, g.labels);
                UnderlyingResult und = underlying_network(snapshot);
                BlobDecomposition dec = blob_decomposition(und.network);
                std::vector<std::set<VertexId>> blob_sets;
                for (const std::vector<VertexId>& vs : dec.blobs) {
                    blob_sets.emplace_back(vs.begin(), vs.end());
                }
                auto is_cut_arc = [&](const ArcKey& a) {
                    for (const std::set<VertexId>& vs : blob_sets) {
                        if (vs.count(a.tail) > 0 && vs.count(a.head) > 0) return false;
                    }
                    return true;
                };
                std::vector<int> firsts;
                for (std::size_t i = 0; i < g.arcs.size(); ++i) {
                    if (!is_cut_arc(g.arcs[i])) continue;
                    for (const ArcKey& b : g.arcs) {
                        if (b.tail == g.arcs[i].head && is_cut_arc(b)) {
                            firsts.push_back(static_cast<int>(i));
                            break;
                        }
                    }
                }
                if (firsts.empty()) break;
                int i1 = firsts[g.pick(static_cast<int>(firsts.size()))];
                std::vector<int> seconds;
                for (std::size_t i = 0; i < g.arcs.size(); ++i) {
                    if (g.arcs[i].tail == g.arcs[i1].head && is_cut_arc(g.arcs[i])) {
                        seconds.push_back(static_cast<int>(i));
                    }
                }
                int i2 = seconds[g.pick(static_cast<int>(seconds.size()))];
                VertexId s1 = g.subdivide(i1);
                VertexId s2 = g.subdivide(i2);
                g.arcs.emplace_back(s1, s2);
            }
            placed = true;
        }
        if (!placed) {
            throw std::invalid_argument(
                "infeasible generator config: no room left for a reticulation");
        }
        if (in_blob) {
            // Re-measure which blob is the big one; its vertices steer the
            // next in-blob insertion.
            DirectedNetwork snapshot(g.arcs, g.labels);
            UnderlyingResult und = underlying_network(snapshot);
            BlobDecomposition dec = blob_decomposition(und.network);
            const std::vector<VertexId> retic_ids = snapshot.reticulations();
            const std::set<VertexId> rset(retic_ids.begin(), retic_ids.end());
            blob.clear();
            int best = -1;
            for (const std::vector<VertexId>& candidate : dec.blobs) {
                int retics = 0;
                for (const VertexId& v : candidate) retics += rset.count(v) > 0 ? 1 : 0;
                if (retics > best) {
                    best = retics;
                    blob = std::set<VertexId>(candidate.begin(), candidate.end());
                }
            }
        }
    }

    // Phase 3: spend the remaining leaf budget on chains (or single leaf
    // additions when no chain length is requested).
    while (leaves < n) {
        int len = chain_hi > 0
                      ? chain_lo + g.pick(chain_hi - chain_lo + 1)
                      : 1;
        len = std::max(1, std::min(len, n - leaves));
        int i = g.pick(static_cast<int>(g.arcs.size()));
        for (int j = 0; j < len; ++j) {
            VertexId s = g.subdivide(i);
            g.arcs.emplace_back(s, g.fresh_leaf());
            ++leaves;
            // continue along the lower half of the split arc
            i = static_cast<int>(g.arcs.size()) - 2;
        }
    }

    DirectedNetwork out(g.arcs, g.labels);
    underlying_network(out);  // defensive: must be simple and binary
    return out;
}

BlobChain make_blob_chain(int blobs) {
    if (blobs < 1) throw std::invalid_argument("make_blob_chain: need at least one blob");
    std::vector<EdgeKey> edges;
    std::map<VertexId, std::string> labels{{"x", "x"}, {"y", "y"}};
    DegreeMap degrees{{"x", 1}, {"y", 1}};
    auto name = [](const char* stem, int i) { return std::string(stem) + std::to_string(i); };
    edges.emplace_back("x", name("a", 1));
    for (int i = 1; i <= blobs; ++i) {
        VertexId a = name("a", i), b = name("b", i), c = name("c", i), d = name("d", i);
        edges.emplace_back(a, b);
        edges.emplace_back(a, c);
        edges.emplace_back(b, c);
        edges.emplace_back(b, d);
        edges.emplace_back(c, d);
        degrees[a] = 1;
        degrees[b] = 1;
        degrees[c] = 2;  // fed by both upper corners
        degrees[d] = 2;  // the far corner merges both lineages
        if (i < blobs) edges.emplace_back(d, name("a", i + 1));
    }
    edges.emplace_back(name("d", blobs), "y");
    UndirectedNetwork net(std::move(edges), std::move(labels));
    return BlobChain{std::move(net), EdgeKey("x", "a1"), std::move(degrees)};
}

}  // namespace phylo
