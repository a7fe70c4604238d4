#include "phylo/class_orient.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <set>
#include <utility>

namespace phylo {

namespace {

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
        return std::numeric_limits<std::uint64_t>::max();
    }
    return a * b;
}

/// Binomial coefficient, saturating at 2^64-1.
std::uint64_t choose_saturating(int n, int k) {
    if (k < 0 || k > n) return 0;
    unsigned __int128 r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
        if (r > std::numeric_limits<std::uint64_t>::max()) {
            return std::numeric_limits<std::uint64_t>::max();
        }
    }
    return static_cast<std::uint64_t>(r);
}

/// Visits the k-subsets of {0..n-1} in lexicographic order until `f`
/// returns true.  `f` receives the current index tuple.
template <typename F>
void for_each_combination(int n, int k, F f) {
    if (k == 0) {
        std::vector<int> empty;
        f(empty);
        return;
    }
    if (k > n) return;
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        if (f(idx)) return;
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) return;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

/// Shared core of the rootable-edge searches: tries every edge as the root
/// location (minus `skip_roots`) and every internal-vertex set of the right
/// size as the reticulations, keeping the first orientation per edge that
/// `accept` approves.  Reticulation sets are tried in lexicographic order,
/// so the stored witness per edge is the one with the smallest set.
RootableSet rootable_entries(const UndirectedNetwork& net,
                             const std::function<bool(const DirectedNetwork&)>& accept,
                             const std::set<EdgeKey>* skip_roots, std::uint64_t budget) {
    if (!net.is_binary()) {
        throw ValidationError("binary", "", "the class-orientation search requires a binary network");
    }
    const int k = net.edge_count() - net.vertex_count() + 1;
    std::vector<VertexId> internal;
    for (const VertexId& v : net.vertices()) {
        if (!net.is_leaf(v)) internal.push_back(v);
    }
    const int n = static_cast<int>(internal.size());
    RootableSet out;
    if (k < 0 || k > n) return out;  // no in-degree assignment can reach |E|+1

    const std::uint64_t guesses = choose_saturating(n, k);
    const std::uint64_t size = static_cast<std::uint64_t>(net.vertex_count() + net.edge_count());
    const std::uint64_t work =
        saturating_mul(saturating_mul(guesses, static_cast<std::uint64_t>(net.edge_count())), size);
    if (work > budget) throw BudgetExceeded(work, budget);

    std::vector<VertexId> retics(k);
    for (const EdgeKey& e : net.edges()) {
        if (skip_roots != nullptr && skip_roots->count(e) > 0) continue;
        for_each_combination(n, k, [&](const std::vector<int>& idx) {
            for (int i = 0; i < k; ++i) retics[i] = internal[idx[i]];
            OrientationResult res = orient_binary(net, e, retics);
            if (res.oriented() && accept(*res.network)) {
                out.entries.emplace(e, std::move(*res.network));
                return true;
            }
            return false;
        });
    }
    return out;
}

}  // namespace

std::vector<EdgeKey> RootableSet::edge_set() const {
    std::vector<EdgeKey> out;
    out.reserve(entries.size());
    for (const auto& [e, wit] : entries) out.push_back(e);
    return out;
}

RootableSet rootable_edges_exhaustive(const UndirectedNetwork& net, NetworkClass c,
                                      std::uint64_t budget) {
    return rootable_entries(
        net, [c](const DirectedNetwork& dn) { return satisfies(dn, c); }, nullptr, budget);
}

namespace {

/// How a shortened side edge was stitched together: the surviving edge, its
/// endpoints ordered from the side's u end to its v end, and the original
/// edges it replaces in that order.
struct MergedSideEdge {
    EdgeKey reduced;
    VertexId from;  ///< endpoint towards the side's u
    VertexId to;    ///< endpoint towards the side's v
    std::vector<EdgeKey> members;
    std::vector<VertexId> member_from;  ///< u-side endpoint of each member
};

struct SideReduction {
    UndirectedNetwork network;
    std::vector<MergedSideEdge> merged;  ///< only edges of shortened sides
};

/// Deletes, per side, every chain leaf whose 0-based position is absent
/// from `kept[side]` (positions must be ascending) and reconnects the
/// surviving attachment vertices along the side.
SideReduction reduce_sides(const UndirectedNetwork& net, const Generator& gen,
                           const std::vector<std::vector<int>>& kept) {
    std::set<EdgeKey> edges(net.edges().begin(), net.edges().end());
    std::map<VertexId, std::string> labels = net.leaf_labels();
    std::vector<MergedSideEdge> merged;

    for (std::size_t si = 0; si < gen.sides.size(); ++si) {
        const GeneratorSide& s = gen.sides[si];
        const int n_s = s.leaf_count();
        const std::vector<int>& keep = kept[si];
        if (static_cast<int>(keep.size()) == n_s) continue;

        const std::vector<EdgeKey> se = s.edges();
        for (const EdgeKey& e : se) edges.erase(e);
        std::set<int> keepset(keep.begin(), keep.end());
        for (int j = 0; j < n_s; ++j) {
            if (keepset.count(j) > 0) continue;
            edges.erase(EdgeKey(s.path[j + 1], s.chain[j]));
            labels.erase(s.chain[j]);
        }

        VertexId prev = s.u;
        int lo = 0;
        auto stitch = [&](const VertexId& next, int hi) {
            MergedSideEdge m{EdgeKey(prev, next), prev, next, {}, {}};
            for (int t = lo; t <= hi; ++t) {
                m.members.push_back(se[t]);
                m.member_from.push_back(s.path[t]);
            }
            edges.insert(m.reduced);
            merged.push_back(std::move(m));
        };
        for (int p : keep) {
            stitch(s.path[p + 1], p);
            prev = s.path[p + 1];
            lo = p + 1;
        }
        stitch(s.v, n_s);
    }

    return SideReduction{
        UndirectedNetwork(std::vector<EdgeKey>(edges.begin(), edges.end()), std::move(labels)),
        std::move(merged)};
}

}  // namespace

ChainReduction chain_reduce(const UndirectedNetwork& net, int l) {
    if (l < 1) throw std::invalid_argument("chain_reduce: the keep length must be at least 1");
    Generator gen = generator(net);
    std::vector<std::vector<int>> kept;
    std::vector<ReducedSide> sides;
    for (const GeneratorSide& s : gen.sides) {
        // A side whose endpoints coincide must keep two leaves, otherwise
        // suppressing the deleted attachments would create a parallel pair.
        int count = std::min(s.leaf_count(), std::max(l, s.u == s.v ? 2 : 1));
        std::vector<int> positions(count);
        std::iota(positions.begin(), positions.end(), 0);
        kept.push_back(std::move(positions));
        sides.push_back(ReducedSide{s, count});
    }
    SideReduction red = reduce_sides(net, gen, kept);
    return ChainReduction{std::move(red.network), std::move(sides)};
}

RootableSet rootable_edges_fpt(const UndirectedNetwork& net, NetworkClass c,
                               std::uint64_t budget) {
    if (!net.is_binary()) {
        throw ValidationError("binary", "", "the class-orientation search requires a binary network");
    }
    const int k = net.edge_count() - net.vertex_count() + 1;
    if (k < 2) return rootable_edges_exhaustive(net, c, budget);

    // The chain bookkeeping below needs every leaf to hang directly off the
    // core, so larger pendant subtrees are collapsed to single leaves first;
    // placements expand through `replaced` at the end.
    PendantReduction pr = reduce_pendant_subtrees(net);
    const UndirectedNetwork& base = pr.network;

    ChainReduction cr = chain_reduce(base, chain_keep_length(c));
    RootableSet reduced = rootable_edges_exhaustive(cr.network, c, budget);

    // Kept chain leaf -> (side, 1-based position); side edges of shortened
    // sides in the reduced network, which carry no extra placements.
    std::map<VertexId, std::pair<int, int>> kept_pos;
    std::set<EdgeKey> shortened_side_edges;
    for (std::size_t si = 0; si < cr.sides.size(); ++si) {
        const ReducedSide& rs = cr.sides[si];
        for (int i = 0; i < rs.kept; ++i) {
            kept_pos[rs.side.chain[i]] = {static_cast<int>(si), i + 1};
        }
        if (rs.kept == rs.side.leaf_count()) continue;
        VertexId prev = rs.side.u;
        for (int i = 0; i < rs.kept; ++i) {
            shortened_side_edges.insert(EdgeKey(prev, rs.side.path[i + 1]));
            prev = rs.side.path[i + 1];
        }
        shortened_side_edges.insert(EdgeKey(prev, rs.side.v));
    }

    // Expand reduced placements to placements on `base`, keeping the first
    // reticulation set proposed for each edge.
    std::vector<std::pair<EdgeKey, std::vector<VertexId>>> jobs;
    std::set<EdgeKey> queued;
    auto add_job = [&](const EdgeKey& f, const std::vector<VertexId>& retics) {
        if (queued.insert(f).second) jobs.emplace_back(f, retics);
    };
    for (const auto& [e, wit] : reduced.entries) {
        const std::vector<VertexId> retics = wit.reticulations();
        const bool pendant = cr.network.is_leaf(e.a) || cr.network.is_leaf(e.b);
        if (pendant) {
            const VertexId& leaf = cr.network.is_leaf(e.a) ? e.a : e.b;
            auto it = kept_pos.find(leaf);
            if (it != kept_pos.end()) {
                const ReducedSide& rs = cr.sides[it->second.first];
                const int i = it->second.second;
                const int n_s = rs.side.leaf_count();
                if (rs.kept < n_s) {
                    // The witness may place one reticulation on this side's
                    // surviving stretch (never at the root's own neighbour and
                    // never two, since a side absorbing flow from both ends
                    // would leave the rest of the network without a source).
                    // That reticulation shifts along the side as the root
                    // placement moves; all other reticulations stay put.
                    int side_retic = 0;  // 1-based kept position, 0 = none
                    std::vector<VertexId> off_side;
                    for (const VertexId& r : retics) {
                        int m = 0;
                        for (int p = 1; p <= rs.kept; ++p) {
                            if (rs.side.path[p] == r) { m = p; break; }
                        }
                        if (m == 0) {
                            off_side.push_back(r);
                        } else if (m == i || side_retic != 0) {
                            throw std::logic_error(
                                "impossible reticulation layout on side " + rs.side.u +
                                "-" + rs.side.v + " in a reduced-network witness");
                        } else {
                            side_retic = m;
                        }
                    }
                    auto shifted = [&](int pos) {
                        std::vector<VertexId> rr = off_side;
                        if (pos > 0) rr.push_back(rs.side.path[pos]);
                        return rr;
                    };
                    // Rooting at the i-th of `kept` surviving leaves proves the
                    // full side rootable at leaves i..n_s-(kept-i) and at side
                    // edges i-1..n_s-(kept-i).
                    const int hi = n_s - (rs.kept - i);
                    for (int j = i; j <= hi; ++j) {
                        const int pos = side_retic == 0 ? 0 : side_retic + j - i;
                        add_job(EdgeKey(rs.side.path[j], rs.side.chain[j - 1]), shifted(pos));
                    }
                    const std::vector<EdgeKey> side_edges = rs.side.edges();
                    for (int j = i - 1; j <= hi; ++j) {
                        const int pos = side_retic == 0  ? 0
                                        : side_retic < i ? side_retic + j + 1 - i
                                                         : side_retic + j - i;
                        add_job(side_edges[j], shifted(pos));
                    }
                    continue;
                }
            }
        } else if (shortened_side_edges.count(e) > 0) {
            continue;  // recovered through the pendant placements of its side
        }
        add_job(e, retics);
    }

    RootableSet out;
    auto realize = [&](const EdgeKey& f, const std::vector<VertexId>& retics) {
        if (out.contains(f)) return;
        OrientationResult res = orient_binary(net, f, retics);
        if (!res.oriented() || !satisfies(*res.network, c)) {
            throw std::logic_error("chain-reduction mapping proposed edge " + f.str() +
                                   ", but the orientation there is not a class member");
        }
        out.entries.emplace(f, std::move(*res.network));
    };
    for (const auto& [f, retics] : jobs) {
        auto rit = pr.replaced.end();
        if (pr.replaced.count(f.a) > 0) rit = pr.replaced.find(f.a);
        if (pr.replaced.count(f.b) > 0) rit = pr.replaced.find(f.b);
        if (rit == pr.replaced.end()) {
            realize(f, retics);
        } else {
            // f is the pendant edge of a collapsed subtree: the original
            // network is rootable at every edge the subtree contributed.
            for (const EdgeKey& g : rit->second) realize(g, retics);
        }
    }
    return out;
}

const std::vector<ArcKey>& BlobOrientationPlan::directions_of(const EdgeKey& cut_edge) const {
    auto it = cut_directions.find(cut_edge);
    if (it == cut_directions.end()) {
        throw std::invalid_argument("not a cut edge: " + cut_edge.str());
    }
    return it->second;
}

int BlobOrientationPlan::class_of(const VertexId& v) const {
    for (std::size_t i = 0; i < classes.size(); ++i) {
        if (std::binary_search(classes[i].begin(), classes[i].end(), v)) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

namespace {

struct DisjointSets {
    std::vector<int> parent;
    explicit DisjointSets(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

/// How the per-blob rootable sets are produced and which cut-edge
/// directions are imposed from outside (by prescribed arcs).
struct PlanHooks {
    std::function<RootableSet(const InducedBlob&)> blob_rootable;
    const std::map<EdgeKey, ArcKey>* preset = nullptr;
};

BlobOrientationPlan build_plan(const UndirectedNetwork& net, const PlanHooks& hooks) {
    BlobOrientationPlan plan;
    plan.decomposition = blob_decomposition(net);
    const BlobDecomposition& dec = plan.decomposition;

    for (const std::vector<VertexId>& blob : dec.blobs) {
        plan.induced.push_back(induced_blob_network(net, blob));
        plan.blob_rootable.push_back(hooks.blob_rootable(plan.induced.back()));
    }

    // A cut edge is directed away from an incident blob that cannot be
    // rooted at it; prescribed directions are merged in.
    bool bidirected = false;
    for (const EdgeKey& e : dec.cut_edges) {
        std::vector<ArcKey> dirs;
        auto add = [&](const ArcKey& a) {
            if (std::find(dirs.begin(), dirs.end(), a) == dirs.end()) dirs.push_back(a);
        };
        if (hooks.preset != nullptr) {
            auto it = hooks.preset->find(e);
            if (it != hooks.preset->end()) add(it->second);
        }
        for (const VertexId* vp : {&e.a, &e.b}) {
            int b = dec.blob_of(*vp);
            if (b < 0) continue;
            auto lit = plan.induced[b].leaf_for_vertex.find(*vp);
            if (lit == plan.induced[b].leaf_for_vertex.end()) continue;
            if (!plan.blob_rootable[b].contains(EdgeKey(*vp, lit->second))) {
                add(ArcKey(*vp, e.other(*vp)));
            }
        }
        if (dirs.size() > 1) bidirected = true;
        plan.cut_directions.emplace(e, std::move(dirs));
    }

    // Contract everything joined by an undirected edge.
    DisjointSets dsu(net.vertex_count());
    for (const EdgeKey& e : net.edges()) {
        auto it = plan.cut_directions.find(e);
        if (it != plan.cut_directions.end() && !it->second.empty()) continue;
        dsu.unite(net.index_of(e.a), net.index_of(e.b));
    }
    std::map<int, int> class_index;  // dsu root -> class position
    for (const VertexId& v : net.vertices()) {
        int root = dsu.find(net.index_of(v));
        auto [it, fresh] = class_index.emplace(root, static_cast<int>(plan.classes.size()));
        if (fresh) plan.classes.emplace_back();
        plan.classes[it->second].push_back(v);
    }
    // net.vertices() is sorted, so every class is sorted and the classes are
    // already ordered by their first member.
    std::vector<int> indegree(plan.classes.size(), 0);
    for (const auto& [e, dirs] : plan.cut_directions) {
        for (const ArcKey& a : dirs) {
            int t = class_index.at(dsu.find(net.index_of(a.tail)));
            int h = class_index.at(dsu.find(net.index_of(a.head)));
            plan.class_arcs.emplace_back(t, h);
            ++indegree[h];
        }
    }
    std::vector<int> roots;
    for (std::size_t i = 0; i < plan.classes.size(); ++i) {
        if (indegree[i] == 0) roots.push_back(static_cast<int>(i));
    }
    if (bidirected) {
        plan.failure = "a cut edge is forced in both directions";
    } else if (roots.empty()) {
        plan.failure = "every region is entered by a cut arc, so no root region remains";
    } else if (roots.size() > 1) {
        plan.failure = "the forced cut-edge directions split the root location across " +
                       std::to_string(roots.size()) + " regions";
    } else {
        plan.rooted_tree = true;
        plan.root_class = roots.front();
    }
    return plan;
}

struct AssemblyResult {
    bool orientable = false;
    std::optional<DirectedNetwork> network;
    std::vector<EdgeKey> rootable;
    std::string reason;
    std::optional<EdgeKey> root_edge;  ///< the edge the witness root subdivides
};

/// Turns a feasible plan into one concrete orientation and the full set of
/// valid root locations.  `root_restriction`, when set, must be chosen as
/// the root edge (used when prescribed arcs pin the root down).
AssemblyResult assemble(const UndirectedNetwork& net, const BlobOrientationPlan& plan,
                        const std::optional<EdgeKey>& root_restriction) {
    const BlobDecomposition& dec = plan.decomposition;
    AssemblyResult out;

    for (std::size_t b = 0; b < dec.blobs.size(); ++b) {
        if (plan.blob_rootable[b].entries.empty()) {
            out.reason = "the blob containing '" + dec.blobs[b].front() +
                         "' admits no matching orientation";
            return out;
        }
    }
    if (!plan.rooted_tree) {
        out.reason = plan.failure;
        return out;
    }

    // Valid root locations: undirected cut edges inside the root region,
    // plus the internal rootable edges of the region's blobs.
    std::set<VertexId> region(plan.classes[plan.root_class].begin(),
                              plan.classes[plan.root_class].end());
    std::vector<EdgeKey> cut_rootable;
    for (const EdgeKey& e : dec.cut_edges) {
        if (region.count(e.a) > 0 && region.count(e.b) > 0) cut_rootable.push_back(e);
    }
    std::vector<EdgeKey> rootable = cut_rootable;
    for (std::size_t b = 0; b < dec.blobs.size(); ++b) {
        if (region.count(dec.blobs[b].front()) == 0) continue;
        for (const auto& [e, wit] : plan.blob_rootable[b].entries) {
            if (net.has_edge(e)) rootable.push_back(e);
        }
    }
    std::sort(rootable.begin(), rootable.end());
    out.rootable = rootable;

    EdgeKey chosen;
    if (root_restriction.has_value()) {
        if (!std::binary_search(rootable.begin(), rootable.end(), *root_restriction)) {
            out.rootable.clear();
            out.reason = "the prescribed arcs pin the root to " + root_restriction->str() +
                         ", which is not a valid root location";
            return out;
        }
        chosen = *root_restriction;
    } else if (!cut_rootable.empty()) {
        chosen = cut_rootable.front();
    } else if (!rootable.empty()) {
        chosen = rootable.front();
    } else {
        out.reason = "the root region admits no root placement";
        return out;
    }
    const bool chosen_is_cut =
        std::binary_search(dec.cut_edges.begin(), dec.cut_edges.end(), chosen);

    // Every cut edge is directed away from the root: a breadth-first sweep
    // from the chosen edge's endpoints discovers each bridge from its root
    // side first.
    std::map<EdgeKey, ArcKey> cut_arc;
    {
        std::set<EdgeKey> cutset(dec.cut_edges.begin(), dec.cut_edges.end());
        const auto& adj = net.adjacency();
        std::vector<char> visited(net.vertex_count(), 0);
        std::deque<int> queue;
        for (const VertexId* vp : {&chosen.a, &chosen.b}) {
            int i = net.index_of(*vp);
            if (!visited[i]) {
                visited[i] = 1;
                queue.push_back(i);
            }
        }
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop_front();
            for (const AdjEntry& entry : adj[u]) {
                const EdgeKey& ek = net.edge_at(entry.edge);
                if (ek == chosen) continue;
                if (visited[entry.neighbor]) continue;
                visited[entry.neighbor] = 1;
                queue.push_back(entry.neighbor);
                if (cutset.count(ek) > 0) {
                    cut_arc.emplace(ek, ArcKey(net.id_of(u), net.id_of(entry.neighbor)));
                }
            }
        }
    }
    if (cut_arc.size() + (chosen_is_cut ? 1 : 0) != dec.cut_edges.size()) {
        throw std::logic_error("blob assembly: the root sweep missed a cut edge");
    }
    for (const auto& [e, dirs] : plan.cut_directions) {
        if (dirs.empty()) continue;
        if (e == chosen || cut_arc.at(e) != dirs.front()) {
            throw std::logic_error("blob assembly: the root placement contradicts the forced "
                                   "direction of cut edge " + e.str());
        }
    }

    std::vector<ArcKey> arcs;
    if (chosen_is_cut) {
        arcs.emplace_back(kRootId, chosen.a);
        arcs.emplace_back(kRootId, chosen.b);
    }
    for (const auto& [e, a] : cut_arc) arcs.push_back(a);

    for (std::size_t b = 0; b < dec.blobs.size(); ++b) {
        const std::vector<VertexId>& blob = dec.blobs[b];
        std::set<VertexId> bset(blob.begin(), blob.end());
        if (!chosen_is_cut && bset.count(chosen.a) > 0 && bset.count(chosen.b) > 0) {
            // The root blob: copy its stored orientation, root arcs included.
            const DirectedNetwork& wit = plan.blob_rootable[b].entries.at(chosen);
            for (const ArcKey& a : wit.arcs()) {
                bool tail_ok = bset.count(a.tail) > 0 || a.tail == kRootId;
                if (tail_ok && bset.count(a.head) > 0) arcs.push_back(a);
            }
            continue;
        }
        // Any other blob is entered by exactly one cut arc (or by the root
        // itself when the chosen cut edge touches it); its stored placement
        // at the matching pendant stand-in orients the interior.
        VertexId entry;
        if (chosen_is_cut && bset.count(chosen.a) > 0) {
            entry = chosen.a;
        } else if (chosen_is_cut && bset.count(chosen.b) > 0) {
            entry = chosen.b;
        } else {
            int found = 0;
            for (const auto& [e, a] : cut_arc) {
                if (bset.count(a.head) > 0 && bset.count(a.tail) == 0) {
                    entry = a.head;
                    ++found;
                }
            }
            if (found != 1) {
                throw std::logic_error("blob assembly: expected exactly one entering cut arc, got " +
                                       std::to_string(found));
            }
        }
        EdgeKey pendant(entry, plan.induced[b].leaf_for_vertex.at(entry));
        auto wit = plan.blob_rootable[b].entries.find(pendant);
        if (wit == plan.blob_rootable[b].entries.end()) {
            throw std::logic_error("blob assembly: no stored orientation enters the blob at '" +
                                   entry + "'");
        }
        for (const ArcKey& a : wit->second.arcs()) {
            if (bset.count(a.tail) > 0 && bset.count(a.head) > 0) arcs.push_back(a);
        }
    }

    try {
        out.network.emplace(std::move(arcs), net.leaf_labels());
    } catch (const ValidationError& err) {
        throw std::logic_error(std::string("blob assembly produced an invalid network: ") +
                               err.what());
    }
    out.orientable = true;
    out.root_edge = chosen;
    return out;
}

PlanHooks class_hooks(NetworkClass c, std::uint64_t budget) {
    PlanHooks hooks;
    hooks.blob_rootable = [c, budget](const InducedBlob& ib) {
        int kb = ib.network.edge_count() - ib.network.vertex_count() + 1;
        // Small blobs are cheap to search directly; the chain-reduction
        // route only pays off once the reticulation number grows.
        return kb <= 2 ? rootable_edges_exhaustive(ib.network, c, budget)
                       : rootable_edges_fpt(ib.network, c, budget);
    };
    return hooks;
}

}  // namespace

BlobOrientationPlan plan_blob_orientation(const UndirectedNetwork& net, NetworkClass c,
                                          std::uint64_t budget) {
    if (!net.is_binary()) {
        throw ValidationError("binary", "", "blob orientation requires a binary network");
    }
    return build_plan(net, class_hooks(c, budget));
}

COrientation c_orientation(const UndirectedNetwork& net, NetworkClass c, std::uint64_t budget) {
    if (!net.is_binary()) {
        throw ValidationError("binary", "", "class orientation requires a binary network");
    }
    BlobOrientationPlan plan = build_plan(net, class_hooks(c, budget));
    AssemblyResult res = assemble(net, plan, std::nullopt);
    if (res.orientable && !satisfies(*res.network, c)) {
        throw std::logic_error("blob assembly produced an orientation outside the class");
    }
    COrientation out;
    out.orientable = res.orientable;
    out.network = std::move(res.network);
    out.rootable_edges = std::move(res.rootable);
    out.reason = std::move(res.reason);
    if (!out.orientable) out.rootable_edges.clear();
    return out;
}

bool is_tree_based_undirected(const UndirectedNetwork& net, std::uint64_t budget) {
    COrientation res = c_orientation(net, NetworkClass::tree_based, budget);
    if (!res.orientable) return false;
    BlobDecomposition dec = blob_decomposition(net);
    for (const EdgeKey& e : res.rootable_edges) {
        if (std::binary_search(dec.cut_edges.begin(), dec.cut_edges.end(), e)) return true;
    }
    return false;
}

namespace {

/// Orients every edge of `edges` away from the seed vertices by a
/// breadth-first sweep, skipping `skip` (the root location).  Works on the
/// subgraph spanned by `edges` only.
std::map<EdgeKey, ArcKey> sweep_away(const std::vector<EdgeKey>& edges,
                                     const std::vector<VertexId>& seeds,
                                     const std::optional<EdgeKey>& skip) {
    std::map<VertexId, std::vector<std::pair<VertexId, EdgeKey>>> adj;
    for (const EdgeKey& e : edges) {
        if (skip.has_value() && e == *skip) continue;
        adj[e.a].emplace_back(e.b, e);
        adj[e.b].emplace_back(e.a, e);
    }
    std::map<EdgeKey, ArcKey> dir;
    std::set<VertexId> visited(seeds.begin(), seeds.end());
    std::deque<VertexId> queue(seeds.begin(), seeds.end());
    while (!queue.empty()) {
        VertexId u = queue.front();
        queue.pop_front();
        for (const auto& [v, e] : adj[u]) {
            if (visited.count(v) > 0) continue;
            visited.insert(v);
            queue.push_back(v);
            dir.emplace(e, ArcKey(u, v));
        }
    }
    return dir;
}

}  // namespace

PartlyDirectedOrientation partly_directed_c_orientation(const PartlyDirectedNetwork& pd,
                                                        std::uint64_t budget) {
    if (!pd.is_binary()) {
        throw ValidationError("binary", "", "partly-directed orientation requires a binary network");
    }
    const UndirectedNetwork& net = pd.underlying();
    auto no = [](std::string reason) {
        return PartlyDirectedOrientation{false, std::nullopt, std::move(reason)};
    };

    // All known arc constraints, keyed by underlying edge; starts from the
    // prescribed arcs and grows as directions are propagated.
    std::map<EdgeKey, ArcKey> want;
    for (const ArcKey& a : pd.arcs()) want.emplace(a.as_edge(), a);
    bool conflict = false;
    auto require = [&](const ArcKey& a) {
        auto [it, fresh] = want.emplace(a.as_edge(), a);
        if (!fresh && it->second != a) conflict = true;
    };

    BlobDecomposition dec = blob_decomposition(net);
    std::set<EdgeKey> cutset(dec.cut_edges.begin(), dec.cut_edges.end());

    // A directed cut edge decides every bridge on its far side: all of them
    // point away from its head.
    {
        std::vector<ArcKey> cut_arcs;
        for (const auto& [e, a] : want) {
            if (cutset.count(e) > 0) cut_arcs.push_back(a);
        }
        for (const ArcKey& a : cut_arcs) {
            std::map<EdgeKey, ArcKey> swept =
                sweep_away(net.edges(), {a.head}, a.as_edge());
            for (const auto& [e, d] : swept) {
                if (cutset.count(e) == 0) continue;
                require(d);
                if (conflict) {
                    return no("prescribed arcs force cut edge " + e.str() + " in both directions");
                }
            }
        }
    }
    // Where a cut arc enters a blob, both blob edges at the entry vertex
    // must point into the blob: everything behind the entry is reached
    // through it, so an arc back into the entry would close a cycle.
    for (auto it = want.begin(); it != want.end(); ++it) {
        if (cutset.count(it->first) == 0) continue;
        const ArcKey a = it->second;
        if (dec.blob_of(a.head) < 0) continue;
        for (const VertexId& nb : net.neighbors(a.head)) {
            EdgeKey g(a.head, nb);
            if (g == it->first || cutset.count(g) > 0) continue;
            require(ArcKey(a.head, nb));
            if (conflict) {
                return no("the cut arc entering at '" + a.head +
                          "' conflicts with an arc at the entry vertex");
            }
        }
    }

    const int k = net.edge_count() - net.vertex_count() + 1;
    if (k < 2) {
        // Too few reticulations for the chain machinery; try every root
        // location and reticulation directly.
        std::vector<VertexId> internal;
        for (const VertexId& v : net.vertices()) {
            if (!net.is_leaf(v)) internal.push_back(v);
        }
        std::uint64_t work = saturating_mul(
            saturating_mul(static_cast<std::uint64_t>(pd.undirected_edges().size()),
                           static_cast<std::uint64_t>(k == 0 ? 1 : internal.size())),
            static_cast<std::uint64_t>(net.vertex_count() + net.edge_count()));
        if (work > budget) throw BudgetExceeded(work, budget);
        for (const EdgeKey& e : pd.undirected_edges()) {
            if (k == 0) {
                OrientationResult res = orient_partly_directed(pd, e, {});
                if (res.oriented()) return {true, std::move(res.network), ""};
            } else {
                for (const VertexId& v : internal) {
                    OrientationResult res = orient_partly_directed(pd, e, {v});
                    if (res.oriented()) return {true, std::move(res.network), ""};
                }
            }
        }
        return no("no root location and reticulation placement matches the prescribed arcs");
    }

    // Collapse pendant subtrees.  A subtree whose arcs all point away from
    // its attachment leaves a plain replacement leaf (carrying the
    // attachment edge's direction, if any); a subtree with an arc pointing
    // up must contain the root, which pins the root to its replacement
    // pendant edge and remembers the feasible positions inside.
    PendantReduction pr = reduce_pendant_subtrees(net);
    std::optional<EdgeKey> restriction;          // reduced pendant holding the root
    std::vector<EdgeKey> holder_roots;           // feasible original root edges inside it
    std::map<EdgeKey, ArcKey> reduced_want;      // constraints on the reduced network
    for (const auto& [x, subtree] : pr.replaced) {
        const VertexId w = pr.network.neighbors(x).front();
        std::map<EdgeKey, ArcKey> down = sweep_away(subtree, {w}, std::nullopt);
        bool downward = true;
        bool any = false;
        for (const EdgeKey& e : subtree) {
            auto it = want.find(e);
            if (it == want.end()) continue;
            any = true;
            if (it->second != down.at(e)) downward = false;
        }
        if (!any || downward) {
            // The attachment edge is the subtree edge touching w.
            for (const EdgeKey& e : subtree) {
                if (e.contains(w) && want.count(e) > 0) {
                    reduced_want.emplace(EdgeKey(w, x), ArcKey(w, x));
                }
            }
            continue;
        }
        if (restriction.has_value()) {
            return no("two pendant subtrees both carry an arc towards the core, but the root "
                      "can only sit inside one of them");
        }
        restriction = EdgeKey(w, x);
        for (const EdgeKey& f : subtree) {
            if (want.count(f) > 0) continue;
            std::map<EdgeKey, ArcKey> away = sweep_away(subtree, {f.a, f.b}, f);
            bool ok = true;
            for (const EdgeKey& g : subtree) {
                auto it = want.find(g);
                if (it != want.end() && g != f && it->second != away.at(g)) ok = false;
            }
            if (ok) holder_roots.push_back(f);
        }
        if (holder_roots.empty()) {
            return no("the pendant subtree replaced by '" + x +
                      "' admits no root position consistent with its arcs");
        }
    }
    for (const EdgeKey& e : pr.network.edges()) {
        auto it = want.find(e);
        if (it != want.end()) reduced_want.emplace(e, it->second);
    }

    // Per-side direction analysis on the reduced network's generator.
    Generator gen = generator(pr.network);
    std::vector<std::vector<int>> kept;
    for (const GeneratorSide& s : gen.sides) {
        const int n_s = s.leaf_count();
        const std::vector<EdgeKey> se = s.edges();
        std::vector<std::pair<int, bool>> directed;  // (edge index, points towards v)
        for (int t = 0; t <= n_s; ++t) {
            auto it = reduced_want.find(se[t]);
            if (it != reduced_want.end()) {
                directed.emplace_back(t, it->second.tail == s.path[t]);
            }
        }
        int changes = 0;
        for (std::size_t i = 1; i < directed.size(); ++i) {
            if (directed[i].second != directed[i - 1].second) ++changes;
        }
        if (changes >= 3) {
            return no("the chain between '" + s.u + "' and '" + s.v +
                      "' alternates direction twice, which no rooting can satisfy");
        }
        // A direction change needs a leaf between the two arcs: a root
        // position where they diverge, a reticulation where they converge.
        // Protect the leaf after the first arc of the closest such pair.
        std::set<int> protect;
        int best_div = -1, best_con = -1, div_gap = 0, con_gap = 0;
        for (std::size_t i = 0; i < directed.size(); ++i) {
            for (std::size_t j = i + 1; j < directed.size(); ++j) {
                if (directed[i].second == directed[j].second) continue;
                int gap = directed[j].first - directed[i].first;
                if (!directed[i].second) {  // towards u, then towards v: divergent
                    if (best_div < 0 || gap < div_gap) {
                        best_div = directed[i].first;
                        div_gap = gap;
                    }
                } else {  // towards v, then towards u: convergent
                    if (best_con < 0 || gap < con_gap) {
                        best_con = directed[i].first;
                        con_gap = gap;
                    }
                }
            }
        }
        if (best_div >= 0) protect.insert(best_div);
        if (best_con >= 0) protect.insert(best_con);
        if (restriction.has_value()) {
            for (int j = 0; j < n_s; ++j) {
                if (s.chain[j] == restriction->a || s.chain[j] == restriction->b) {
                    protect.insert(j);
                }
            }
        }
        const int count = std::min(n_s, 2 + static_cast<int>(protect.size()));
        std::vector<int> positions(protect.begin(), protect.end());
        for (int j = 0; j < n_s && static_cast<int>(positions.size()) < count; ++j) {
            if (protect.count(j) == 0) positions.push_back(j);
        }
        std::sort(positions.begin(), positions.end());
        kept.push_back(std::move(positions));
    }

    SideReduction red = reduce_sides(pr.network, gen, kept);
    const UndirectedNetwork& net2 = red.network;

    // Constraints on the shortened network: untouched edges keep theirs;
    // each stitched edge inherits the one direction of its members.
    std::map<EdgeKey, ArcKey> want2;
    for (const auto& [e, a] : reduced_want) {
        if (net2.has_edge(e)) want2.emplace(e, a);
    }
    for (const MergedSideEdge& m : red.merged) {
        int towards_to = 0, towards_from = 0;
        for (std::size_t t = 0; t < m.members.size(); ++t) {
            auto it = reduced_want.find(m.members[t]);
            if (it == reduced_want.end()) continue;
            (it->second.tail == m.member_from[t] ? towards_to : towards_from) += 1;
        }
        if (towards_to > 0 && towards_from > 0) {
            throw std::logic_error("chain shortening merged two opposing arcs; the protected "
                                   "leaves should have kept them apart");
        }
        if (towards_to > 0) want2[m.reduced] = ArcKey(m.from, m.to);
        if (towards_from > 0) want2[m.reduced] = ArcKey(m.to, m.from);
    }

    // Blob-by-blob assembly on the shortened network, with every blob
    // orientation required to reproduce the constraints that fall inside it
    // (cut-edge constraints map onto the pendant stand-ins).
    PlanHooks hooks;
    hooks.preset = &want2;
    hooks.blob_rootable = [&net2, &want2, budget](const InducedBlob& ib) {
        std::map<EdgeKey, ArcKey> local;
        std::set<VertexId> fresh;
        for (const auto& [v, x] : ib.leaf_for_vertex) fresh.insert(x);
        for (const EdgeKey& e : ib.network.edges()) {
            if (fresh.count(e.a) == 0 && fresh.count(e.b) == 0) {
                auto it = want2.find(e);
                if (it != want2.end()) local.emplace(e, it->second);
            }
        }
        for (const auto& [v, x] : ib.leaf_for_vertex) {
            // The stand-in pendant edge mirrors the network's third edge at
            // v; only an outgoing direction transfers (an incoming one
            // means the root lies beyond v, handled by the entry keying).
            for (const VertexId& nb : net2.neighbors(v)) {
                if (ib.network.has_edge(v, nb)) continue;
                auto it = want2.find(EdgeKey(v, nb));
                if (it != want2.end() && it->second.tail == v) {
                    local.emplace(EdgeKey(v, x), ArcKey(v, x));
                }
            }
        }
        std::set<EdgeKey> skip;
        for (const auto& [e, a] : local) skip.insert(e);
        auto accept = [local](const DirectedNetwork& dn) {
            for (const auto& [e, a] : local) {
                if (!dn.has_arc(a.tail, a.head)) return false;
            }
            return true;
        };
        return rootable_entries(ib.network, accept, &skip, budget);
    };

    BlobOrientationPlan plan = build_plan(net2, hooks);
    AssemblyResult res = assemble(net2, plan, restriction);
    if (!res.orientable) return no(res.reason);

    // Pull the witness back through the two reductions: first expand the
    // root edge across its stitched range, then across a collapsed subtree,
    // re-running the constrained orientation to validate each step.
    const std::vector<VertexId> retics = res.network->reticulations();
    std::vector<EdgeKey> mid_candidates{*res.root_edge};
    for (const MergedSideEdge& m : red.merged) {
        if (m.reduced == *res.root_edge && m.members.size() > 1) {
            mid_candidates = m.members;
            break;
        }
    }
    std::vector<EdgeKey> pd1_edges;
    for (const EdgeKey& e : pr.network.edges()) {
        if (reduced_want.count(e) == 0) pd1_edges.push_back(e);
    }
    std::vector<ArcKey> pd1_arcs;
    for (const auto& [e, a] : reduced_want) pd1_arcs.push_back(a);
    PartlyDirectedNetwork pd1(pd1_edges, pd1_arcs, pr.network.leaf_labels());

    std::optional<EdgeKey> mid_root;
    for (const EdgeKey& f : mid_candidates) {
        OrientationResult r = orient_partly_directed(pd1, f, retics);
        if (r.oriented()) {
            mid_root = f;
            break;
        }
    }
    if (!mid_root.has_value()) {
        throw std::logic_error("the shortened witness does not extend along the restored chains");
    }

    std::vector<EdgeKey> final_candidates{*mid_root};
    if (restriction.has_value() && *mid_root == *restriction) {
        final_candidates = holder_roots;
    } else {
        for (const auto& [x, subtree] : pr.replaced) {
            if (!mid_root->contains(x)) continue;
            final_candidates.clear();
            for (const EdgeKey& g : subtree) {
                if (want.count(g) == 0) final_candidates.push_back(g);
            }
            break;
        }
    }
    for (const EdgeKey& f : final_candidates) {
        OrientationResult r = orient_partly_directed(pd, f, retics);
        if (r.oriented()) return {true, std::move(r.network), ""};
    }
    throw std::logic_error("the witness does not extend into the restored pendant subtrees");
}

}  // namespace phylo
