#include "phylo/orient.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <set>
#include <sstream>
#include <stdexcept>

namespace phylo {

namespace {

// The root-subdivided working graph.  Network vertices keep their indices
// 0..n-1; the root vertex is index n.  Edges are stored as endpoint pairs in
// a fixed order: the network's edges first (minus the subdivided root edge,
// plus the second copy of a doubled pair when present), then the two root
// halves.  All hot-path work runs on these indices; ids only appear when a
// result is materialized.
struct RootedGraph {
    const UndirectedNetwork* net = nullptr;
    int n = 0;     // network vertex count; root index == n
    std::vector<std::array<int, 2>> ends;
    std::vector<std::vector<AdjEntry>> adj;  // (other vertex, edge index)
    std::vector<int> need;                   // prescribed in-degree; root: 0

    int vertex_count() const { return n + 1; }

    VertexId id_of(int v) const {
        return v == n ? VertexId(kRootId) : net->id_of(v);
    }

    EdgeKey key_of(int e) const {
        return EdgeKey(id_of(ends[e][0]), id_of(ends[e][1]));
    }
};

RootedGraph build_rooted(const RootedInstance& inst) {
    const UndirectedNetwork& net = inst.network;
    RootedGraph g;
    g.net = &net;
    g.n = net.vertex_count();

    // Endpoint indices per edge, read off the adjacency lists: vertex ids
    // sort in index order, so {smaller, larger} matches the EdgeKey
    // normalisation without any id lookups.
    std::vector<std::array<int, 2>> endpoints(net.edge_count());
    const auto& adj = net.adjacency();
    for (int u = 0; u < g.n; ++u)
        for (const AdjEntry& a : adj[u])
            if (u < a.neighbor) endpoints[a.edge] = {u, a.neighbor};

    const int root_edge_index = net.edge_index(inst.root_edge);
    g.ends.reserve(net.edge_count() + 2);
    for (int e = 0; e < net.edge_count(); ++e) {
        // The root edge is replaced by its two halves below; when it is a
        // doubled pair, one copy survives as a regular edge.
        if (e == root_edge_index && !inst.duplicate_edge) continue;
        g.ends.push_back(endpoints[e]);
    }
    g.ends.push_back({g.n, endpoints[root_edge_index][0]});
    g.ends.push_back({g.n, endpoints[root_edge_index][1]});

    g.adj.resize(g.n + 1);
    for (int e = 0; e < static_cast<int>(g.ends.size()); ++e) {
        g.adj[g.ends[e][0]].push_back({g.ends[e][1], e});
        g.adj[g.ends[e][1]].push_back({g.ends[e][0], e});
    }

    g.need.assign(g.n + 1, 0);
    // Merge walk: the degree map and the vertex list share one id order.
    auto it = inst.degrees.begin();
    for (int v = 0; v < g.n; ++v) {
        while (it != inst.degrees.end() && it->first < net.id_of(v)) ++it;
        if (it == inst.degrees.end() || it->first != net.id_of(v))
            throw ValidationError("degree-map", net.id_of(v),
                                  "vertex has no prescribed in-degree");
        g.need[v] = it->second;
        ++it;
    }
    return g;
}

// State of the orientation propagation over a RootedGraph.
struct Propagation {
    std::vector<int> dir;       // -1 unoriented; 0: ends[0]->ends[1]; 1: reverse
    std::vector<int> incoming;  // oriented arcs into each vertex
    std::vector<int> pending;   // unoriented edges at each vertex
    int oriented_count = 0;
    bool complete = false;    // every edge oriented
    bool degrees_ok = false;  // incoming == need everywhere
};

Propagation propagate(const RootedGraph& g) {
    Propagation p;
    const int m = static_cast<int>(g.ends.size());
    p.dir.assign(m, -1);
    p.incoming.assign(g.n + 1, 0);
    p.pending.assign(g.n + 1, 0);
    for (int e = 0; e < m; ++e) {
        ++p.pending[g.ends[e][0]];
        ++p.pending[g.ends[e][1]];
    }

    std::deque<int> queue;
    auto orient_edge = [&](int e, int tail) {
        const int head = g.ends[e][0] == tail ? g.ends[e][1] : g.ends[e][0];
        p.dir[e] = g.ends[e][0] == tail ? 0 : 1;
        --p.pending[tail];
        --p.pending[head];
        ++p.incoming[head];
        ++p.oriented_count;
        if (p.incoming[head] == g.need[head] && p.pending[head] > 0)
            queue.push_back(head);
    };

    // The two root halves are the last two edges; direct them away from the
    // root, then propagate: a vertex with all prescribed in-edges present
    // directs its remaining edges outward.
    orient_edge(m - 2, g.n);
    orient_edge(m - 1, g.n);
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        // Stale entries: the vertex got extra in-edges after being queued,
        // or a previous pass already drained it.
        if (p.incoming[v] != g.need[v] || p.pending[v] == 0) continue;
        for (const AdjEntry& a : g.adj[v])
            if (p.dir[a.edge] == -1) orient_edge(a.edge, v);
    }

    p.complete = p.oriented_count == m;
    p.degrees_ok = true;
    for (int v = 0; v <= g.n; ++v)
        if (p.incoming[v] != g.need[v]) {
            p.degrees_ok = false;
            break;
        }
    return p;
}

DirectedNetwork materialize(const RootedGraph& g, const Propagation& p) {
    std::vector<ArcKey> arcs;
    arcs.reserve(g.ends.size());
    for (int e = 0; e < static_cast<int>(g.ends.size()); ++e) {
        const int tail = g.ends[e][p.dir[e]];
        const int head = g.ends[e][1 - p.dir[e]];
        arcs.emplace_back(g.id_of(tail), g.id_of(head));
    }
    return DirectedNetwork(std::move(arcs), g.net->leaf_labels());
}

// Reads a degree cut off a stalled propagation: take the vertices whose
// incident edges are all oriented (the root, every drained vertex, every
// satisfied leaf), and cut along the boundary of that set.  The boundary
// edges' unfinished endpoints form the cut vertex set.
DegreeCut extract_stalled_cut(const RootedGraph& g, const Propagation& p) {
    std::vector<bool> done(g.n + 1);
    for (int v = 0; v <= g.n; ++v) done[v] = p.pending[v] == 0;

    std::set<EdgeKey> cut_edges;
    std::set<VertexId> cut_vertices;
    for (int e = 0; e < static_cast<int>(g.ends.size()); ++e) {
        const int a = g.ends[e][0], b = g.ends[e][1];
        if (done[a] == done[b]) continue;
        cut_edges.insert(g.key_of(e));
        cut_vertices.insert(g.id_of(done[a] ? b : a));
    }
    return DegreeCut{{cut_vertices.begin(), cut_vertices.end()},
                     {cut_edges.begin(), cut_edges.end()}};
}

bool check_cut(const RootedGraph& g, const DegreeCut& cut, std::string* why) {
    auto fail = [&](const std::string& reason) {
        if (why) *why = reason;
        return false;
    };
    if (cut.cut_edges.empty()) return fail("empty edge set is not an edge cut");

    // Resolve ids against the root-subdivided graph.  A doubled root pair
    // never yields parallel edges here (the root subdivides one copy), so
    // the key |-> index map is one-to-one.
    std::map<VertexId, int> vertex_index;
    for (int v = 0; v <= g.n; ++v) vertex_index[g.id_of(v)] = v;
    std::map<EdgeKey, int> edge_index;
    for (int e = 0; e < static_cast<int>(g.ends.size()); ++e)
        edge_index[g.key_of(e)] = e;

    std::vector<bool> removed(g.ends.size(), false);
    for (const EdgeKey& ek : cut.cut_edges) {
        auto it = edge_index.find(ek);
        if (it == edge_index.end())
            return fail("cut edge " + ek.str() + " is not an edge of the rooted network");
        removed[it->second] = true;
    }
    std::vector<bool> is_cut_vertex(g.n + 1, false);
    for (const VertexId& v : cut.cut_vertices) {
        auto it = vertex_index.find(v);
        if (it == vertex_index.end())
            return fail("cut vertex " + v + " is not a vertex of the rooted network");
        is_cut_vertex[it->second] = true;
    }

    // Condition 1: removing the cut edges disconnects the rooted network.
    // Condition 2 piggybacks on the same search: the root's component must
    // avoid every cut vertex.
    std::vector<bool> seen(g.n + 1, false);
    std::vector<int> stack = {g.n};
    seen[g.n] = true;
    int reached = 0;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        ++reached;
        if (is_cut_vertex[v]) return fail("the root still reaches a cut vertex");
        for (const AdjEntry& a : g.adj[v])
            if (!removed[a.edge] && !seen[a.neighbor]) {
                seen[a.neighbor] = true;
                stack.push_back(a.neighbor);
            }
    }
    if (reached == g.n + 1) return fail("removing the cut edges does not disconnect the network");

    // Condition 3: each cut edge touches exactly one cut vertex.
    for (const EdgeKey& ek : cut.cut_edges) {
        const int e = edge_index.at(ek);
        const int touches = (is_cut_vertex[g.ends[e][0]] ? 1 : 0) +
                            (is_cut_vertex[g.ends[e][1]] ? 1 : 0);
        if (touches != 1)
            return fail("cut edge " + ek.str() + " touches " + std::to_string(touches) +
                        " cut vertices");
    }

    // Condition 4: every cut vertex keeps spare in-degree.
    for (const VertexId& vid : cut.cut_vertices) {
        const int v = vertex_index.at(vid);
        int incident = 0;
        for (const AdjEntry& a : g.adj[v])
            if (removed[a.edge]) ++incident;
        if (incident == 0)
            return fail("cut vertex " + vid + " touches no cut edge");
        if (incident >= g.need[v])
            return fail("cut vertex " + vid + " is incident to " + std::to_string(incident) +
                        " cut edges but has prescribed in-degree " + std::to_string(g.need[v]));
    }
    return true;
}

std::optional<DegreeCut> exhaustive_search(const RootedGraph& g) {
    if (g.n > 20)
        throw std::invalid_argument(
            "exhaustive degree-cut search supports at most 20 vertices");
    const int m = static_cast<int>(g.ends.size());
    std::vector<int> boundary(g.n + 1, 0);
    std::vector<int> touched;
    // Scan the subsets of the network's vertices (the root, index n, is
    // never included).  A subset works when every inside endpoint of its
    // boundary keeps spare in-degree; its boundary is then a degree cut.
    for (std::uint32_t mask = 1; mask < (1u << g.n); ++mask) {
        touched.clear();
        bool ok = true;
        for (int e = 0; e < m && ok; ++e) {
            const int a = g.ends[e][0], b = g.ends[e][1];
            const bool ina = a < g.n && (mask >> a & 1);
            const bool inb = b < g.n && (mask >> b & 1);
            if (ina == inb) continue;
            const int w = ina ? a : b;
            if (boundary[w] == 0) touched.push_back(w);
            if (++boundary[w] >= g.need[w]) ok = false;
        }
        if (ok) {
            std::set<EdgeKey> cut_edges;
            std::set<VertexId> cut_vertices;
            for (int e = 0; e < m; ++e) {
                const int a = g.ends[e][0], b = g.ends[e][1];
                const bool ina = a < g.n && (mask >> a & 1);
                const bool inb = b < g.n && (mask >> b & 1);
                if (ina == inb) continue;
                cut_edges.insert(g.key_of(e));
                cut_vertices.insert(g.id_of(ina ? a : b));
            }
            for (const int w : touched) boundary[w] = 0;
            return DegreeCut{{cut_vertices.begin(), cut_vertices.end()},
                             {cut_edges.begin(), cut_edges.end()}};
        }
        for (const int w : touched) boundary[w] = 0;
    }
    return std::nullopt;
}

// Certificate search shared by orient() and find_degree_cut(): try the
// stalled-state extraction, fall back to the bounded exhaustive scan.
std::optional<DegreeCut> certificate(const RootedGraph& g, const Propagation& p) {
    DegreeCut stalled = extract_stalled_cut(g, p);
    if (!stalled.cut_edges.empty() && check_cut(g, stalled, nullptr))
        return stalled;
    if (g.n <= 20) {
        std::optional<DegreeCut> cut = exhaustive_search(g);
        if (!cut)
            throw std::logic_error(
                "orientation propagation failed but no degree cut exists");
        return cut;
    }
    return std::nullopt;
}

int degree_sum_target(const RootedInstance& inst) {
    return inst.network.edge_count() + (inst.duplicate_edge ? 1 : 0) + 1;
}

int degree_sum(const RootedInstance& inst) {
    int sum = 0;
    for (const auto& [v, d] : inst.degrees) {
        (void)v;
        sum += d;
    }
    return sum;
}

}  // namespace

void RootedInstance::validate() const {
    if (!network.has_edge(root_edge))
        throw ValidationError("root-edge", root_edge.str(),
                              "root location is not an edge of the network");
    if (duplicate_edge && *duplicate_edge != root_edge)
        throw ValidationError("root-edge", duplicate_edge->str(),
                              "the root must subdivide one copy of a doubled edge");
    validate_degree_map(network, degrees);
    // validate_degree_map established that the map covers exactly the vertex
    // set, so it walks in lockstep with the vertex list.
    const auto& adj = network.adjacency();
    int i = 0;
    for (const auto& [v, d] : degrees) {
        const int deg = static_cast<int>(adj[i++].size());
        const bool doubled = duplicate_edge && duplicate_edge->contains(v);
        // d == deg(v) turns an internal vertex into a sink, which no directed
        // network allows; a doubled pair gives its endpoints one extra slot.
        if (deg > 1 && !doubled && d >= deg)
            throw ValidationError("internal-sink", v,
                                  "prescribed in-degree consumes every incident edge");
    }
}

std::string DegreeCut::str() const {
    std::ostringstream out;
    out << "V'={";
    for (std::size_t i = 0; i < cut_vertices.size(); ++i)
        out << (i ? "," : "") << cut_vertices[i];
    out << "} E'={";
    for (std::size_t i = 0; i < cut_edges.size(); ++i)
        out << (i ? "," : "") << cut_edges[i].str();
    out << "}";
    return out.str();
}

std::string to_string(OrientOutcome outcome) {
    switch (outcome) {
        case OrientOutcome::oriented: return "oriented";
        case OrientOutcome::sum_mismatch: return "sum_mismatch";
        case OrientOutcome::degree_cut: return "degree_cut";
        case OrientOutcome::cut_unextracted: return "cut_unextracted";
        case OrientOutcome::arc_conflict: return "arc_conflict";
    }
    return "unknown";
}

OrientationResult orient(const RootedInstance& inst) {
    inst.validate();
    OrientationResult result;
    if (degree_sum(inst) != degree_sum_target(inst)) {
        result.outcome = OrientOutcome::sum_mismatch;
        return result;
    }
    const RootedGraph g = build_rooted(inst);
    const Propagation p = propagate(g);
    if (p.complete && p.degrees_ok) {
        result.outcome = OrientOutcome::oriented;
        result.network = materialize(g, p);
        return result;
    }
    if (std::optional<DegreeCut> cut = certificate(g, p)) {
        result.outcome = OrientOutcome::degree_cut;
        result.cut = std::move(cut);
    } else {
        result.outcome = OrientOutcome::cut_unextracted;
    }
    return result;
}

DegreeCutSearch find_degree_cut(const RootedInstance& inst) {
    inst.validate();
    if (degree_sum(inst) != degree_sum_target(inst))
        throw ValidationError("degree-sum", inst.root_edge.str(),
                              "in-degrees must sum to the edge count plus one");
    const RootedGraph g = build_rooted(inst);
    const Propagation p = propagate(g);
    DegreeCutSearch search;
    if (p.complete && p.degrees_ok) {
        search.status = DegreeCutSearch::Status::orientable;
        return search;
    }
    if (std::optional<DegreeCut> cut = certificate(g, p)) {
        search.status = DegreeCutSearch::Status::found;
        search.cut = std::move(cut);
    } else {
        search.status = DegreeCutSearch::Status::unextracted;
    }
    return search;
}

bool is_valid_degree_cut(const RootedInstance& inst, const DegreeCut& cut,
                         std::string* why) {
    if (!inst.network.has_edge(inst.root_edge))
        throw ValidationError("root-edge", inst.root_edge.str(),
                              "root location is not an edge of the network");
    return check_cut(build_rooted(inst), cut, why);
}

std::optional<DegreeCut> exhaustive_degree_cut(const RootedInstance& inst) {
    if (!inst.network.has_edge(inst.root_edge))
        throw ValidationError("root-edge", inst.root_edge.str(),
                              "root location is not an edge of the network");
    return exhaustive_search(build_rooted(inst));
}

DegreeMap binary_degree_map(const UndirectedNetwork& net,
                            const std::vector<VertexId>& reticulations) {
    DegreeMap degrees;
    for (const VertexId& v : net.vertices()) degrees[v] = 1;
    for (const VertexId& r : reticulations) {
        if (!net.has_vertex(r))
            throw ValidationError("reticulation-set", r,
                                  "named reticulation is not a vertex of the network");
        degrees[r] = 2;
    }
    return degrees;
}

OrientationResult orient_binary(const UndirectedNetwork& net,
                                const EdgeKey& root_edge,
                                const std::vector<VertexId>& reticulations,
                                const std::optional<EdgeKey>& duplicate_edge) {
    for (const VertexId& v : net.vertices()) {
        const int deg =
            net.degree(v) + (duplicate_edge && duplicate_edge->contains(v) ? 1 : 0);
        if (deg != (net.is_leaf(v) ? 1 : 3))
            throw ValidationError("binary", v,
                                  "orientation with a reticulation set requires a binary network");
    }
    const std::set<VertexId> retic_set(reticulations.begin(), reticulations.end());
    for (const VertexId& r : retic_set)
        if (!net.has_vertex(r))
            throw ValidationError("reticulation-set", r,
                                  "named reticulation is not a vertex of the network");

    OrientationResult result;
    const int edge_count = net.edge_count() + (duplicate_edge ? 1 : 0);
    if (static_cast<int>(retic_set.size()) != edge_count - net.vertex_count() + 1) {
        result.outcome = OrientOutcome::sum_mismatch;
        return result;
    }

    // A leaf cannot take in-degree 2; the leaf together with its pendant
    // edge already forms a degree cut, so report that instead of erroring.
    for (const VertexId& r : retic_set) {
        if (!net.is_leaf(r)) continue;
        const EdgeKey pendant(r, net.neighbors(r).front());
        result.outcome = OrientOutcome::degree_cut;
        result.cut = DegreeCut{
            {r}, {pendant == root_edge ? EdgeKey(kRootId, r) : pendant}};
        return result;
    }

    return orient(RootedInstance{net, root_edge, binary_degree_map(net, reticulations),
                                 duplicate_edge});
}

bool check_stack_free_rooted(const UndirectedNetwork& net,
                             const EdgeKey& root_edge,
                             const std::vector<VertexId>& reticulations) {
    const std::set<VertexId> retic_set(reticulations.begin(), reticulations.end());
    if (static_cast<int>(retic_set.size()) != net.edge_count() - net.vertex_count() + 1)
        throw ValidationError("reticulation-count", root_edge.str(),
                              "the reticulation set must have size |E| - |V| + 1");
    for (const EdgeKey& e : net.edges())
        if (retic_set.count(e.a) && retic_set.count(e.b)) return false;
    return orient_binary(net, root_edge, reticulations).oriented();
}

OrientationResult orient_partly_directed(const PartlyDirectedNetwork& net,
                                         const EdgeKey& root_edge,
                                         const std::vector<VertexId>& reticulations) {
    if (std::optional<ArcKey> rooted_arc = net.direction_of(root_edge)) {
        OrientationResult result;
        result.outcome = OrientOutcome::arc_conflict;
        result.conflicting_arcs = {*rooted_arc};
        return result;
    }
    OrientationResult result = orient_binary(net.underlying(), root_edge, reticulations);
    if (!result.oriented()) return result;
    std::vector<ArcKey> conflicts;
    for (const ArcKey& a : net.arcs())
        if (!result.network->has_arc(a.tail, a.head)) conflicts.push_back(a);
    if (!conflicts.empty()) {
        OrientationResult conflicted;
        conflicted.outcome = OrientOutcome::arc_conflict;
        conflicted.conflicting_arcs = std::move(conflicts);
        return conflicted;
    }
    return result;
}

SemiDirectedResult is_semi_directed(const PartlyDirectedNetwork& net) {
    SemiDirectedResult result;
    const UndirectedNetwork& under = net.underlying();
    if (!under.is_binary()) return result;

    std::map<VertexId, int> incoming;
    for (const ArcKey& a : net.arcs()) ++incoming[a.head];
    std::set<VertexId> retic_set;
    for (const auto& [v, count] : incoming) {
        if (count > 2) return result;  // no binary orientation feeds three arcs in
        if (count == 2) retic_set.insert(v);
    }
    const int k = under.edge_count() - under.vertex_count() + 1;
    if (static_cast<int>(retic_set.size()) != k) return result;
    const std::vector<VertexId> retics(retic_set.begin(), retic_set.end());

    for (const EdgeKey& e : under.edges()) {
        if (net.direction_of(e)) continue;  // the suppressed root edge is undirected
        OrientationResult attempt = orient_binary(under, e, retics);
        if (!attempt.oriented()) continue;

        // Suppressing the root of the candidate and keeping only its
        // reticulation arcs must give back exactly the prescribed arcs.
        std::vector<ArcKey> predicted;
        for (const ArcKey& a : attempt.network->arcs()) {
            if (!retic_set.count(a.head)) continue;
            if (a.tail == kRootId)
                predicted.emplace_back(e.other(a.head), a.head);
            else
                predicted.push_back(a);
        }
        std::sort(predicted.begin(), predicted.end());
        if (predicted == net.arcs()) {
            result.semi_directed = true;
            result.root_edge = e;
            result.network = std::move(attempt.network);
            return result;
        }
    }
    return result;
}

std::vector<DirectedNetwork> brute_force_orientations(
    const UndirectedNetwork& net, const EdgeKey& root_edge,
    const DegreeMap& degrees) {
    if (net.edge_count() > 20)
        throw std::invalid_argument(
            "brute-force orientation search supports at most 20 edges");
    if (!net.has_edge(root_edge))
        throw ValidationError("root-edge", root_edge.str(),
                              "root location is not an edge of the network");
    for (const VertexId& v : net.vertices())
        if (!degrees.count(v))
            throw ValidationError("degree-map", v, "vertex has no prescribed in-degree");

    // Non-root edges as id pairs; the two root halves are fixed arcs.
    std::vector<std::array<VertexId, 2>> free_edges;
    for (const EdgeKey& e : net.edges())
        if (e != root_edge) free_edges.push_back({e.a, e.b});
    const int f = static_cast<int>(free_edges.size());

    std::vector<DirectedNetwork> found;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << f); ++mask) {
        std::map<VertexId, int> indeg;
        indeg[root_edge.a] += 1;
        indeg[root_edge.b] += 1;
        for (int i = 0; i < f; ++i)
            indeg[free_edges[i][mask >> i & 1 ? 0 : 1]] += 1;
        bool match = true;
        for (const VertexId& v : net.vertices())
            if (indeg[v] != degrees.at(v)) {
                match = false;
                break;
            }
        if (!match) continue;

        std::vector<ArcKey> arcs;
        arcs.reserve(f + 2);
        arcs.emplace_back(kRootId, root_edge.a);
        arcs.emplace_back(kRootId, root_edge.b);
        for (int i = 0; i < f; ++i) {
            const bool flip = mask >> i & 1;
            arcs.emplace_back(free_edges[i][flip ? 1 : 0], free_edges[i][flip ? 0 : 1]);
        }
        try {
            // The constructor enforces the remaining directed-network
            // conditions (acyclicity, degree shape, labeled leaves).
            found.emplace_back(std::move(arcs), net.leaf_labels());
        } catch (const ValidationError&) {
            // In-degrees fit but the orientation is not a directed network
            // (e.g. it contains a directed cycle); skip it.
        }
    }
    return found;
}

}  // namespace phylo
