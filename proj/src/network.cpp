#include "phylo/network.hpp"

#include <algorithm>
#include <array>
#include <queue>
#include <set>

namespace phylo {

bool is_user_vertex_id(const VertexId& id) {
    if (id == kRootId) return false;
    if (id.rfind(kFreshIdPrefix, 0) == 0) return false;
    return !id.empty();
}

// ---------------------------------------------------------------------------
// UndirectedNetwork
// ---------------------------------------------------------------------------

UndirectedNetwork::UndirectedNetwork(std::vector<EdgeKey> edges,
                                     std::map<VertexId, std::string> leaf_labels) {
    build_and_validate(std::move(edges), std::move(leaf_labels), {});
}

UndirectedNetwork UndirectedNetwork::with_degree2_exemption(
    std::vector<EdgeKey> edges, std::map<VertexId, std::string> leaf_labels,
    const std::vector<VertexId>& degree2_allowed) {
    UndirectedNetwork net;
    net.build_and_validate(std::move(edges), std::move(leaf_labels), degree2_allowed);
    return net;
}

void UndirectedNetwork::build_and_validate(std::vector<EdgeKey> edges,
                                           std::map<VertexId, std::string> labels,
                                           const std::vector<VertexId>& degree2_allowed) {
    if (edges.empty())
        throw ValidationError("nonempty", "", "a network needs at least one edge");

    std::sort(edges.begin(), edges.end());
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (edges[i].a == edges[i].b)
            throw ValidationError("simple", edges[i].a, "loop edge");
        if (i > 0 && edges[i] == edges[i - 1])
            throw ValidationError("simple", edges[i].a, "duplicate edge " + edges[i].str());
    }
    edges_ = std::move(edges);

    for (const EdgeKey& e : edges_) {
        verts_.push_back(e.a);
        verts_.push_back(e.b);
    }
    std::sort(verts_.begin(), verts_.end());
    verts_.erase(std::unique(verts_.begin(), verts_.end()), verts_.end());
    index_.reserve(verts_.size() * 2);
    for (int i = 0; i < static_cast<int>(verts_.size()); ++i) index_[verts_[i]] = i;

    adj_.assign(verts_.size(), {});
    for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
        int ia = index_[edges_[e].a];
        int ib = index_[edges_[e].b];
        adj_[ia].push_back({ib, e});
        adj_[ib].push_back({ia, e});
    }

    // Connectivity.
    std::vector<char> seen(verts_.size(), 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int reached = 0;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        ++reached;
        for (const AdjEntry& a : adj_[v])
            if (!seen[a.neighbor]) {
                seen[a.neighbor] = 1;
                q.push(a.neighbor);
            }
    }
    if (reached != static_cast<int>(verts_.size())) {
        for (std::size_t i = 0; i < verts_.size(); ++i)
            if (!seen[i])
                throw ValidationError("connected", verts_[i], "vertex unreachable from " + verts_[0]);
    }

    // Degree constraints.
    std::set<VertexId> exempt(degree2_allowed.begin(), degree2_allowed.end());
    for (std::size_t i = 0; i < verts_.size(); ++i) {
        if (adj_[i].size() == 2 && !exempt.count(verts_[i]))
            throw ValidationError("no-degree-2", verts_[i], "vertex has degree 2");
    }

    // Leaf labelling: bijection from degree-1 vertices to labels.
    leaf_labels_ = std::move(labels);
    std::set<std::string> used_labels;
    for (const auto& [v, label] : leaf_labels_) {
        auto it = index_.find(v);
        if (it == index_.end())
            throw ValidationError("leaf-labels", v, "labelled vertex does not exist");
        if (adj_[it->second].size() != 1)
            throw ValidationError("leaf-labels", v, "labelled vertex is not a leaf");
        if (!used_labels.insert(label).second)
            throw ValidationError("leaf-labels", v, "label '" + label + "' used twice");
    }
    for (std::size_t i = 0; i < verts_.size(); ++i)
        if (adj_[i].size() == 1 && !leaf_labels_.count(verts_[i]))
            throw ValidationError("leaf-labels", verts_[i], "leaf has no label");
}

bool UndirectedNetwork::has_edge(const VertexId& u, const VertexId& v) const {
    return edge_index(EdgeKey(u, v)) >= 0;
}

int UndirectedNetwork::edge_index(const EdgeKey& e) const {
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
    if (it == edges_.end() || !(*it == e)) return -1;
    return static_cast<int>(it - edges_.begin());
}

std::vector<VertexId> UndirectedNetwork::neighbors(const VertexId& v) const {
    std::vector<VertexId> out;
    for (const AdjEntry& a : adj_[index_of(v)]) out.push_back(verts_[a.neighbor]);
    std::sort(out.begin(), out.end());
    return out;
}

const std::string& UndirectedNetwork::label_of(const VertexId& v) const {
    auto it = leaf_labels_.find(v);
    if (it == leaf_labels_.end()) throw std::out_of_range("no label for vertex " + v);
    return it->second;
}

bool UndirectedNetwork::is_binary() const {
    for (std::size_t i = 0; i < verts_.size(); ++i)
        if (adj_[i].size() != 1 && adj_[i].size() != 3) return false;
    return true;
}

int UndirectedNetwork::index_of(const VertexId& v) const {
    auto it = index_.find(v);
    if (it == index_.end()) throw std::out_of_range("no vertex " + v);
    return it->second;
}

// ---------------------------------------------------------------------------
// DirectedNetwork
// ---------------------------------------------------------------------------

DirectedNetwork::DirectedNetwork(std::vector<ArcKey> arcs,
                                 std::map<VertexId, std::string> leaf_labels) {
    if (arcs.empty()) throw ValidationError("nonempty", "", "a network needs at least one arc");
    arcs_ = std::move(arcs);
    leaf_labels_ = std::move(leaf_labels);

    index_.reserve(arcs_.size() + 1);
    for (const ArcKey& a : arcs_) {
        if (a.tail == a.head) throw ValidationError("simple", a.tail, "loop arc");
        for (const VertexId* v : {&a.tail, &a.head})
            if (index_.try_emplace(*v, static_cast<int>(verts_.size())).second)
                verts_.push_back(*v);
    }

    const int n = static_cast<int>(verts_.size());
    const int m = static_cast<int>(arcs_.size());

    // Both adjacency directions in offset/payload form, entries per vertex
    // in increasing arc-index order: a counting pass sizes the buckets, a
    // fill pass writes them, with no per-vertex allocations.
    std::vector<std::array<int, 2>> arc_ends(m);
    poff_.assign(n + 1, 0);
    coff_.assign(n + 1, 0);
    for (int i = 0; i < m; ++i) {
        const int t = index_.find(arcs_[i].tail)->second;
        const int h = index_.find(arcs_[i].head)->second;
        arc_ends[i] = {t, h};
        ++coff_[t + 1];
        ++poff_[h + 1];
    }
    for (int v = 0; v < n; ++v) {
        coff_[v + 1] += coff_[v];
        poff_[v + 1] += poff_[v];
    }
    cadj_.resize(m);
    padj_.resize(m);
    {
        std::vector<int> cpos(coff_.begin(), coff_.end() - 1);
        std::vector<int> ppos(poff_.begin(), poff_.end() - 1);
        for (int i = 0; i < m; ++i) {
            cadj_[cpos[arc_ends[i][0]]++] = {arc_ends[i][1], i};
            padj_[ppos[arc_ends[i][1]]++] = {arc_ends[i][0], i};
        }
    }
    {
        // Duplicate-arc scan: each tail's bucket lists arc indices in
        // increasing order, so stamping each head with its tail finds, per
        // pair, the earliest repeat; report the overall earliest to keep
        // the error independent of vertex numbering.
        std::vector<int> head_owner(n, -1);
        int dup = -1;
        for (int t = 0; t < n; ++t)
            for (const AdjEntry& a : children_of(t)) {
                if (head_owner[a.neighbor] == t) {
                    if (dup < 0 || a.edge < dup) dup = a.edge;
                } else {
                    head_owner[a.neighbor] = t;
                }
            }
        if (dup >= 0)
            throw ValidationError("simple", arcs_[dup].tail, "duplicate arc " + arcs_[dup].str());
    }

    // Weak connectivity.
    std::vector<char> seen(n, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int reached = 0;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        ++reached;
        for (const std::span<const AdjEntry> half : {children_of(v), parents_of(v)})
            for (const AdjEntry& a : half)
                if (!seen[a.neighbor]) {
                    seen[a.neighbor] = 1;
                    q.push(a.neighbor);
                }
    }
    if (reached != n)
        throw ValidationError("connected", "", "network is not connected");

    // Acyclicity via Kahn's algorithm.
    {
        std::vector<int> indeg(n);
        std::queue<int> ready;
        for (int v = 0; v < n; ++v) {
            indeg[v] = indegree_at(v);
            if (indeg[v] == 0) ready.push(v);
        }
        int processed = 0;
        while (!ready.empty()) {
            int v = ready.front();
            ready.pop();
            ++processed;
            for (const AdjEntry& a : children_of(v))
                if (--indeg[a.neighbor] == 0) ready.push(a.neighbor);
        }
        if (processed != n)
            throw ValidationError("acyclic", "", "network contains a directed cycle");
    }

    // Root: unique indegree-0 vertex with outdegree 2.
    for (int v = 0; v < n; ++v) {
        if (indegree_at(v) == 0) {
            if (root_ >= 0)
                throw ValidationError("unique-root", verts_[v], "second indegree-0 vertex");
            root_ = v;
        }
    }
    if (root_ < 0) throw ValidationError("unique-root", "", "no indegree-0 vertex");
    if (outdegree_at(root_) != 2)
        throw ValidationError("root-outdegree-2", verts_[root_],
                              "root has outdegree " + std::to_string(outdegree_at(root_)));

    // No indegree-1 outdegree-1 vertices; leaves labelled bijectively.
    std::set<std::string> used_labels;
    for (int v = 0; v < n; ++v) {
        const int in = indegree_at(v), out = outdegree_at(v);
        if (in == 1 && out == 1)
            throw ValidationError("no-indeg1-outdeg1", verts_[v], "suppressible vertex");
        if (out == 0) {
            if (in != 1)
                throw ValidationError("leaf-indegree-1", verts_[v],
                                      "sink with indegree " + std::to_string(in));
            auto it = leaf_labels_.find(verts_[v]);
            if (it == leaf_labels_.end())
                throw ValidationError("leaf-labels", verts_[v], "leaf has no label");
            if (!used_labels.insert(it->second).second)
                throw ValidationError("leaf-labels", verts_[v],
                                      "label '" + it->second + "' used twice");
        }
    }
    for (const auto& [v, label] : leaf_labels_) {
        auto it = index_.find(v);
        if (it == index_.end())
            throw ValidationError("leaf-labels", v, "labelled vertex does not exist");
        if (outdegree_at(it->second) != 0)
            throw ValidationError("leaf-labels", v, "labelled vertex is not a leaf");
    }
}

bool DirectedNetwork::has_arc(const VertexId& t, const VertexId& h) const {
    auto it = index_.find(t);
    auto ih = index_.find(h);
    if (it == index_.end() || ih == index_.end()) return false;
    for (const AdjEntry& a : children_of(it->second))
        if (a.neighbor == ih->second) return true;
    return false;
}

std::vector<VertexId> DirectedNetwork::parents(const VertexId& v) const {
    std::vector<VertexId> out;
    for (const AdjEntry& a : parents_of(index_of(v))) out.push_back(verts_[a.neighbor]);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<VertexId> DirectedNetwork::children(const VertexId& v) const {
    std::vector<VertexId> out;
    for (const AdjEntry& a : children_of(index_of(v))) out.push_back(verts_[a.neighbor]);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<VertexId> DirectedNetwork::reticulations() const {
    std::vector<VertexId> out;
    for (int v = 0; v < static_cast<int>(verts_.size()); ++v)
        if (indegree_at(v) >= 2) out.push_back(verts_[v]);
    std::sort(out.begin(), out.end());
    return out;
}

const std::string& DirectedNetwork::label_of(const VertexId& v) const {
    auto it = leaf_labels_.find(v);
    if (it == leaf_labels_.end()) throw std::out_of_range("no label for vertex " + v);
    return it->second;
}

bool DirectedNetwork::is_binary() const {
    for (int v = 0; v < static_cast<int>(verts_.size()); ++v) {
        const int in = indegree_at(v), out = outdegree_at(v);
        if (v == root_ || out == 0) continue;  // checked at construction
        if (!((in == 1 && out == 2) || (in == 2 && out == 1))) return false;
    }
    return true;
}

int DirectedNetwork::index_of(const VertexId& v) const {
    auto it = index_.find(v);
    if (it == index_.end()) throw std::out_of_range("no vertex " + v);
    return it->second;
}

// ---------------------------------------------------------------------------
// PartlyDirectedNetwork
// ---------------------------------------------------------------------------

namespace {
UndirectedNetwork make_underlying(const std::vector<EdgeKey>& edges,
                                  const std::vector<ArcKey>& arcs,
                                  std::map<VertexId, std::string> labels) {
    // Report a pair carried as both an edge and an arc (or as two arcs) as
    // an edge-or-arc conflict, not as the duplicate edge it would otherwise
    // become in the underlying network.
    std::set<EdgeKey> undirected(edges.begin(), edges.end());
    std::set<EdgeKey> directed;
    for (const ArcKey& a : arcs) {
        EdgeKey e = a.as_edge();
        if (undirected.count(e) > 0)
            throw ValidationError("edge-or-arc", a.tail,
                                  "pair " + e.str() + " is both an edge and an arc");
        if (!directed.insert(e).second)
            throw ValidationError("edge-or-arc", a.tail,
                                  "pair " + e.str() + " carries two arcs");
    }
    std::vector<EdgeKey> all = edges;
    for (const ArcKey& a : arcs) all.push_back(a.as_edge());
    return UndirectedNetwork(std::move(all), std::move(labels));
}
}  // namespace

PartlyDirectedNetwork::PartlyDirectedNetwork(std::vector<EdgeKey> edges, std::vector<ArcKey> arcs,
                                             std::map<VertexId, std::string> leaf_labels)
    : edges_(std::move(edges)),
      arcs_(std::move(arcs)),
      leaf_labels_(leaf_labels),
      underlying_(make_underlying(edges_, arcs_, std::move(leaf_labels))) {
    std::sort(edges_.begin(), edges_.end());
    std::sort(arcs_.begin(), arcs_.end());
    for (const ArcKey& a : arcs_) {
        EdgeKey e = a.as_edge();
        if (std::binary_search(edges_.begin(), edges_.end(), e))
            throw ValidationError("edge-or-arc", a.tail,
                                  "pair " + e.str() + " is both an edge and an arc");
        if (!arc_of_edge_.emplace(e, a).second)
            throw ValidationError("edge-or-arc", a.tail,
                                  "pair " + e.str() + " carries two arcs");
    }
}

std::optional<ArcKey> PartlyDirectedNetwork::direction_of(const EdgeKey& e) const {
    auto it = arc_of_edge_.find(e);
    if (it == arc_of_edge_.end()) return std::nullopt;
    return it->second;
}

// ---------------------------------------------------------------------------
// DegreeMap / underlying_network / isomorphism
// ---------------------------------------------------------------------------

void validate_degree_map(const UndirectedNetwork& net, const DegreeMap& degrees) {
    // The vertex list and the map both iterate in increasing id order, so one
    // merge pass covers the three checks without per-vertex lookups.
    const std::vector<VertexId>& verts = net.vertices();
    const auto& adj = net.adjacency();
    auto it = degrees.begin();
    for (std::size_t i = 0; i < verts.size(); ++i) {
        if (it != degrees.end() && it->first < verts[i])
            throw ValidationError("degree-map", it->first, "degree entry for unknown vertex");
        if (it == degrees.end() || it->first != verts[i])
            throw ValidationError("degree-map", verts[i], "no desired indegree for vertex");
        const int deg = static_cast<int>(adj[i].size());
        if (it->second < 1 || it->second > deg)
            throw ValidationError("degree-map", verts[i],
                                  "desired indegree " + std::to_string(it->second) +
                                      " outside [1, " + std::to_string(deg) + "]");
        ++it;
    }
    if (it != degrees.end())
        throw ValidationError("degree-map", it->first, "degree entry for unknown vertex");
}

UnderlyingResult underlying_network(const DirectedNetwork& dn) {
    const VertexId& root = dn.root();
    std::vector<VertexId> rc = dn.children(root);
    // A binary root always has two children; a repeated child would be a
    // parallel arc, which DirectedNetwork already rejects.
    EdgeKey merged(rc[0], rc[1]);

    std::vector<EdgeKey> edges;
    bool have_merged_already = false;
    for (const ArcKey& a : dn.arcs()) {
        if (a.tail == root) continue;
        EdgeKey e = a.as_edge();
        if (e == merged) have_merged_already = true;
        edges.push_back(std::move(e));
    }
    std::optional<EdgeKey> parallel;
    if (have_merged_already) {
        // Suppressing the root would duplicate `merged`; keep one copy and
        // report the pair.
        parallel = merged;
    } else {
        edges.push_back(merged);
    }

    std::map<VertexId, std::string> labels = dn.leaf_labels();
    if (parallel) {
        return {UndirectedNetwork::with_degree2_exemption(std::move(edges), std::move(labels),
                                                          {merged.a, merged.b}),
                parallel};
    }
    return {UndirectedNetwork(std::move(edges), std::move(labels)), std::nullopt};
}

namespace {

// Backtracking isomorphism extension: `map_lr` pins lhs->rhs indices.
bool extend_isomorphism(const UndirectedNetwork& l, const UndirectedNetwork& r,
                        std::vector<int>& map_lr, std::vector<int>& map_rl,
                        std::vector<int>& pending) {
    while (!pending.empty()) {
        int lv = pending.back();
        pending.pop_back();
        int rv = map_lr[lv];
        const auto& ladj = l.adjacency()[lv];
        const auto& radj = r.adjacency()[rv];
        if (ladj.size() != radj.size()) return false;
        // Match mapped neighbours first, then try assignments for the rest.
        std::vector<int> l_un, r_un;
        std::vector<char> r_used(radj.size(), 0);
        for (const AdjEntry& la : ladj) {
            int ln = la.neighbor;
            if (map_lr[ln] >= 0) {
                bool found = false;
                for (std::size_t i = 0; i < radj.size(); ++i)
                    if (!r_used[i] && radj[i].neighbor == map_lr[ln]) {
                        r_used[i] = 1;
                        found = true;
                        break;
                    }
                if (!found) return false;
            } else {
                l_un.push_back(ln);
            }
        }
        for (std::size_t i = 0; i < radj.size(); ++i)
            if (!r_used[i] && map_rl[radj[i].neighbor] < 0) r_un.push_back(radj[i].neighbor);
        if (l_un.size() > r_un.size()) return false;
        if (l_un.empty()) continue;

        // Try all pairings of the first unmapped lhs neighbour.
        int ln = l_un.front();
        for (int rn : r_un) {
            if (l.degree(l.id_of(ln)) != r.degree(r.id_of(rn))) continue;
            std::vector<int> save_lr = map_lr, save_rl = map_rl, save_p = pending;
            map_lr[ln] = rn;
            map_rl[rn] = ln;
            pending.push_back(ln);
            pending.push_back(lv);  // revisit to bind remaining neighbours
            if (extend_isomorphism(l, r, map_lr, map_rl, pending)) return true;
            map_lr = std::move(save_lr);
            map_rl = std::move(save_rl);
            pending = std::move(save_p);
        }
        return false;
    }
    return true;
}

}  // namespace

bool isomorphic(const UndirectedNetwork& lhs, const UndirectedNetwork& rhs) {
    if (lhs.vertex_count() != rhs.vertex_count() || lhs.edge_count() != rhs.edge_count())
        return false;
    if (lhs.leaf_labels().size() != rhs.leaf_labels().size()) return false;

    // Anchor: leaves must map by label.
    std::map<std::string, VertexId> rhs_by_label;
    for (const auto& [v, label] : rhs.leaf_labels()) rhs_by_label[label] = v;
    std::vector<int> map_lr(lhs.vertex_count(), -1), map_rl(rhs.vertex_count(), -1);
    std::vector<int> pending;
    for (const auto& [v, label] : lhs.leaf_labels()) {
        auto it = rhs_by_label.find(label);
        if (it == rhs_by_label.end()) return false;
        int lv = lhs.index_of(v), rv = rhs.index_of(it->second);
        map_lr[lv] = rv;
        map_rl[rv] = lv;
        pending.push_back(lv);
    }
    if (pending.empty()) return false;  // labelled networks always have leaves
    return extend_isomorphism(lhs, rhs, map_lr, map_rl, pending);
}

}  // namespace phylo
