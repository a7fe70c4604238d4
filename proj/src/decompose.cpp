#include "phylo/decompose.hpp"

#include <algorithm>
#include <queue>
#include <set>

namespace phylo {

namespace {

/// Raw biconnected-component machinery over an index graph, usable for
/// both undirected networks and the underlying graphs of directed ones.
struct RawBicon {
    std::vector<std::vector<int>> component_edges;  // edge indices per block
    std::vector<char> is_cut_vertex;
};

RawBicon raw_biconnected(int n, const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::vector<AdjEntry>> adj(n);
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
        adj[edges[e].first].push_back({edges[e].second, e});
        adj[edges[e].second].push_back({edges[e].first, e});
    }

    RawBicon out;
    out.is_cut_vertex.assign(n, 0);
    std::vector<int> disc(n, -1), low(n, 0), root_children(n, 0);
    std::vector<std::size_t> next_child(n, 0);
    std::vector<int> parent_edge(n, -1);
    std::vector<int> edge_stack;
    int timer = 0;

    for (int start = 0; start < n; ++start) {
        if (disc[start] != -1) continue;
        std::vector<int> stack = {start};
        disc[start] = low[start] = timer++;
        while (!stack.empty()) {
            int v = stack.back();
            if (next_child[v] < adj[v].size()) {
                AdjEntry a = adj[v][next_child[v]++];
                if (a.edge == parent_edge[v]) continue;
                if (disc[a.neighbor] == -1) {
                    parent_edge[a.neighbor] = a.edge;
                    disc[a.neighbor] = low[a.neighbor] = timer++;
                    edge_stack.push_back(a.edge);
                    stack.push_back(a.neighbor);
                    if (v == start) ++root_children[start];
                } else if (disc[a.neighbor] < disc[v]) {
                    edge_stack.push_back(a.edge);
                    low[v] = std::min(low[v], disc[a.neighbor]);
                }
            } else {
                stack.pop_back();
                if (stack.empty()) break;
                int p = stack.back();
                low[p] = std::min(low[p], low[v]);
                if (low[v] >= disc[p]) {
                    // Edges above (and including) the tree edge p-v form a block.
                    std::vector<int> comp;
                    while (true) {
                        int e = edge_stack.back();
                        edge_stack.pop_back();
                        comp.push_back(e);
                        if (e == parent_edge[v]) break;
                    }
                    out.component_edges.push_back(std::move(comp));
                    if (p != start || root_children[start] > 1) out.is_cut_vertex[p] = 1;
                }
            }
        }
    }
    return out;
}

std::vector<std::pair<int, int>> index_edges(const UndirectedNetwork& net) {
    std::vector<std::pair<int, int>> edges;
    edges.reserve(net.edge_count());
    for (const EdgeKey& e : net.edges())
        edges.emplace_back(net.index_of(e.a), net.index_of(e.b));
    return edges;
}

int component_reticulation_number(const std::vector<int>& comp_edges,
                                  const std::vector<std::pair<int, int>>& edges) {
    std::set<int> verts;
    for (int e : comp_edges) {
        verts.insert(edges[e].first);
        verts.insert(edges[e].second);
    }
    return static_cast<int>(comp_edges.size()) - static_cast<int>(verts.size()) + 1;
}

}  // namespace

int BlobDecomposition::blob_of(const VertexId& v) const {
    for (int i = 0; i < static_cast<int>(blobs.size()); ++i)
        if (std::binary_search(blobs[i].begin(), blobs[i].end(), v)) return i;
    return -1;
}

BlobDecomposition blob_decomposition(const UndirectedNetwork& net) {
    std::vector<std::pair<int, int>> edges = index_edges(net);
    RawBicon raw = raw_biconnected(net.vertex_count(), edges);

    BlobDecomposition out;
    struct Block {
        std::vector<VertexId> verts;
        std::vector<EdgeKey> edges;
    };
    std::vector<Block> blocks;
    for (const std::vector<int>& comp : raw.component_edges) {
        Block b;
        std::set<VertexId> vs;
        for (int e : comp) {
            b.edges.push_back(net.edge_at(e));
            vs.insert(net.edge_at(e).a);
            vs.insert(net.edge_at(e).b);
        }
        b.verts.assign(vs.begin(), vs.end());
        std::sort(b.edges.begin(), b.edges.end());
        blocks.push_back(std::move(b));
    }
    std::sort(blocks.begin(), blocks.end(),
              [](const Block& x, const Block& y) { return x.verts < y.verts; });

    for (const Block& b : blocks) {
        out.block_vertices.push_back(b.verts);
        if (b.verts.size() >= 3) {
            out.blobs.push_back(b.verts);
            out.blob_edges.push_back(b.edges);
        } else {
            out.cut_edges.push_back(b.edges.front());
        }
    }
    std::sort(out.cut_edges.begin(), out.cut_edges.end());
    for (int v = 0; v < net.vertex_count(); ++v)
        if (raw.is_cut_vertex[v]) out.cut_vertices.push_back(net.id_of(v));
    std::sort(out.cut_vertices.begin(), out.cut_vertices.end());

    // Block-cut tree: block nodes first, then cut-vertex nodes.
    std::map<VertexId, int> cut_node;
    for (std::size_t i = 0; i < out.block_vertices.size(); ++i)
        out.tree.nodes.push_back({true, static_cast<int>(i), {}});
    for (const VertexId& v : out.cut_vertices) {
        cut_node[v] = static_cast<int>(out.tree.nodes.size());
        out.tree.nodes.push_back({false, -1, v});
    }
    for (std::size_t i = 0; i < out.block_vertices.size(); ++i)
        for (const VertexId& v : out.block_vertices[i]) {
            auto it = cut_node.find(v);
            if (it != cut_node.end())
                out.tree.links.emplace_back(static_cast<int>(i), it->second);
        }
    return out;
}

GraphStats graph_stats(const UndirectedNetwork& net) {
    GraphStats s;
    s.vertex_count = net.vertex_count();
    s.edge_count = net.edge_count();
    s.leaf_count = static_cast<int>(net.leaf_labels().size());
    s.reticulation_number = net.edge_count() - net.vertex_count() + 1;
    s.binary = net.is_binary();

    std::vector<std::pair<int, int>> edges = index_edges(net);
    RawBicon raw = raw_biconnected(net.vertex_count(), edges);
    for (const std::vector<int>& comp : raw.component_edges) {
        if (comp.size() < 3) continue;  // a bridge; blobs have >= 3 edges
        ++s.blob_count;
        s.level = std::max(s.level, component_reticulation_number(comp, edges));
    }
    return s;
}

GraphStats graph_stats(const DirectedNetwork& net) {
    GraphStats s;
    s.vertex_count = net.vertex_count();
    s.edge_count = net.arc_count();
    s.leaf_count = static_cast<int>(net.leaf_labels().size());
    for (const VertexId& v : net.vertices())
        if (net.indegree(v) >= 2) s.reticulation_number += net.indegree(v) - 1;
    s.binary = net.is_binary();

    std::vector<std::pair<int, int>> edges;
    for (const ArcKey& a : net.arcs())
        edges.emplace_back(net.index_of(a.tail), net.index_of(a.head));
    RawBicon raw = raw_biconnected(net.vertex_count(), edges);
    for (const std::vector<int>& comp : raw.component_edges) {
        if (comp.size() < 3) continue;
        ++s.blob_count;
        s.level = std::max(s.level, component_reticulation_number(comp, edges));
    }
    return s;
}

bool is_orientable(const UndirectedNetwork& net) {
    BlobDecomposition dec = blob_decomposition(net);
    int redundant_terminal = 0;
    for (const std::vector<VertexId>& blob : dec.blobs) {
        int cuts = 0;
        for (const VertexId& v : blob)
            if (std::binary_search(dec.cut_vertices.begin(), dec.cut_vertices.end(), v)) ++cuts;
        if (cuts == 1) ++redundant_terminal;
    }
    return redundant_terminal <= 1;
}

namespace {

/// Vertices surviving iterated removal of degree-1 vertices (the 2-core).
std::vector<char> two_core(const UndirectedNetwork& net) {
    std::vector<int> deg(net.vertex_count());
    std::vector<char> in_core(net.vertex_count(), 1);
    std::queue<int> q;
    for (int v = 0; v < net.vertex_count(); ++v) {
        deg[v] = static_cast<int>(net.adjacency()[v].size());
        if (deg[v] <= 1) q.push(v);
    }
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        if (!in_core[v]) continue;
        in_core[v] = 0;
        for (const AdjEntry& a : net.adjacency()[v])
            if (in_core[a.neighbor] && --deg[a.neighbor] <= 1) q.push(a.neighbor);
    }
    return in_core;
}

/// Allocates ids "_g0", "_g1", ... that collide with nothing in `taken`.
class FreshIds {
public:
    explicit FreshIds(std::set<std::string> taken) : taken_(std::move(taken)) {}
    std::string next() {
        while (true) {
            std::string id = std::string(kFreshIdPrefix) + std::to_string(counter_++);
            if (taken_.insert(id).second) return id;
        }
    }

private:
    std::set<std::string> taken_;
    int counter_ = 0;
};

std::set<std::string> taken_names(const UndirectedNetwork& net) {
    std::set<std::string> taken(net.vertices().begin(), net.vertices().end());
    for (const auto& [v, label] : net.leaf_labels()) taken.insert(label);
    return taken;
}

}  // namespace

PendantReduction reduce_pendant_subtrees(const UndirectedNetwork& net) {
    std::vector<char> in_core = two_core(net);
    bool core_empty = std::none_of(in_core.begin(), in_core.end(), [](char c) { return c; });

    if (core_empty) {
        // Pure tree. Collapse to the single edge joining the two leaves with
        // the lexicographically smallest labels.
        if (net.edge_count() == 1) return {net, {}};
        std::vector<std::pair<std::string, VertexId>> by_label;
        for (const auto& [v, label] : net.leaf_labels()) by_label.emplace_back(label, v);
        std::sort(by_label.begin(), by_label.end());
        VertexId v1 = by_label[0].second, v2 = by_label[1].second;
        UndirectedNetwork reduced({EdgeKey(v1, v2)},
                                  {{v1, net.label_of(v1)}, {v2, net.label_of(v2)}});
        PendantReduction out{std::move(reduced), {}};
        out.replaced[v1] = net.edges();
        return out;
    }

    std::vector<EdgeKey> edges;
    std::map<VertexId, std::string> labels;
    for (const EdgeKey& e : net.edges()) {
        bool a_core = in_core[net.index_of(e.a)];
        bool b_core = in_core[net.index_of(e.b)];
        if (a_core && b_core) edges.push_back(e);
    }

    FreshIds fresh(taken_names(net));
    std::map<VertexId, std::vector<EdgeKey>> replaced;

    for (int u = 0; u < net.vertex_count(); ++u) {
        if (!in_core[u]) continue;
        for (const AdjEntry& a : net.adjacency()[u]) {
            if (in_core[a.neighbor]) continue;
            const VertexId& t = net.id_of(a.neighbor);
            if (net.is_leaf(t)) {
                // Trivial pendant subtree: kept as-is.
                edges.push_back(net.edge_at(a.edge));
                labels[t] = net.label_of(t);
                continue;
            }
            // Collect the subtree hanging below u through t.
            std::vector<EdgeKey> subtree = {net.edge_at(a.edge)};
            std::vector<int> stack = {a.neighbor};
            std::vector<char> seen(net.vertex_count(), 0);
            seen[a.neighbor] = 1;
            seen[u] = 1;
            while (!stack.empty()) {
                int w = stack.back();
                stack.pop_back();
                for (const AdjEntry& b : net.adjacency()[w])
                    if (!seen[b.neighbor]) {
                        seen[b.neighbor] = 1;
                        subtree.push_back(net.edge_at(b.edge));
                        stack.push_back(b.neighbor);
                    }
            }
            std::sort(subtree.begin(), subtree.end());
            VertexId leaf = fresh.next();
            edges.emplace_back(net.id_of(u), leaf);
            labels[leaf] = leaf;
            replaced[leaf] = std::move(subtree);
        }
    }
    return {UndirectedNetwork(std::move(edges), std::move(labels)), std::move(replaced)};
}

std::vector<EdgeKey> GeneratorSide::edges() const {
    std::vector<EdgeKey> out;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) out.emplace_back(path[i], path[i + 1]);
    return out;
}

Generator generator(const UndirectedNetwork& net) {
    int k = net.edge_count() - net.vertex_count() + 1;
    if (k < 2)
        throw ValidationError("generator-defined", "",
                              "generator requires reticulation number >= 2, got " +
                                  std::to_string(k));

    std::vector<char> in_core = two_core(net);
    std::vector<int> core_deg(net.vertex_count(), 0);
    for (int v = 0; v < net.vertex_count(); ++v) {
        if (!in_core[v]) continue;
        for (const AdjEntry& a : net.adjacency()[v])
            if (in_core[a.neighbor]) ++core_deg[v];
    }

    Generator gen;
    for (int v = 0; v < net.vertex_count(); ++v)
        if (in_core[v] && core_deg[v] >= 3) gen.vertices.push_back(net.id_of(v));
    std::sort(gen.vertices.begin(), gen.vertices.end());

    auto leaves_of = [&](int w) {
        std::vector<VertexId> out;
        for (const AdjEntry& a : net.adjacency()[w])
            if (!in_core[a.neighbor] && net.is_leaf(net.id_of(a.neighbor)))
                out.push_back(net.id_of(a.neighbor));
        std::sort(out.begin(), out.end());
        return out;
    };

    std::vector<char> edge_used(net.edge_count(), 0);
    for (const VertexId& gid : gen.vertices) {
        int g = net.index_of(gid);
        for (const AdjEntry& a : net.adjacency()[g]) {
            if (edge_used[a.edge] || !in_core[a.neighbor]) continue;
            // Walk the side starting with this edge until the next
            // generator vertex.
            GeneratorSide side;
            side.path.push_back(gid);
            edge_used[a.edge] = 1;
            int prev_edge = a.edge;
            int w = a.neighbor;
            while (core_deg[w] < 3) {
                side.path.push_back(net.id_of(w));
                for (const VertexId& leaf : leaves_of(w)) side.chain.push_back(leaf);
                for (const AdjEntry& b : net.adjacency()[w])
                    if (in_core[b.neighbor] && b.edge != prev_edge) {
                        edge_used[b.edge] = 1;
                        prev_edge = b.edge;
                        w = b.neighbor;
                        break;
                    }
            }
            side.path.push_back(net.id_of(w));

            // Canonical direction: smaller endpoint first; for loops the
            // smaller inner sequence.
            side.u = side.path.front();
            side.v = side.path.back();
            bool flip = false;
            if (side.v < side.u) {
                flip = true;
            } else if (side.u == side.v) {
                std::vector<VertexId> rev(side.path.rbegin(), side.path.rend());
                if (rev < side.path) flip = true;
            }
            if (flip) {
                std::reverse(side.path.begin(), side.path.end());
                side.u = side.path.front();
                side.v = side.path.back();
                // Rebuild the chain in the flipped order.
                side.chain.clear();
                for (std::size_t i = 1; i + 1 < side.path.size(); ++i)
                    for (const VertexId& leaf : leaves_of(net.index_of(side.path[i])))
                        side.chain.push_back(leaf);
            }
            gen.sides.push_back(std::move(side));
        }
    }

    // Every core edge must lie on exactly one side.
    for (int e = 0; e < net.edge_count(); ++e) {
        const EdgeKey& ek = net.edge_at(e);
        bool core = in_core[net.index_of(ek.a)] && in_core[net.index_of(ek.b)];
        if (core && !edge_used[e])
            throw std::logic_error("generator: core edge " + ek.str() + " not on any side");
    }

    std::sort(gen.sides.begin(), gen.sides.end(),
              [](const GeneratorSide& x, const GeneratorSide& y) {
                  auto inner_min = [](const GeneratorSide& s) -> VertexId {
                      if (s.path.size() <= 2) return "";
                      return *std::min_element(s.path.begin() + 1, s.path.end() - 1);
                  };
                  return std::tuple(x.u, x.v, inner_min(x)) < std::tuple(y.u, y.v, inner_min(y));
              });
    return gen;
}

InducedBlob induced_blob_network(const UndirectedNetwork& net,
                                 const std::vector<VertexId>& blob) {
    BlobDecomposition dec = blob_decomposition(net);
    std::vector<VertexId> sorted = blob;
    std::sort(sorted.begin(), sorted.end());
    int index = -1;
    for (int i = 0; i < static_cast<int>(dec.blobs.size()); ++i)
        if (dec.blobs[i] == sorted) {
            index = i;
            break;
        }
    if (index < 0)
        throw ValidationError("blob-of-network", sorted.empty() ? "" : sorted.front(),
                              "vertex set is not a blob of the network");

    const std::vector<EdgeKey>& blob_edges = dec.blob_edges[index];
    std::map<VertexId, int> blob_degree;
    for (const EdgeKey& e : blob_edges) {
        ++blob_degree[e.a];
        ++blob_degree[e.b];
    }

    std::vector<EdgeKey> edges = blob_edges;
    std::map<VertexId, std::string> labels;
    std::map<VertexId, VertexId> leaf_for_vertex;
    FreshIds fresh(taken_names(net));
    for (const VertexId& v : sorted) {
        if (blob_degree[v] != 2) continue;
        VertexId leaf = fresh.next();
        edges.emplace_back(v, leaf);
        labels[leaf] = leaf;
        leaf_for_vertex[v] = leaf;
    }
    return {UndirectedNetwork(std::move(edges), std::move(labels)),
            std::move(leaf_for_vertex)};
}

}  // namespace phylo
