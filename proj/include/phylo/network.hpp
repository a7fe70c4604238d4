#pragma once

#include <array>
#include <compare>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace phylo {

using VertexId = std::string;

/// Thrown when input text cannot be tokenized/understood.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("parse error (line " + std::to_string(line) + "): " + what),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Thrown when a structural invariant of a network type is violated.
/// Carries the invariant name and the offending vertex (possibly empty).
class ValidationError : public std::runtime_error {
public:
    ValidationError(std::string invariant, std::string vertex, const std::string& detail)
        : std::runtime_error("invariant '" + invariant + "' violated" +
                             (vertex.empty() ? "" : " at vertex '" + vertex + "'") + ": " + detail),
          invariant_(std::move(invariant)),
          vertex_(std::move(vertex)) {}
    const std::string& invariant() const { return invariant_; }
    const std::string& vertex() const { return vertex_; }

private:
    std::string invariant_;
    std::string vertex_;
};

/// Unordered pair of vertex ids; normalized so that a <= b.
struct EdgeKey {
    VertexId a, b;

    EdgeKey() = default;
    EdgeKey(VertexId u, VertexId v) {
        if (v < u) std::swap(u, v);
        a = std::move(u);
        b = std::move(v);
    }
    bool operator==(const EdgeKey&) const = default;
    auto operator<=>(const EdgeKey&) const = default;
    bool contains(const VertexId& v) const { return a == v || b == v; }
    /// The endpoint that is not `v`; requires contains(v).
    const VertexId& other(const VertexId& v) const { return a == v ? b : a; }
    std::string str() const { return "{" + a + "," + b + "}"; }
};

/// Ordered pair of vertex ids: an arc tail -> head.
struct ArcKey {
    VertexId tail, head;

    ArcKey() = default;
    ArcKey(VertexId t, VertexId h) : tail(std::move(t)), head(std::move(h)) {}
    bool operator==(const ArcKey&) const = default;
    auto operator<=>(const ArcKey&) const = default;
    EdgeKey as_edge() const { return EdgeKey(tail, head); }
    std::string str() const { return "(" + tail + "," + head + ")"; }
};

/// Adjacency entry: neighbouring vertex index and the index of the
/// connecting edge/arc in the owner's edge list.
struct AdjEntry {
    int neighbor;
    int edge;
};

/// Ids starting with this prefix are reserved for vertices created by the
/// library (subdivision points, replacement leaves, ...).
inline constexpr const char* kFreshIdPrefix = "_g";
/// Reserved id for the root vertex introduced when an edge is subdivided
/// for rooting.
inline constexpr const char* kRootId = "_rho";

/// Returns true if `id` may appear in user input (not reserved).
bool is_user_vertex_id(const VertexId& id);

/// An undirected phylogenetic network: a simple connected graph without
/// degree-2 vertices whose degree-1 vertices are bijectively labelled.
class UndirectedNetwork {
public:
    /// Validating constructor. Vertices are inferred from the edge list.
    UndirectedNetwork(std::vector<EdgeKey> edges, std::map<VertexId, std::string> leaf_labels);

    /// Escape hatch used by underlying_network(): identical to the public
    /// constructor except that the vertices listed in `degree2_allowed`
    /// may have degree 2 (a suppressed parallel pair leaves its endpoints
    /// short one edge in the simple-graph representation).
    static UndirectedNetwork with_degree2_exemption(std::vector<EdgeKey> edges,
                                                    std::map<VertexId, std::string> leaf_labels,
                                                    const std::vector<VertexId>& degree2_allowed);

    int vertex_count() const { return static_cast<int>(verts_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    const std::vector<VertexId>& vertices() const { return verts_; }
    /// Edges in sorted EdgeKey order.
    const std::vector<EdgeKey>& edges() const { return edges_; }
    const std::map<VertexId, std::string>& leaf_labels() const { return leaf_labels_; }

    bool has_vertex(const VertexId& v) const { return index_.count(v) > 0; }
    bool has_edge(const VertexId& u, const VertexId& v) const;
    bool has_edge(const EdgeKey& e) const { return has_edge(e.a, e.b); }
    int degree(const VertexId& v) const { return static_cast<int>(adj_[index_of(v)].size()); }
    bool is_leaf(const VertexId& v) const { return degree(v) == 1; }
    /// Neighbour ids in increasing id order.
    std::vector<VertexId> neighbors(const VertexId& v) const;
    /// The label of a leaf vertex; throws if `v` is not a leaf.
    const std::string& label_of(const VertexId& v) const;
    /// True when every non-leaf vertex has degree exactly 3.
    bool is_binary() const;

    // --- index-based access for algorithms ---
    int index_of(const VertexId& v) const;
    const VertexId& id_of(int idx) const { return verts_[idx]; }
    const std::vector<std::vector<AdjEntry>>& adjacency() const { return adj_; }
    const EdgeKey& edge_at(int e) const { return edges_[e]; }
    /// Index of an edge in edges(), or -1.
    int edge_index(const EdgeKey& e) const;

private:
    UndirectedNetwork() = default;
    void build_and_validate(std::vector<EdgeKey> edges, std::map<VertexId, std::string> labels,
                            const std::vector<VertexId>& degree2_allowed);

    std::vector<VertexId> verts_;                    // sorted
    std::unordered_map<VertexId, int> index_;
    std::vector<EdgeKey> edges_;                     // sorted
    std::vector<std::vector<AdjEntry>> adj_;         // neighbours in index order
    std::map<VertexId, std::string> leaf_labels_;
};

/// A directed phylogenetic network: a simple connected DAG with a unique
/// root (indegree 0, outdegree 2), no indegree-1 outdegree-1 vertices, and
/// bijectively labelled leaves (outdegree 0, indegree 1).
class DirectedNetwork {
public:
    DirectedNetwork(std::vector<ArcKey> arcs, std::map<VertexId, std::string> leaf_labels);

    int vertex_count() const { return static_cast<int>(verts_.size()); }
    int arc_count() const { return static_cast<int>(arcs_.size()); }

    /// Vertices in first-appearance order of the arc list.
    const std::vector<VertexId>& vertices() const { return verts_; }
    /// Arcs in construction order (deterministic for a given input).
    const std::vector<ArcKey>& arcs() const { return arcs_; }
    const std::map<VertexId, std::string>& leaf_labels() const { return leaf_labels_; }

    const VertexId& root() const { return verts_[root_]; }
    bool has_vertex(const VertexId& v) const { return index_.count(v) > 0; }
    bool has_arc(const VertexId& t, const VertexId& h) const;
    int indegree(const VertexId& v) const { return indegree_at(index_of(v)); }
    int outdegree(const VertexId& v) const { return outdegree_at(index_of(v)); }
    std::vector<VertexId> parents(const VertexId& v) const;
    std::vector<VertexId> children(const VertexId& v) const;
    bool is_leaf(const VertexId& v) const { return outdegree(v) == 0; }
    bool is_reticulation(const VertexId& v) const { return indegree(v) >= 2; }
    /// Reticulation vertices in increasing id order.
    std::vector<VertexId> reticulations() const;
    const std::string& label_of(const VertexId& v) const;
    /// True when every internal vertex has indegree/outdegree 1/2 or 2/1.
    bool is_binary() const;

    // --- index-based access ---
    int index_of(const VertexId& v) const;
    const VertexId& id_of(int idx) const { return verts_[idx]; }
    int root_index() const { return root_; }
    /// Incoming arcs of the vertex at `idx` as (parent index, arc index),
    /// in increasing arc-index order.
    std::span<const AdjEntry> parents_of(int idx) const {
        return {padj_.data() + poff_[idx], padj_.data() + poff_[idx + 1]};
    }
    /// Outgoing arcs of the vertex at `idx` as (child index, arc index),
    /// in increasing arc-index order.
    std::span<const AdjEntry> children_of(int idx) const {
        return {cadj_.data() + coff_[idx], cadj_.data() + coff_[idx + 1]};
    }
    int indegree_at(int idx) const { return poff_[idx + 1] - poff_[idx]; }
    int outdegree_at(int idx) const { return coff_[idx + 1] - coff_[idx]; }
    const ArcKey& arc_at(int a) const { return arcs_[a]; }

private:
    std::vector<VertexId> verts_;
    std::unordered_map<VertexId, int> index_;
    std::vector<ArcKey> arcs_;
    // Adjacency in offset/payload form: vertex `v`'s incoming arcs are
    // padj_[poff_[v] .. poff_[v+1]), outgoing arcs likewise in cadj_.
    std::vector<int> poff_, coff_;
    std::vector<AdjEntry> padj_, cadj_;
    std::map<VertexId, std::string> leaf_labels_;
    int root_ = -1;
};

/// A partly-directed phylogenetic network: some edges carry a direction.
/// The underlying graph (all directions dropped) must be a valid
/// UndirectedNetwork; no vertex pair carries both an edge and an arc.
class PartlyDirectedNetwork {
public:
    PartlyDirectedNetwork(std::vector<EdgeKey> edges, std::vector<ArcKey> arcs,
                          std::map<VertexId, std::string> leaf_labels);

    const std::vector<EdgeKey>& undirected_edges() const { return edges_; }
    const std::vector<ArcKey>& arcs() const { return arcs_; }
    const std::map<VertexId, std::string>& leaf_labels() const { return leaf_labels_; }
    /// The network with all directions dropped.
    const UndirectedNetwork& underlying() const { return underlying_; }
    /// Direction of an underlying edge, if any.
    std::optional<ArcKey> direction_of(const EdgeKey& e) const;
    bool is_binary() const { return underlying_.is_binary(); }

private:
    std::vector<EdgeKey> edges_;
    std::vector<ArcKey> arcs_;
    std::map<VertexId, std::string> leaf_labels_;
    UndirectedNetwork underlying_;
    std::map<EdgeKey, ArcKey> arc_of_edge_;
};

/// Desired indegrees for an orientation, one entry per vertex,
/// 1 <= d(v) <= degree(v).
using DegreeMap = std::map<VertexId, int>;

/// Throws ValidationError unless `degrees` covers exactly the vertices of
/// `net` with values in [1, degree(v)].
void validate_degree_map(const UndirectedNetwork& net, const DegreeMap& degrees);

/// Result of underlying_network(): the simple graph plus, when suppressing
/// the root merged two parallel edges, the merged pair. In that case the
/// network field keeps a single copy of the pair and its endpoints are
/// exempt from the no-degree-2 rule; any re-orientation must place the
/// root back on the pair.
struct UnderlyingResult {
    UndirectedNetwork network;
    std::optional<EdgeKey> parallel_pair;
};

/// Drops directions and suppresses the former root.
UnderlyingResult underlying_network(const DirectedNetwork& dn);

/// True when the two networks are isomorphic via a bijection that maps
/// leaves to leaves with equal labels. Intended for test-scale networks
/// (backtracking search).
bool isomorphic(const UndirectedNetwork& lhs, const UndirectedNetwork& rhs);

}  // namespace phylo
