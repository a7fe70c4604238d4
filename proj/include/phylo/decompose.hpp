#pragma once

#include <map>
#include <string>
#include <vector>

#include "phylo/network.hpp"

namespace phylo {

/// Block-cut tree: one node per biconnected component (block) and one per
/// cut vertex, linked when the cut vertex belongs to the block.
struct BlockCutTree {
    struct Node {
        bool is_block;
        int block;            // index into BlobDecomposition::block_vertices when is_block
        VertexId cut_vertex;  // set when !is_block
    };
    std::vector<Node> nodes;
    std::vector<std::pair<int, int>> links;
};

/// Biconnected decomposition of an undirected network. A blob is a
/// biconnected component with at least three vertices; every other
/// component is a single cut edge (bridge).
struct BlobDecomposition {
    std::vector<std::vector<VertexId>> blobs;        // sorted vertex sets, sorted by front
    std::vector<std::vector<EdgeKey>> blob_edges;    // parallel to blobs, sorted
    std::vector<EdgeKey> cut_edges;                  // sorted
    std::vector<VertexId> cut_vertices;              // sorted
    std::vector<std::vector<VertexId>> block_vertices;  // all blocks incl. bridges
    BlockCutTree tree;

    /// Index of the blob containing vertex v (a vertex can lie in several
    /// blocks but in at most one blob unless it is a cut vertex; returns
    /// the first match), or -1.
    int blob_of(const VertexId& v) const;
};

BlobDecomposition blob_decomposition(const UndirectedNetwork& net);

/// Headline numbers of a network.
struct GraphStats {
    int vertex_count = 0;
    int edge_count = 0;
    int leaf_count = 0;
    int reticulation_number = 0;  // |E| - |V| + 1
    int level = 0;                // max reticulation number over blobs
    int blob_count = 0;
    bool binary = false;
};

GraphStats graph_stats(const UndirectedNetwork& net);
/// Stats of a directed network measured on its (rooted) underlying graph;
/// reticulation number equals the sum of (indegree - 1) over reticulations.
GraphStats graph_stats(const DirectedNetwork& net);

/// True iff at most one blob contains exactly one cut vertex of the network
/// (a "redundant terminal blob"); such networks and only such networks
/// admit an orientation for a suitable root edge and degree map.
bool is_orientable(const UndirectedNetwork& net);

/// Result of reduce_pendant_subtrees(): every maximal pendant subtree with
/// more than one edge is replaced by a single fresh labelled leaf. The
/// mapping sends each replacement leaf to the edges of the subtree it
/// replaced (including the subtree's attachment edge): the reduced network
/// is rootable at the fresh pendant edge iff the input is rootable at each
/// recorded edge. A pure tree reduces to the 2-leaf network on the two
/// lexicographically smallest labels, recorded under the first kept leaf.
struct PendantReduction {
    UndirectedNetwork network;
    std::map<VertexId, std::vector<EdgeKey>> replaced;
};

PendantReduction reduce_pendant_subtrees(const UndirectedNetwork& net);

/// One side of a generator: a path between generator vertices whose inner
/// vertices each carry leaves. The path is stored in canonical direction
/// (smaller endpoint first; for loops the direction with the smaller inner
/// vertex sequence).
struct GeneratorSide {
    VertexId u, v;                 // endpoint generator vertices, u <= v
    std::vector<VertexId> path;    // u, inner vertices..., v
    std::vector<VertexId> chain;   // leaves of the inner vertices, in path order

    int leaf_count() const { return static_cast<int>(chain.size()); }
    /// Side edges e_0..e_n in path order (n = number of inner vertices).
    std::vector<EdgeKey> edges() const;
};

/// The generator of a network: the multigraph left after removing all
/// pendant subtrees and suppressing degree-2 vertices. Vertices are the
/// surviving degree->=3 vertices; each side records its suppressed path
/// and the leaf chain along it.
struct Generator {
    std::vector<VertexId> vertices;  // sorted
    std::vector<GeneratorSide> sides;  // sorted by (u, v, smallest inner vertex)
};

/// Computes the generator; requires reticulation number >= 2.
Generator generator(const UndirectedNetwork& net);

/// A blob lifted to a standalone network: the blob plus a fresh labelled
/// leaf attached to every vertex of blob-degree 2. `leaf_for_vertex` maps
/// each such vertex to its fresh leaf; the fresh pendant edge stands in
/// for the network's third edge at that vertex (cut edge or pendant edge).
struct InducedBlob {
    UndirectedNetwork network;
    std::map<VertexId, VertexId> leaf_for_vertex;
};

/// Requires `blob` to be a blob of `net` (as produced by
/// blob_decomposition).
InducedBlob induced_blob_network(const UndirectedNetwork& net,
                                 const std::vector<VertexId>& blob);

}  // namespace phylo
