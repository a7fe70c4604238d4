#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "phylo/classes.hpp"
#include "phylo/decompose.hpp"
#include "phylo/network.hpp"
#include "phylo/orient.hpp"

namespace phylo {

/// Thrown when an exhaustive search would exceed its work budget.  The
/// estimate counts elementary orientation steps (roughly reticulation-set
/// guesses times network size).
class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(std::uint64_t required, std::uint64_t allowed)
        : std::runtime_error("search needs about " + std::to_string(required) +
                             " work units, over the budget of " + std::to_string(allowed)),
          required_(required),
          allowed_(allowed) {}
    std::uint64_t required() const { return required_; }
    std::uint64_t allowed() const { return allowed_; }

private:
    std::uint64_t required_;
    std::uint64_t allowed_;
};

/// Default work budget for the exhaustive searches; callers (and the CLI)
/// can raise or lower it per call.
inline constexpr std::uint64_t kDefaultWorkBudget = 200'000'000;

/// All edges at which a network can be rooted within a class, with one
/// witness orientation per edge.  Each stored orientation is a directed
/// phylogenetic network in the class whose root subdivides the key edge and
/// whose underlying graph is the searched network.
struct RootableSet {
    std::map<EdgeKey, DirectedNetwork> entries;

    bool contains(const EdgeKey& e) const { return entries.count(e) > 0; }
    /// The keys of `entries`, sorted.
    std::vector<EdgeKey> edge_set() const;
};

/// Computes the rootable edge set of a binary network for a class by plain
/// enumeration: for every edge e and every set R of internal vertices with
/// |R| = |E| - |V| + 1 (in lexicographic order), attempt the orientation
/// rooted at e with reticulations R and keep the first class member found
/// per edge.  Only internal vertices are tried because a leaf can never
/// have in-degree 2.  Exponential in the reticulation number; throws
/// BudgetExceeded when the (edges x guesses x network size) estimate
/// exceeds `budget`, and ValidationError when the network is not binary.
RootableSet rootable_edges_exhaustive(const UndirectedNetwork& net, NetworkClass c,
                                      std::uint64_t budget = kDefaultWorkBudget);

/// A generator side together with how many of its chain leaves survive a
/// chain reduction.  The kept leaves are the first `kept` of `side.chain`
/// in the stored u-to-v order; their attachment vertices keep their ids.
struct ReducedSide {
    GeneratorSide side;
    int kept;
};

/// A chain-reduced network plus the bookkeeping needed to map edges of the
/// reduced network back to edges of the input.
struct ChainReduction {
    UndirectedNetwork network;
    std::vector<ReducedSide> sides;  ///< all generator sides of the input
};

/// Shortens every chain of the network: each generator side keeps only its
/// first min(n_s, l) leaves (u-to-v order) and the rest are deleted, with
/// their attachment vertices suppressed.  Sides whose two endpoints
/// coincide keep at least two leaves so the result stays a simple graph.
/// Requires a defined generator (reticulation number >= 2, no non-trivial
/// pendant subtrees); throws ValidationError otherwise.
ChainReduction chain_reduce(const UndirectedNetwork& net, int l);

/// Computes the same rootable edge set as rootable_edges_exhaustive but in
/// time exponential only in the reticulation number: chains are first
/// shortened to the class's keep length, the reduced network is searched
/// exhaustively, and placements are mapped back.  A placement at the i-th
/// kept leaf of a shortened side with n_s original leaves yields placements
/// at the original pendant edges c_j for j in {i, ..., n_s-(kept-i)} and at
/// the side edges e_j for j in {i-1, ..., n_s-(kept-i)}; placements on
/// unshortened sides map over unchanged.  Non-trivial pendant subtrees are
/// collapsed to single leaves first and placements expanded afterwards
/// (membership in the supported classes only depends on the blobs, so a
/// subtree is rootable everywhere exactly when its replacement pendant
/// edge is).  Networks with reticulation number < 2 fall back to the
/// exhaustive search directly.
RootableSet rootable_edges_fpt(const UndirectedNetwork& net, NetworkClass c,
                               std::uint64_t budget = kDefaultWorkBudget);

/// Per-blob feasibility analysis used to orient a network blob by blob.
/// Cut edges are directed away from every incident blob that cannot be
/// rooted at them; contracting all edges that remain undirected collapses
/// the network into vertex classes that must form a rooted tree (a unique
/// in-degree-0 class, every other class entered by exactly one cut arc)
/// for an orientation to exist.
struct BlobOrientationPlan {
    BlobDecomposition decomposition;
    std::vector<InducedBlob> induced;        ///< parallel to decomposition.blobs
    std::vector<RootableSet> blob_rootable;  ///< parallel to decomposition.blobs

    /// Forced directions per cut edge: empty = undirected, one arc =
    /// directed, two arcs = directed both ways (never orientable).
    std::map<EdgeKey, std::vector<ArcKey>> cut_directions;

    /// Vertex classes after contracting all undirected edges (each sorted,
    /// sorted by first member; they partition the vertex set) and the cut
    /// arcs between them.
    std::vector<std::vector<VertexId>> classes;
    std::vector<std::pair<int, int>> class_arcs;

    bool rooted_tree = false;
    int root_class = -1;   ///< index into `classes` when rooted_tree
    std::string failure;   ///< set when !rooted_tree

    const std::vector<ArcKey>& directions_of(const EdgeKey& cut_edge) const;
    /// Index of the class containing v, or -1.
    int class_of(const VertexId& v) const;
};

/// Builds the plan for a binary network and a class.  Blobs with
/// reticulation number at most 2 are searched exhaustively, larger ones
/// through the chain-reduction search.
BlobOrientationPlan plan_blob_orientation(const UndirectedNetwork& net, NetworkClass c,
                                          std::uint64_t budget = kDefaultWorkBudget);

/// Outcome of the blob-by-blob class orientation.
struct COrientation {
    bool orientable = false;
    std::optional<DirectedNetwork> network;  ///< one class orientation
    /// Every edge of the input at which a class orientation can be rooted
    /// (sorted).  Empty when not orientable.
    std::vector<EdgeKey> rootable_edges;
    std::string reason;  ///< set when !orientable
};

/// Decides whether a binary network can be oriented as a directed network
/// of the class, blob by blob: every blob must admit a class orientation,
/// and the forced cut-edge directions must leave a single root region K.
/// The returned witness roots at the smallest undirected cut edge inside K
/// or, when K is a single blob, at the blob's smallest rootable internal
/// edge; all other blobs are oriented by their stored placement for the
/// cut arc that enters them.  `rootable_edges` lists every valid root
/// location, so the choice is not a restriction.
COrientation c_orientation(const UndirectedNetwork& net, NetworkClass c,
                           std::uint64_t budget = kDefaultWorkBudget);

/// True iff the network has a tree-based orientation rooted on a cut edge
/// (equivalently, rooted at a pendant edge after subdividing).  This is
/// the undirected analogue of tree-basedness: a spanning tree of the
/// orientation connects all vertices, which forces the root onto a cut
/// edge rather than inside a blob.
bool is_tree_based_undirected(const UndirectedNetwork& net,
                              std::uint64_t budget = kDefaultWorkBudget);

/// Outcome of orienting a partly-directed network.
struct PartlyDirectedOrientation {
    bool orientable = false;
    std::optional<DirectedNetwork> network;  ///< witness (root on an undirected edge)
    std::string reason;                      ///< set when !orientable
};

/// Decides whether the undirected edges of a binary partly-directed
/// network can be oriented so that the whole becomes a directed
/// phylogenetic network whose arcs include every prescribed arc.  The root
/// location must subdivide an undirected edge: placing it on a prescribed
/// arc would erase that arc.
///
/// The search is exponential only in the level: prescribed cut arcs are
/// propagated through the bridge forest and into blob entry vertices
/// (conflicts end the search), each generator side may carry at most one
/// change of direction in each sense (a twice-alternating side is never
/// orientable), chains are shortened while protecting the leaves that mark
/// a side's direction changes, and the reduced network is assembled blob
/// by blob with every blob orientation required to reproduce the
/// prescribed arcs.
PartlyDirectedOrientation partly_directed_c_orientation(const PartlyDirectedNetwork& net,
                                                        std::uint64_t budget = kDefaultWorkBudget);

}  // namespace phylo
