#pragma once

#include <optional>
#include <string>
#include <vector>

#include "phylo/network.hpp"

namespace phylo {

/// A rooted orientation instance: an undirected network, the edge the root
/// should subdivide, and the target in-degree for every vertex.
///
/// `duplicate_edge` covers one multigraph corner: the underlying graph of a
/// directed network whose root children are adjacent has a doubled edge
/// between them.  `UndirectedNetwork` stores that pair once (see
/// `UnderlyingResult::parallel_pair`); setting `duplicate_edge` here restores
/// the second copy.  When set, it must equal `root_edge` — the root has to
/// subdivide one copy of the pair, otherwise the doubled edge cannot be part
/// of any orientation.
struct RootedInstance {
    UndirectedNetwork network;
    EdgeKey root_edge;
    DegreeMap degrees;
    std::optional<EdgeKey> duplicate_edge;

    /// Throws ValidationError unless the instance is well-formed:
    /// `root_edge` exists, `degrees` covers exactly the vertex set with
    /// 1 <= d(v) <= deg(v), no internal vertex has d(v) = deg(v) (such a
    /// vertex would become an unlabeled sink in any orientation), and
    /// `duplicate_edge`, if present, equals `root_edge`.
    void validate() const;
};

/// A certificate of non-orientability for a rooted instance whose in-degrees
/// sum to |E| + 1.  Both sets live in the root-subdivided network: the root
/// vertex is named by `kRootId` and the root edge {a,b} is replaced by
/// {kRootId,a} and {kRootId,b}.
///
/// The defining conditions, checked by `is_valid_degree_cut`:
///   1. removing `cut_edges` disconnects the root-subdivided network,
///   2. no component of the remainder contains both the root and a vertex
///      of `cut_vertices`,
///   3. every cut edge is incident to exactly one cut vertex,
///   4. every cut vertex v is incident to fewer than d(v) cut edges.
struct DegreeCut {
    std::vector<VertexId> cut_vertices;  ///< sorted
    std::vector<EdgeKey> cut_edges;      ///< sorted

    std::string str() const;
};

/// Why an orientation attempt did not produce a directed network.
enum class OrientOutcome {
    oriented,          ///< success; `network` is set
    sum_mismatch,      ///< in-degrees do not sum to |E| + 1
    degree_cut,        ///< not orientable; `cut` certifies it
    cut_unextracted,   ///< not orientable; certificate search exceeded its bound
    arc_conflict,      ///< orientation exists but disagrees with prescribed arcs
};

std::string to_string(OrientOutcome outcome);

struct OrientationResult {
    OrientOutcome outcome = OrientOutcome::sum_mismatch;
    std::optional<DirectedNetwork> network;   ///< when `oriented`
    std::optional<DegreeCut> cut;             ///< when `degree_cut`
    std::vector<ArcKey> conflicting_arcs;     ///< when `arc_conflict`

    bool oriented() const { return outcome == OrientOutcome::oriented; }
};

/// Decides whether the instance admits an orientation: a directed
/// phylogenetic network whose underlying graph is `inst.network`, whose root
/// subdivides `inst.root_edge`, and in which every vertex v has in-degree
/// exactly `inst.degrees[v]`.  Runs the linear-time propagation: subdivide
/// the root edge, direct both halves away from the root, and repeatedly pick
/// a vertex that already has all of its prescribed in-edges and direct its
/// remaining edges outward.  At most one orientation exists, so the result
/// does not depend on the processing order.
///
/// On failure the result carries a degree cut when one can be extracted from
/// the stalled propagation state or found by bounded exhaustive search
/// (vertex count <= 20); otherwise `cut_unextracted`.
OrientationResult orient(const RootedInstance& inst);

/// Outcome of a standalone certificate search (`find_degree_cut`).
struct DegreeCutSearch {
    enum class Status {
        orientable,    ///< no degree cut exists
        found,         ///< `cut` is set
        unextracted,   ///< a cut exists but exceeded the search bound
    };
    Status status = Status::orientable;
    std::optional<DegreeCut> cut;
};

/// Searches for a degree cut of the instance.  Requires the in-degree sum
/// condition (throws ValidationError otherwise); under it, a degree cut
/// exists if and only if the instance is not orientable.
DegreeCutSearch find_degree_cut(const RootedInstance& inst);

/// Checks the four degree-cut conditions directly against the definition.
/// Independent of how the cut was produced.  On failure, `why` (if non-null)
/// receives the first violated condition.
bool is_valid_degree_cut(const RootedInstance& inst, const DegreeCut& cut,
                         std::string* why = nullptr);

/// Exhaustive certificate search: scans all vertex subsets of the network
/// (root excluded) for one whose boundary violates no in-degree bound.
/// Exponential; requires vertex count <= 20 (throws std::invalid_argument
/// beyond that).  Returns the first cut in subset enumeration order.
std::optional<DegreeCut> exhaustive_degree_cut(const RootedInstance& inst);

/// The binary in-degree map: 2 on `reticulations`, 1 elsewhere.  Every named
/// reticulation must be a vertex of the network.
DegreeMap binary_degree_map(const UndirectedNetwork& net,
                            const std::vector<VertexId>& reticulations);

/// Binary specialization of `orient`: reticulations get in-degree 2, all
/// other vertices in-degree 1.  Requires a binary network (throws
/// ValidationError otherwise).  A leaf named as a reticulation is reported
/// as `degree_cut` with the cut {leaf}, {pendant edge} rather than as an
/// input error: the request is well-formed, just never orientable.
/// `duplicate_edge` has the same meaning as in RootedInstance.
OrientationResult orient_binary(
    const UndirectedNetwork& net, const EdgeKey& root_edge,
    const std::vector<VertexId>& reticulations,
    const std::optional<EdgeKey>& duplicate_edge = std::nullopt);

/// Decides stack-free orientability: true iff the binary instance is
/// orientable and no edge of the network joins two reticulations.  Throws
/// ValidationError when |reticulations| differs from |E| - |V| + 1.
bool check_stack_free_rooted(const UndirectedNetwork& net,
                             const EdgeKey& root_edge,
                             const std::vector<VertexId>& reticulations);

/// Orients a partly-directed binary network: orients the underlying network
/// (root at `root_edge`, in-degree 2 exactly on `reticulations`) and then
/// requires every prescribed arc to appear unchanged in the result.  The
/// root edge must be undirected in `net`; choosing a directed arc as the
/// root location conflicts with that arc (the root splits it), reported as
/// `arc_conflict`.
OrientationResult orient_partly_directed(
    const PartlyDirectedNetwork& net, const EdgeKey& root_edge,
    const std::vector<VertexId>& reticulations);

struct SemiDirectedResult {
    bool semi_directed = false;
    std::optional<EdgeKey> root_edge;        ///< witness root location
    std::optional<DirectedNetwork> network;  ///< witness directed network
};

/// Decides whether a partly-directed binary network is semi-directed, i.e.
/// whether some directed binary network yields it by suppressing the root
/// and unorienting every arc that does not enter a reticulation.  Takes the
/// vertices with exactly two incoming arcs as the reticulation set, tries
/// every undirected edge as the root location, and accepts a candidate
/// orientation only if its reticulation arcs, with the root suppressed, give
/// back exactly the prescribed arc set.  Quadratic in |E|.
SemiDirectedResult is_semi_directed(const PartlyDirectedNetwork& net);

/// Oracle for the orientation decision: enumerates all 2^(|E|-1) directions
/// of the non-root edges and keeps those that form a directed phylogenetic
/// network with the prescribed in-degrees.  Exponential; requires |E| <= 20
/// (throws std::invalid_argument beyond that).  Kept free of the propagation
/// machinery so it can serve as an independent check of `orient`.
std::vector<DirectedNetwork> brute_force_orientations(
    const UndirectedNetwork& net, const EdgeKey& root_edge,
    const DegreeMap& degrees);

}  // namespace phylo
