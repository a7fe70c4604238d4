#pragma once

#include <cstdint>
#include <utility>

#include "phylo/network.hpp"

namespace phylo {

/// Configuration for the seeded random network generator used by the
/// property suites. All counts must be non-negative; the seed fully
/// determines the output.
struct GeneratorConfig {
    int leaf_count = 5;
    /// Reticulations to concentrate in a single blob. The remaining
    /// reticulations are added as separate level-1 blobs, so this is the
    /// level of the result (0 means a tree).
    int target_level = 0;
    /// Total number of reticulations; must be >= target_level, and
    /// positive values require target_level >= 1.
    int target_reticulation_number = 0;
    /// When the upper bound is positive, part of the leaf budget is spent
    /// on chains: runs of consecutive pendant leaves along one arc, with
    /// lengths drawn uniformly from this range.
    std::pair<int, int> chain_length_range{0, 0};
    std::uint64_t rng_seed = 1;
};

/// Grows a random binary directed network: a random tree by repeated leaf
/// additions, reticulations by subdividing two arcs and joining the
/// subdividers (rejecting cycles), chains by repeated subdivision of one
/// arc. Throws std::invalid_argument for infeasible configurations.
DirectedNetwork generate_random_directed(const GeneratorConfig& cfg);

/// A deterministic path of `blobs` diamond blobs (a four-cycle plus a
/// chord) joined by cut edges, with pendant leaves x and y at the ends,
/// plus the rooted instance (root on the pendant edge of x, two
/// reticulations per blob) that admits exactly one orientation. Used for
/// runtime-scaling measurements: |V| = 4*blobs + 2 and |E| = 6*blobs + 1.
struct BlobChain {
    UndirectedNetwork network;
    EdgeKey root_edge;
    DegreeMap degrees;
};
BlobChain make_blob_chain(int blobs);

}  // namespace phylo
