#pragma once
// Shared helpers for the test binaries: fixture loading and tiny builders.

#include <map>
#include <string>
#include <vector>

#include "phylo/io.hpp"
#include "phylo/network.hpp"

namespace testutil {

inline std::string fixture_path(const std::string& name) {
    return std::string(PHYLO_FIXTURE_DIR) + "/" + name;
}

inline phylo::NetworkFile load_fixture(const std::string& name) {
    return phylo::load_network_file(fixture_path(name));
}

/// Leaf labels where every leaf is labelled by its own id.
inline std::map<phylo::VertexId, std::string> self_labels(
    const std::vector<phylo::VertexId>& leaves) {
    std::map<phylo::VertexId, std::string> m;
    for (const auto& v : leaves) m[v] = v;
    return m;
}

}  // namespace testutil
