#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "tanim/errors.hpp"

namespace tanim {

// Undirected connectivity shared by every frame of an animation.
using EdgeList = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

// Canonical form: each pair ordered (small, large), sorted, duplicates merged.
// Self-loops and endpoints outside [0, num_vertices) are structural errors.
inline EdgeList canonical_edges(EdgeList edges, Eigen::Index num_vertices) {
    if (num_vertices < 0) throw DimensionError("canonical_edges: negative vertex count");
    for (auto& [a, b] : edges) {
        if (a == b)
            throw TopologyError("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                                ") is a self-loop");
        if (a >= num_vertices || b >= num_vertices)
            throw TopologyError("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                                ") references a vertex outside [0, " +
                                std::to_string(num_vertices) + ")");
        if (a > b) std::swap(a, b);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

inline std::vector<std::vector<std::uint32_t>> adjacency_lists(const EdgeList& edges,
                                                               Eigen::Index num_vertices) {
    std::vector<std::vector<std::uint32_t>> adjacent(static_cast<std::size_t>(num_vertices));
    for (const auto& [a, b] : edges) {
        if (a == b || a >= num_vertices || b >= num_vertices)
            throw TopologyError("adjacency_lists: edge (" + std::to_string(a) + ", " +
                                std::to_string(b) + ") invalid for " +
                                std::to_string(num_vertices) + " vertices");
        adjacent[a].push_back(b);
        adjacent[b].push_back(a);
    }
    return adjacent;
}

}  // namespace tanim
