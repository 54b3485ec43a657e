#pragma once

#include <vector>

#include "trapsnet/mdp.hpp"

namespace trapsnet {

/// Object graph derived from the binary non-fluent. Attention neighborhoods
/// include the node itself; the raw adjacency does not. For directed domains
/// the neighborhood of a node is its in-neighbors plus itself.
struct ObjectGraph {
    Tensor adjacency;                            // [n x n], zero diagonal
    std::vector<std::vector<int>> neighborhoods; // sorted, self included

    int node_count() const { return adjacency.rows(); }
};

/// Per-node encoder inputs: fluent columns first, then unary non-fluents.
struct NodeFeatureMatrix {
    Tensor features;   // [n x F]
};

ObjectGraph build_graph(const ProblemInstance& instance);

NodeFeatureMatrix node_features(const ProblemInstance& instance,
                                const GroundState& state);

/// F = J + L for the instance's domain.
int feature_count(DomainId id);

} // namespace trapsnet
