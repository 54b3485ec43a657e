#pragma once

#include <vector>

#include "trapsnet/autodiff.hpp"
#include "trapsnet/graph_encode.hpp"

namespace trapsnet::nn {

/// x*W + b with b broadcast over rows.
NodeId fc_forward(Graph& g, NodeId x, NodeId w, NodeId b);

/// Weights of one attention pass: projection W [F_in x F_out] and attention
/// vector a [2*F_out x 1].
struct GatPassWeights {
    NodeId w;
    NodeId a;
};

/// Graph attention over the object graph. Each pass projects the features,
/// scores every (node, neighbor) pair with leaky_relu(a^T [h_i || h_j]) over
/// the node's neighborhood (self included), normalizes the scores with a
/// softmax, and aggregates the projected neighbors. The passes' outputs are
/// combined by elementwise max. No output activation is applied here.
NodeId gat_layer(Graph& g, NodeId features, const ObjectGraph& graph,
                 const std::vector<GatPassWeights>& passes, double slope = 0.01);

/// leaky_relu(S X W) with S the degree-normalized adjacency (self-loops
/// added). Directed graphs aggregate over in-neighbors.
NodeId gcn_layer(Graph& g, NodeId features, const ObjectGraph& graph, NodeId w,
                 double slope = 0.01);

/// Normalized propagation matrix used by gcn_layer, as a plain tensor.
Tensor gcn_propagation_matrix(const ObjectGraph& graph);

} // namespace trapsnet::nn
