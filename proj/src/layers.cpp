#include "trapsnet/layers.hpp"

#include <cmath>

namespace trapsnet::nn {

NodeId fc_forward(Graph& g, NodeId x, NodeId w, NodeId b) {
    return g.add_rowvec(g.matmul(x, w), b);
}

NodeId gat_layer(Graph& g, NodeId features, const ObjectGraph& graph,
                 const std::vector<GatPassWeights>& passes, double slope) {
    if (passes.empty()) throw ShapeMismatch("gat_layer: no attention passes");
    int n = graph.node_count();
    NodeId combined = -1;
    for (const GatPassWeights& pass : passes) {
        NodeId h = g.matmul(features, pass.w);   // [n x F_out]
        std::vector<NodeId> rows;
        rows.reserve(n);
        for (int i = 0; i < n; ++i) {
            const std::vector<int>& nb = graph.neighborhoods[i];
            NodeId h_nb = g.gather_rows(h, nb);
            NodeId h_self = g.gather_rows(h, std::vector<int>(nb.size(), i));
            NodeId scores = g.matmul(g.concat_cols(h_self, h_nb), pass.a);
            NodeId attn = g.softmax_rows(g.transpose(g.leaky_relu(scores, slope)));
            rows.push_back(g.matmul(attn, h_nb));
        }
        NodeId pass_out = g.vconcat(rows);
        combined = combined < 0 ? pass_out : g.maximum(combined, pass_out);
    }
    return combined;
}

Tensor gcn_propagation_matrix(const ObjectGraph& graph) {
    // Aggregation follows the attention convention: node i pools its
    // in-neighbors plus itself, so A_hat = A^T + I, normalized by the
    // square roots of its row and column sums.
    int n = graph.node_count();
    Tensor a_hat(n, n);
    for (int i = 0; i < n; ++i) {
        a_hat.at(i, i) = 1.0;
        for (int j = 0; j < n; ++j)
            if (graph.adjacency.at(j, i) != 0.0) a_hat.at(i, j) = 1.0;
    }
    std::vector<double> row_deg(n, 0.0), col_deg(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            row_deg[i] += a_hat.at(i, j);
            col_deg[j] += a_hat.at(i, j);
        }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (a_hat.at(i, j) != 0.0)
                a_hat.at(i, j) /= std::sqrt(row_deg[i]) * std::sqrt(col_deg[j]);
    return a_hat;
}

NodeId gcn_layer(Graph& g, NodeId features, const ObjectGraph& graph, NodeId w,
                 double slope) {
    NodeId s = g.constant(gcn_propagation_matrix(graph));
    return g.leaky_relu(g.matmul(s, g.matmul(features, w)), slope);
}

} // namespace trapsnet::nn
