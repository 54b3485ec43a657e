#pragma once

#include <map>
#include <string>
#include <vector>

#include "trapsnet/tensor.hpp"

namespace trapsnet::nn {

using NodeId = int;

/// Gradients keyed by parameter name. Parameters that do not participate in
/// the differentiated loss map to all-zero tensors.
using GradMap = std::map<std::string, Tensor>;

/// Recorded computation over dense tensors with reverse-mode differentiation.
///
/// Every builder call evaluates its operation immediately and appends one
/// primitive node, so node ids are already in topological order: arguments
/// always precede their consumers, which makes a cycle impossible by
/// construction. backward() seeds the scalar loss with gradient 1 and sweeps
/// the nodes in exact reverse order, accumulating additively wherever a node
/// fans out into several consumers.
///
/// Subgradient conventions (fixed for determinism):
///   - max_pool_rows routes to the lowest row index among ties,
///   - maximum(a, b) routes to `a` on ties,
///   - leaky_relu uses slope 1 at exactly zero,
///   - clamp_min passes gradient through when input >= bound.
class Graph {
public:
    /// Leaf holding a constant; receives a gradient but is not named.
    NodeId constant(Tensor value);

    /// Leaf registered under a parameter name. Repeated calls with the same
    /// name return the original node so fan-out accumulates in one place.
    NodeId param(const std::string& name, const Tensor& value);

    NodeId matmul(NodeId a, NodeId b);
    NodeId transpose(NodeId a);
    NodeId add(NodeId a, NodeId b);
    NodeId sub(NodeId a, NodeId b);
    NodeId mul(NodeId a, NodeId b);
    /// Adds row vector r to every row of x.
    NodeId add_rowvec(NodeId x, NodeId r);
    NodeId scale(NodeId a, double c);
    NodeId add_const(NodeId a, double c);
    NodeId leaky_relu(NodeId a, double slope = 0.01);
    NodeId log(NodeId a);
    NodeId clamp_min(NodeId a, double bound);
    /// Row-wise softmax with max-subtraction for stability.
    NodeId softmax_rows(NodeId a);
    /// Column-wise max over rows: [n x c] -> [1 x c].
    NodeId max_pool_rows(NodeId a);
    /// Elementwise maximum of two same-shape tensors.
    NodeId maximum(NodeId a, NodeId b);
    /// Column-wise sum over rows: [n x c] -> [1 x c].
    NodeId sum_rows(NodeId a);
    NodeId sum_all(NodeId a);
    NodeId concat_cols(NodeId a, NodeId b);
    /// Stack blocks vertically (all with equal column counts).
    NodeId vconcat(const std::vector<NodeId>& blocks);
    /// Gather rows by index; duplicate indices are allowed.
    NodeId gather_rows(NodeId a, std::vector<int> idx);
    /// Broadcast a [1 x c] row to [n x c].
    NodeId repeat_row(NodeId r, int n);
    /// Same data, new shape (row-major reinterpretation).
    NodeId reshape(NodeId a, int rows, int cols);
    /// Extract one entry as a [1 x 1] scalar.
    NodeId element(NodeId a, int r, int c);

    const Tensor& value(NodeId id) const { return nodes_[id].value; }
    const Tensor& grad(NodeId id) const { return nodes_[id].grad; }
    std::size_t node_count() const { return nodes_.size(); }

    /// Reverse sweep from a scalar loss node. May be called once per graph.
    void backward(NodeId loss);

    /// Gradients of every parameter leaf inserted into this graph.
    GradMap param_grads() const;

private:
    enum class Op {
        Constant, Param, MatMul, Transpose, Add, Sub, Mul, AddRowVec, Scale,
        AddConst, LeakyRelu, Log, ClampMin, SoftmaxRows, MaxPoolRows, Maximum,
        SumRows, SumAll, ConcatCols, VConcat, GatherRows, RepeatRow, Reshape,
        Element,
    };

    struct Node {
        Op op;
        std::vector<NodeId> args;
        Tensor value;
        Tensor grad;
        std::vector<int> iaux;   // gather indices, argmax rows, entry coords
        double daux = 0.0;       // slope / constant
    };

    NodeId push(Op op, std::vector<NodeId> args, Tensor value,
                std::vector<int> iaux = {}, double daux = 0.0);
    void backprop_node(Node& n);

    std::vector<Node> nodes_;
    std::map<std::string, NodeId> params_;
    bool backward_done_ = false;
};

} // namespace trapsnet::nn
