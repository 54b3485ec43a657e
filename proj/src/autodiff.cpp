#include "trapsnet/autodiff.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace trapsnet::nn {

namespace {

void check_same_shape(const Tensor& a, const Tensor& b, const char* op) {
    if (!a.same_shape(b))
        throw ShapeMismatch(std::string(op) + ": " + a.shape_str() + " vs " + b.shape_str());
}

#ifndef NDEBUG
void check_finite(const Tensor& t, const char*) { assert(t.all_finite()); }
#else
void check_finite(const Tensor&, const char*) {}
#endif

} // namespace

NodeId Graph::push(Op op, std::vector<NodeId> args, Tensor value,
                   std::vector<int> iaux, double daux) {
    NodeId id = static_cast<NodeId>(nodes_.size());
    for (NodeId a : args)
        assert(a >= 0 && a < id);
    check_finite(value, "forward");
    nodes_.push_back(Node{op, std::move(args), std::move(value), Tensor(),
                          std::move(iaux), daux});
    return id;
}

NodeId Graph::constant(Tensor value) {
    return push(Op::Constant, {}, std::move(value));
}

NodeId Graph::param(const std::string& name, const Tensor& value) {
    auto it = params_.find(name);
    if (it != params_.end()) return it->second;
    NodeId id = push(Op::Param, {}, value);
    params_.emplace(name, id);
    return id;
}

NodeId Graph::matmul(NodeId a, NodeId b) {
    const Tensor& A = nodes_[a].value;
    const Tensor& B = nodes_[b].value;
    if (A.cols() != B.rows())
        throw ShapeMismatch("matmul: " + A.shape_str() + " * " + B.shape_str());
    Tensor C(A.rows(), B.cols());
    for (int i = 0; i < A.rows(); ++i)
        for (int k = 0; k < A.cols(); ++k) {
            double aik = A.at(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < B.cols(); ++j)
                C.at(i, j) += aik * B.at(k, j);
        }
    return push(Op::MatMul, {a, b}, std::move(C));
}

NodeId Graph::transpose(NodeId a) {
    const Tensor& A = nodes_[a].value;
    Tensor T(A.cols(), A.rows());
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j)
            T.at(j, i) = A.at(i, j);
    return push(Op::Transpose, {a}, std::move(T));
}

NodeId Graph::add(NodeId a, NodeId b) {
    const Tensor& A = nodes_[a].value;
    const Tensor& B = nodes_[b].value;
    check_same_shape(A, B, "add");
    Tensor C = A;
    for (std::size_t i = 0; i < C.size(); ++i) C[i] += B[i];
    return push(Op::Add, {a, b}, std::move(C));
}

NodeId Graph::sub(NodeId a, NodeId b) {
    const Tensor& A = nodes_[a].value;
    const Tensor& B = nodes_[b].value;
    check_same_shape(A, B, "sub");
    Tensor C = A;
    for (std::size_t i = 0; i < C.size(); ++i) C[i] -= B[i];
    return push(Op::Sub, {a, b}, std::move(C));
}

NodeId Graph::mul(NodeId a, NodeId b) {
    const Tensor& A = nodes_[a].value;
    const Tensor& B = nodes_[b].value;
    check_same_shape(A, B, "mul");
    Tensor C = A;
    for (std::size_t i = 0; i < C.size(); ++i) C[i] *= B[i];
    return push(Op::Mul, {a, b}, std::move(C));
}

NodeId Graph::add_rowvec(NodeId x, NodeId r) {
    const Tensor& X = nodes_[x].value;
    const Tensor& R = nodes_[r].value;
    if (R.rows() != 1 || R.cols() != X.cols())
        throw ShapeMismatch("add_rowvec: " + X.shape_str() + " + " + R.shape_str());
    Tensor C = X;
    for (int i = 0; i < C.rows(); ++i)
        for (int j = 0; j < C.cols(); ++j)
            C.at(i, j) += R.at(0, j);
    return push(Op::AddRowVec, {x, r}, std::move(C));
}

NodeId Graph::scale(NodeId a, double c) {
    Tensor C = nodes_[a].value;
    for (std::size_t i = 0; i < C.size(); ++i) C[i] *= c;
    return push(Op::Scale, {a}, std::move(C), {}, c);
}

NodeId Graph::add_const(NodeId a, double c) {
    Tensor C = nodes_[a].value;
    for (std::size_t i = 0; i < C.size(); ++i) C[i] += c;
    return push(Op::AddConst, {a}, std::move(C), {}, c);
}

NodeId Graph::leaky_relu(NodeId a, double slope) {
    Tensor C = nodes_[a].value;
    for (std::size_t i = 0; i < C.size(); ++i)
        if (C[i] < 0.0) C[i] *= slope;
    return push(Op::LeakyRelu, {a}, std::move(C), {}, slope);
}

NodeId Graph::log(NodeId a) {
    Tensor C = nodes_[a].value;
    for (std::size_t i = 0; i < C.size(); ++i) C[i] = std::log(C[i]);
    return push(Op::Log, {a}, std::move(C));
}

NodeId Graph::clamp_min(NodeId a, double bound) {
    Tensor C = nodes_[a].value;
    for (std::size_t i = 0; i < C.size(); ++i) C[i] = std::max(C[i], bound);
    return push(Op::ClampMin, {a}, std::move(C), {}, bound);
}

NodeId Graph::softmax_rows(NodeId a) {
    Tensor C = nodes_[a].value;
    for (int i = 0; i < C.rows(); ++i) {
        double m = C.at(i, 0);
        for (int j = 1; j < C.cols(); ++j) m = std::max(m, C.at(i, j));
        double sum = 0.0;
        for (int j = 0; j < C.cols(); ++j) {
            C.at(i, j) = std::exp(C.at(i, j) - m);
            sum += C.at(i, j);
        }
        for (int j = 0; j < C.cols(); ++j) C.at(i, j) /= sum;
    }
    return push(Op::SoftmaxRows, {a}, std::move(C));
}

NodeId Graph::max_pool_rows(NodeId a) {
    const Tensor& A = nodes_[a].value;
    if (A.rows() < 1) throw ShapeMismatch("max_pool_rows: empty tensor");
    Tensor C(1, A.cols());
    std::vector<int> argmax(A.cols(), 0);
    for (int j = 0; j < A.cols(); ++j) {
        double best = A.at(0, j);
        for (int i = 1; i < A.rows(); ++i)
            if (A.at(i, j) > best) {        // strict: ties keep the lowest row
                best = A.at(i, j);
                argmax[j] = i;
            }
        C.at(0, j) = best;
    }
    return push(Op::MaxPoolRows, {a}, std::move(C), std::move(argmax));
}

NodeId Graph::maximum(NodeId a, NodeId b) {
    const Tensor& A = nodes_[a].value;
    const Tensor& B = nodes_[b].value;
    check_same_shape(A, B, "maximum");
    Tensor C = A;
    std::vector<int> from_b(C.size(), 0);
    for (std::size_t i = 0; i < C.size(); ++i)
        if (B[i] > A[i]) {                  // strict: ties route to a
            C[i] = B[i];
            from_b[i] = 1;
        }
    return push(Op::Maximum, {a, b}, std::move(C), std::move(from_b));
}

NodeId Graph::sum_rows(NodeId a) {
    const Tensor& A = nodes_[a].value;
    Tensor C(1, A.cols());
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j)
            C.at(0, j) += A.at(i, j);
    return push(Op::SumRows, {a}, std::move(C));
}

NodeId Graph::sum_all(NodeId a) {
    const Tensor& A = nodes_[a].value;
    double s = 0.0;
    for (std::size_t i = 0; i < A.size(); ++i) s += A[i];
    return push(Op::SumAll, {a}, Tensor::scalar(s));
}

NodeId Graph::concat_cols(NodeId a, NodeId b) {
    const Tensor& A = nodes_[a].value;
    const Tensor& B = nodes_[b].value;
    if (A.rows() != B.rows())
        throw ShapeMismatch("concat_cols: " + A.shape_str() + " | " + B.shape_str());
    Tensor C(A.rows(), A.cols() + B.cols());
    for (int i = 0; i < A.rows(); ++i) {
        for (int j = 0; j < A.cols(); ++j) C.at(i, j) = A.at(i, j);
        for (int j = 0; j < B.cols(); ++j) C.at(i, A.cols() + j) = B.at(i, j);
    }
    return push(Op::ConcatCols, {a, b}, std::move(C));
}

NodeId Graph::vconcat(const std::vector<NodeId>& blocks) {
    if (blocks.empty()) throw ShapeMismatch("vconcat: no blocks");
    int cols = nodes_[blocks[0]].value.cols();
    int rows = 0;
    for (NodeId b : blocks) {
        if (nodes_[b].value.cols() != cols)
            throw ShapeMismatch("vconcat: column mismatch");
        rows += nodes_[b].value.rows();
    }
    Tensor C(rows, cols);
    int r = 0;
    for (NodeId b : blocks) {
        const Tensor& B = nodes_[b].value;
        for (int i = 0; i < B.rows(); ++i, ++r)
            for (int j = 0; j < cols; ++j)
                C.at(r, j) = B.at(i, j);
    }
    return push(Op::VConcat, blocks, std::move(C));
}

NodeId Graph::gather_rows(NodeId a, std::vector<int> idx) {
    const Tensor& A = nodes_[a].value;
    Tensor C(static_cast<int>(idx.size()), A.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] < 0 || idx[i] >= A.rows())
            throw ShapeMismatch("gather_rows: index out of range");
        for (int j = 0; j < A.cols(); ++j)
            C.at(static_cast<int>(i), j) = A.at(idx[i], j);
    }
    return push(Op::GatherRows, {a}, std::move(C), std::move(idx));
}

NodeId Graph::repeat_row(NodeId r, int n) {
    const Tensor& R = nodes_[r].value;
    if (R.rows() != 1) throw ShapeMismatch("repeat_row: expected [1 x c]");
    Tensor C(n, R.cols());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < R.cols(); ++j)
            C.at(i, j) = R.at(0, j);
    return push(Op::RepeatRow, {r}, std::move(C));
}

NodeId Graph::reshape(NodeId a, int rows, int cols) {
    const Tensor& A = nodes_[a].value;
    if (static_cast<std::size_t>(rows) * cols != A.size())
        throw ShapeMismatch("reshape: size mismatch");
    Tensor C(rows, cols, A.data());
    return push(Op::Reshape, {a}, std::move(C));
}

NodeId Graph::element(NodeId a, int r, int c) {
    const Tensor& A = nodes_[a].value;
    if (r < 0 || r >= A.rows() || c < 0 || c >= A.cols())
        throw ShapeMismatch("element: index out of range");
    return push(Op::Element, {a}, Tensor::scalar(A.at(r, c)), {r, c});
}

void Graph::backward(NodeId loss) {
    assert(!backward_done_);
    if (nodes_[loss].value.size() != 1)
        throw ShapeMismatch("backward: loss must be scalar");
    for (Node& n : nodes_)
        n.grad = Tensor(n.value.rows(), n.value.cols());
    nodes_[loss].grad[0] = 1.0;
    for (NodeId id = loss; id >= 0; --id)
        backprop_node(nodes_[id]);
    backward_done_ = true;
}

void Graph::backprop_node(Node& n) {
    const Tensor& g = n.grad;
    switch (n.op) {
    case Op::Constant:
    case Op::Param:
        break;
    case Op::MatMul: {
        const Tensor& A = nodes_[n.args[0]].value;
        const Tensor& B = nodes_[n.args[1]].value;
        Tensor& dA = nodes_[n.args[0]].grad;
        Tensor& dB = nodes_[n.args[1]].grad;
        // dA += g * B^T ; dB += A^T * g
        for (int i = 0; i < A.rows(); ++i)
            for (int j = 0; j < B.cols(); ++j) {
                double gij = g.at(i, j);
                if (gij == 0.0) continue;
                for (int k = 0; k < A.cols(); ++k) {
                    dA.at(i, k) += gij * B.at(k, j);
                    dB.at(k, j) += A.at(i, k) * gij;
                }
            }
        break;
    }
    case Op::Transpose: {
        Tensor& dA = nodes_[n.args[0]].grad;
        for (int i = 0; i < g.rows(); ++i)
            for (int j = 0; j < g.cols(); ++j)
                dA.at(j, i) += g.at(i, j);
        break;
    }
    case Op::Add: {
        Tensor& dA = nodes_[n.args[0]].grad;
        Tensor& dB = nodes_[n.args[1]].grad;
        for (std::size_t i = 0; i < g.size(); ++i) {
            dA[i] += g[i];
            dB[i] += g[i];
        }
        break;
    }
    case Op::Sub: {
        Tensor& dA = nodes_[n.args[0]].grad;
        Tensor& dB = nodes_[n.args[1]].grad;
        for (std::size_t i = 0; i < g.size(); ++i) {
            dA[i] += g[i];
            dB[i] -= g[i];
        }
        break;
    }
    case Op::Mul: {
        const Tensor& A = nodes_[n.args[0]].value;
        const Tensor& B = nodes_[n.args[1]].value;
        Tensor& dA = nodes_[n.args[0]].grad;
        Tensor& dB = nodes_[n.args[1]].grad;
        for (std::size_t i = 0; i < g.size(); ++i) {
            dA[i] += g[i] * B[i];
            dB[i] += g[i] * A[i];
        }
        break;
    }
    case Op::AddRowVec: {
        Tensor& dX = nodes_[n.args[0]].grad;
        Tensor& dR = nodes_[n.args[1]].grad;
        for (int i = 0; i < g.rows(); ++i)
            for (int j = 0; j < g.cols(); ++j) {
                dX.at(i, j) += g.at(i, j);
                dR.at(0, j) += g.at(i, j);
            }
        break;
    }
    case Op::Scale: {
        Tensor& dA = nodes_[n.args[0]].grad;
        for (std::size_t i = 0; i < g.size(); ++i) dA[i] += g[i] * n.daux;
        break;
    }
    case Op::AddConst: {
        Tensor& dA = nodes_[n.args[0]].grad;
        for (std::size_t i = 0; i < g.size(); ++i) dA[i] += g[i];
        break;
    }
    case Op::LeakyRelu: {
        const Tensor& A = nodes_[n.args[0]].value;
        Tensor& dA = nodes_[n.args[0]].grad;
        for (std::size_t i = 0; i < g.size(); ++i)
            dA[i] += g[i] * (A[i] < 0.0 ? n.daux : 1.0);
        break;
    }
    case Op::Log: {
        const Tensor& A = nodes_[n.args[0]].value;
        Tensor& dA = nodes_[n.args[0]].grad;
        for (std::size_t i = 0; i < g.size(); ++i) dA[i] += g[i] / A[i];
        break;
    }
    case Op::ClampMin: {
        const Tensor& A = nodes_[n.args[0]].value;
        Tensor& dA = nodes_[n.args[0]].grad;
        for (std::size_t i = 0; i < g.size(); ++i)
            if (A[i] >= n.daux) dA[i] += g[i];
        break;
    }
    case Op::SoftmaxRows: {
        // dx = y * (g - <g, y>) per row, with y the saved output.
        const Tensor& Y = n.value;
        Tensor& dA = nodes_[n.args[0]].grad;
        for (int i = 0; i < Y.rows(); ++i) {
            double dot = 0.0;
            for (int j = 0; j < Y.cols(); ++j) dot += g.at(i, j) * Y.at(i, j);
            for (int j = 0; j < Y.cols(); ++j)
                dA.at(i, j) += Y.at(i, j) * (g.at(i, j) - dot);
        }
        break;
    }
    case Op::MaxPoolRows: {
        Tensor& dA = nodes_[n.args[0]].grad;
        for (int j = 0; j < g.cols(); ++j)
            dA.at(n.iaux[j], j) += g.at(0, j);
        break;
    }
    case Op::Maximum: {
        Tensor& dA = nodes_[n.args[0]].grad;
        Tensor& dB = nodes_[n.args[1]].grad;
        for (std::size_t i = 0; i < g.size(); ++i)
            (n.iaux[i] ? dB[i] : dA[i]) += g[i];
        break;
    }
    case Op::SumRows: {
        Tensor& dA = nodes_[n.args[0]].grad;
        for (int i = 0; i < dA.rows(); ++i)
            for (int j = 0; j < dA.cols(); ++j)
                dA.at(i, j) += g.at(0, j);
        break;
    }
    case Op::SumAll: {
        Tensor& dA = nodes_[n.args[0]].grad;
        for (std::size_t i = 0; i < dA.size(); ++i) dA[i] += g[0];
        break;
    }
    case Op::ConcatCols: {
        Tensor& dA = nodes_[n.args[0]].grad;
        Tensor& dB = nodes_[n.args[1]].grad;
        for (int i = 0; i < g.rows(); ++i) {
            for (int j = 0; j < dA.cols(); ++j) dA.at(i, j) += g.at(i, j);
            for (int j = 0; j < dB.cols(); ++j) dB.at(i, j) += g.at(i, dA.cols() + j);
        }
        break;
    }
    case Op::VConcat: {
        int r = 0;
        for (NodeId b : n.args) {
            Tensor& dB = nodes_[b].grad;
            for (int i = 0; i < dB.rows(); ++i, ++r)
                for (int j = 0; j < dB.cols(); ++j)
                    dB.at(i, j) += g.at(r, j);
        }
        break;
    }
    case Op::GatherRows: {
        Tensor& dA = nodes_[n.args[0]].grad;
        for (std::size_t i = 0; i < n.iaux.size(); ++i)
            for (int j = 0; j < g.cols(); ++j)
                dA.at(n.iaux[i], j) += g.at(static_cast<int>(i), j);
        break;
    }
    case Op::RepeatRow: {
        Tensor& dR = nodes_[n.args[0]].grad;
        for (int i = 0; i < g.rows(); ++i)
            for (int j = 0; j < g.cols(); ++j)
                dR.at(0, j) += g.at(i, j);
        break;
    }
    case Op::Reshape: {
        Tensor& dA = nodes_[n.args[0]].grad;
        for (std::size_t i = 0; i < g.size(); ++i) dA[i] += g[i];
        break;
    }
    case Op::Element: {
        nodes_[n.args[0]].grad.at(n.iaux[0], n.iaux[1]) += g[0];
        break;
    }
    }
}

GradMap Graph::param_grads() const {
    GradMap out;
    for (const auto& [name, id] : params_) {
        const Node& n = nodes_[id];
        out.emplace(name, backward_done_ ? n.grad
                                         : Tensor(n.value.rows(), n.value.cols()));
    }
    return out;
}

} // namespace trapsnet::nn
