#include "trapsnet/graph_encode.hpp"

#include "trapsnet/domains.hpp"

namespace trapsnet {

ObjectGraph build_graph(const ProblemInstance& instance) {
    int n = instance.object_count();
    ObjectGraph g;
    g.adjacency = instance.binary_nonfluent;
    g.neighborhoods.resize(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            if (j == i || g.adjacency.at(j, i) != 0.0)
                g.neighborhoods[i].push_back(j);
    }
    return g;
}

NodeFeatureMatrix node_features(const ProblemInstance& instance,
                                const GroundState& state) {
    int n = instance.object_count();
    int j = state.fluents.cols();
    int l = instance.unary_nonfluents.cols();
    Tensor f(n, j + l);
    for (int i = 0; i < n; ++i) {
        for (int c = 0; c < j; ++c) f.at(i, c) = state.fluents.at(i, c);
        for (int c = 0; c < l; ++c) f.at(i, j + c) = instance.unary_nonfluents.at(i, c);
    }
    return NodeFeatureMatrix{std::move(f)};
}

int feature_count(DomainId id) {
    const DomainSchema& s = schema(id);
    return static_cast<int>(s.fluents.size() + s.unary_nonfluents.size());
}

} // namespace trapsnet
