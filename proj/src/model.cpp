#include "trapsnet/model.hpp"

#include <cmath>

namespace trapsnet {

using nn::Graph;
using nn::NodeId;
using nn::ParamStore;

namespace {

constexpr double kLeakySlope = 0.01;
constexpr double kLogFloor = 1e-12;

struct LayerShape {
    std::string name;
    int rows, cols;
    int fan_in, fan_out;
    bool zero_init;   // biases start at zero
};

std::vector<LayerShape> encoder_shapes(const std::string& prefix,
                                       const EncoderConfig& c) {
    std::vector<LayerShape> shapes;
    if (c.kind == EncoderKind::Gat) {
        for (int k = 0; k < c.gat_repeats; ++k) {
            std::string p = prefix + "gat.p" + std::to_string(k) + ".";
            shapes.push_back({p + "W", c.feature_count, c.gat_out,
                              c.feature_count, c.gat_out, false});
            shapes.push_back({p + "a", 2 * c.gat_out, 1, 2 * c.gat_out, 1, false});
        }
    } else {
        shapes.push_back({prefix + "gcn.W", c.feature_count, c.gat_out,
                          c.feature_count, c.gat_out, false});
    }
    shapes.push_back({prefix + "fc.W", c.gat_out, c.embed_dim,
                      c.gat_out, c.embed_dim, false});
    shapes.push_back({prefix + "fc.b", 1, c.embed_dim, 0, 0, true});
    return shapes;
}

std::vector<LayerShape> mlp_shapes(const std::string& prefix, int in, int hidden,
                                   int out) {
    return {
        {prefix + "W1", in, hidden, in, hidden, false},
        {prefix + "b1", 1, hidden, 0, 0, true},
        {prefix + "W2", hidden, out, hidden, out, false},
        {prefix + "b2", 1, out, 0, 0, true},
    };
}

std::vector<LayerShape> all_shapes(const EncoderConfig& c) {
    std::vector<LayerShape> shapes;
    auto append = [&shapes](std::vector<LayerShape> more) {
        for (LayerShape& s : more) shapes.push_back(std::move(s));
    };
    if (c.shared_encoder) {
        append(encoder_shapes("enc.", c));
    } else {
        append(encoder_shapes("pi.enc.", c));
        append(encoder_shapes("v.enc.", c));
    }
    append(mlp_shapes("pi.dec.", c.context_dim(), c.embed_dim, c.num_templates));
    append(mlp_shapes("pi.noop.", c.embed_dim, c.embed_dim, 1));
    append(mlp_shapes("v.dec.", c.context_dim(), c.embed_dim, 1));
    return shapes;
}

std::string encoder_prefix(const EncoderConfig& c, bool value_net) {
    if (c.shared_encoder) return "enc.";
    return value_net ? "v.enc." : "pi.enc.";
}

/// Object embeddings [n x embed_dim] and state embedding [1 x embed_dim].
std::pair<NodeId, NodeId> encode_nodes(Graph& g, const ObjectGraph& graph,
                                       const Tensor& features,
                                       const ParamStore& params,
                                       const EncoderConfig& c, bool value_net) {
    std::string p = encoder_prefix(c, value_net);
    NodeId x = g.constant(features);
    NodeId node_embed;
    if (c.kind == EncoderKind::Gat) {
        std::vector<nn::GatPassWeights> passes;
        passes.reserve(c.gat_repeats);
        for (int k = 0; k < c.gat_repeats; ++k) {
            std::string pp = p + "gat.p" + std::to_string(k) + ".";
            passes.push_back({g.param(pp + "W", params.get(pp + "W")),
                              g.param(pp + "a", params.get(pp + "a"))});
        }
        node_embed = gat_layer(g, x, graph, passes, kLeakySlope);
    } else {
        node_embed = gcn_layer(g, x, graph, g.param(p + "gcn.W", params.get(p + "gcn.W")),
                               kLeakySlope);
    }
    NodeId obj = g.leaky_relu(
        fc_forward(g, node_embed, g.param(p + "fc.W", params.get(p + "fc.W")),
                   g.param(p + "fc.b", params.get(p + "fc.b"))),
        kLeakySlope);
    return {obj, g.max_pool_rows(obj)};
}

/// Contextual embeddings [n x 2*embed_dim]: each object's embedding with the
/// state embedding appended.
NodeId context_nodes(Graph& g, NodeId obj, NodeId state_embed, int n) {
    return g.concat_cols(obj, g.repeat_row(state_embed, n));
}

NodeId mlp2(Graph& g, NodeId x, const ParamStore& params, const std::string& prefix,
            bool activate_output) {
    NodeId h = g.leaky_relu(
        fc_forward(g, x, g.param(prefix + "W1", params.get(prefix + "W1")),
                   g.param(prefix + "b1", params.get(prefix + "b1"))),
        kLeakySlope);
    NodeId out = fc_forward(g, h, g.param(prefix + "W2", params.get(prefix + "W2")),
                            g.param(prefix + "b2", params.get(prefix + "b2")));
    return activate_output ? g.leaky_relu(out, kLeakySlope) : out;
}

} // namespace

EncoderConfig EncoderConfig::for_domain(DomainId id, EncoderKind kind) {
    EncoderConfig c;
    c.kind = kind;
    c.feature_count = trapsnet::feature_count(id);
    c.num_templates = num_action_templates(id);
    return c;
}

ParamStore init_params(const EncoderConfig& config, std::uint64_t seed) {
    ParamStore store;
    RngStream rng = RngStream(seed).derive(0x70617261);
    for (const LayerShape& s : all_shapes(config)) {
        Tensor& t = store.create(s.name, s.rows, s.cols);
        if (!s.zero_init) nn::glorot_init(t, s.fan_in, s.fan_out, rng);
    }
    return store;
}

long param_count(const EncoderConfig& config) {
    long total = 0;
    for (const LayerShape& s : all_shapes(config))
        total += static_cast<long>(s.rows) * s.cols;
    return total;
}

NodeId policy_dist_node(Graph& g, const ProblemInstance& instance,
                        const ObjectGraph& graph, const GroundState& state,
                        const ParamStore& params, const EncoderConfig& config) {
    int n = instance.object_count();
    Tensor features = node_features(instance, state).features;
    auto [obj, state_embed] = encode_nodes(g, graph, features, params, config, false);
    NodeId ctx = context_nodes(g, obj, state_embed, n);
    NodeId scores = mlp2(g, ctx, params, "pi.dec.", false);        // [n x T]
    NodeId noop_score = mlp2(g, state_embed, params, "pi.noop.", false);  // [1 x 1]
    // Template-major flattening matches the legal_actions order.
    NodeId flat = g.reshape(g.transpose(scores), 1, n * config.num_templates);
    return g.softmax_rows(g.concat_cols(flat, noop_score));
}

NodeId value_node(Graph& g, const ProblemInstance& instance,
                  const ObjectGraph& graph, const GroundState& state,
                  const ParamStore& params, const EncoderConfig& config) {
    int n = instance.object_count();
    Tensor features = node_features(instance, state).features;
    auto [obj, state_embed] = encode_nodes(g, graph, features, params, config, true);
    NodeId ctx = context_nodes(g, obj, state_embed, n);
    NodeId per_object = mlp2(g, ctx, params, "v.dec.", false);     // [n x 1]
    return g.sum_all(per_object);
}

std::pair<Tensor, Tensor> encode(const ProblemInstance& instance,
                                 const GroundState& state,
                                 const ParamStore& params,
                                 const EncoderConfig& config) {
    Graph g;
    ObjectGraph graph = build_graph(instance);
    Tensor features = node_features(instance, state).features;
    auto [obj, state_embed] = encode_nodes(g, graph, features, params, config, false);
    return {g.value(obj), g.value(state_embed)};
}

namespace {

PolicyDistribution dist_from_tensor(const Tensor& probs) {
    PolicyDistribution d;
    d.probs.assign(probs.data().begin(), probs.data().end());
    d.log_probs.reserve(d.probs.size());
    for (double p : d.probs)
        d.log_probs.push_back(std::log(std::max(p, kLogFloor)));
    return d;
}

} // namespace

PolicyDistribution policy_forward(const ProblemInstance& instance,
                                  const GroundState& state,
                                  const ParamStore& params,
                                  const EncoderConfig& config) {
    Graph g;
    ObjectGraph graph = build_graph(instance);
    return dist_from_tensor(
        g.value(policy_dist_node(g, instance, graph, state, params, config)));
}

double value_forward(const ProblemInstance& instance, const GroundState& state,
                     const ParamStore& params, const EncoderConfig& config) {
    Graph g;
    ObjectGraph graph = build_graph(instance);
    return g.value(value_node(g, instance, graph, state, params, config)).item();
}

ModelEval::ModelEval(const ProblemInstance& instance, ParamStore params,
                     EncoderConfig config)
    : instance_(&instance), graph_(build_graph(instance)),
      params_(std::move(params)), config_(config) {}

PolicyDistribution ModelEval::policy(const GroundState& state) const {
    Graph g;
    return dist_from_tensor(
        g.value(policy_dist_node(g, *instance_, graph_, state, params_, config_)));
}

double ModelEval::value(const GroundState& state) const {
    Graph g;
    return g.value(value_node(g, *instance_, graph_, state, params_, config_)).item();
}

PolicyFn ModelEval::policy_fn() const {
    return [this](const GroundState& state) { return policy(state); };
}

} // namespace trapsnet
