#pragma once

#include <cstdint>
#include <utility>

#include "trapsnet/graph_encode.hpp"
#include "trapsnet/layers.hpp"
#include "trapsnet/mdp.hpp"
#include "trapsnet/params.hpp"

namespace trapsnet {

enum class EncoderKind { Gat, Gcn };

/// Everything the networks' parameter shapes depend on. Nothing here varies
/// with the number of objects, which is what makes one parameter store
/// servable across all instance sizes of a domain.
struct EncoderConfig {
    EncoderKind kind = EncoderKind::Gat;
    int gat_out = 3;          // node embedding width out of the graph layer
    int embed_dim = 20;       // object/state embedding width
    int gat_repeats = 4;      // attention passes combined by elementwise max
    int feature_count = 1;    // F, domain-derived
    int num_templates = 1;    // action templates, domain-derived
    bool shared_encoder = false;

    static EncoderConfig for_domain(DomainId id, EncoderKind kind = EncoderKind::Gat);

    int context_dim() const { return 2 * embed_dim; }

    bool operator==(const EncoderConfig& o) const = default;
};

/// Create and Glorot-initialize every parameter of the policy and value
/// networks. Creation order and the draw sequence are fixed, so a seed fully
/// determines the store.
nn::ParamStore init_params(const EncoderConfig& config, std::uint64_t seed);

/// Total scalar parameter count; a function of the config only.
long param_count(const EncoderConfig& config);

/// Policy-distribution node over the canonical action order:
/// per-object template scores from the tied decoder, one no-op score from a
/// head on the state embedding, softmax over all of them.
nn::NodeId policy_dist_node(nn::Graph& g, const ProblemInstance& instance,
                            const ObjectGraph& graph, const GroundState& state,
                            const nn::ParamStore& params, const EncoderConfig& config);

/// State-value node: sum over objects of the tied value decoder applied to
/// each contextual object embedding. Note that duplicating an instance as a
/// disjoint union of two identical components does not simply double V: the
/// per-object terms are unchanged only if the pooled state embedding is, so
/// the effect enters through s-bar.
nn::NodeId value_node(nn::Graph& g, const ProblemInstance& instance,
                      const ObjectGraph& graph, const GroundState& state,
                      const nn::ParamStore& params, const EncoderConfig& config);

/// Object embeddings [n x embed_dim] and state embedding [1 x embed_dim]
/// from the policy-side encoder.
std::pair<Tensor, Tensor> encode(const ProblemInstance& instance,
                                 const GroundState& state,
                                 const nn::ParamStore& params,
                                 const EncoderConfig& config);

PolicyDistribution policy_forward(const ProblemInstance& instance,
                                  const GroundState& state,
                                  const nn::ParamStore& params,
                                  const EncoderConfig& config);

double value_forward(const ProblemInstance& instance, const GroundState& state,
                     const nn::ParamStore& params, const EncoderConfig& config);

/// Policy and value evaluation bound to one instance and one parameter
/// snapshot (copied in; later updates to the source store do not leak in).
class ModelEval {
public:
    ModelEval(const ProblemInstance& instance, nn::ParamStore params,
              EncoderConfig config);

    PolicyDistribution policy(const GroundState& state) const;
    double value(const GroundState& state) const;
    PolicyFn policy_fn() const;

    const ProblemInstance& instance() const { return *instance_; }
    const nn::ParamStore& params() const { return params_; }
    const EncoderConfig& config() const { return config_; }

private:
    const ProblemInstance* instance_;
    ObjectGraph graph_;
    nn::ParamStore params_;
    EncoderConfig config_;
};

} // namespace trapsnet
