#pragma once

// Independent reference implementations used only by tests. Everything here
// is written as straight-line code against the public types, deliberately
// avoiding the library's autodiff and forward-pass machinery.

#include <cstdint>
#include <functional>
#include <vector>

#include "trapsnet/graph_encode.hpp"
#include "trapsnet/mdp.hpp"
#include "trapsnet/params.hpp"

namespace trapsnet::oracle {

/// Max relative error between reverse-mode gradients and central finite
/// differences of the scalar built by `build`. The relative error of a pair
/// (g, g_fd) is |g - g_fd| / max(1, |g|, |g_fd|).
double gradcheck_max_rel_err(
    const std::function<nn::NodeId(nn::Graph&, const nn::ParamStore&)>& build,
    const nn::ParamStore& params, double h = 1e-5);

/// Exact finite-horizon evaluation by full state enumeration, for the
/// single-boolean-fluent domains at small object counts.
class ExactMdp {
public:
    explicit ExactMdp(const ProblemInstance& instance);

    std::uint32_t initial_state() const;
    GroundState ground(std::uint32_t mask) const;

    /// V*(s0) under the instance horizon and discount.
    double optimal_value() const;

    /// Expected value of a stochastic policy given per-state action
    /// probabilities in the legal_actions order.
    double policy_value(
        const std::function<std::vector<double>(std::uint32_t)>& action_probs) const;

private:
    std::vector<double> sweep(bool maximize,
        const std::function<std::vector<double>(std::uint32_t)>& action_probs) const;

    const ProblemInstance* instance_;
    int n_;
    std::vector<GroundAction> actions_;
};

/// One multi-pass attention forward, recomputed with plain loops.
/// passes[k] = (W_k, a_k).
Tensor dense_gat(const Tensor& features, const ObjectGraph& graph,
                 const std::vector<std::pair<Tensor, Tensor>>& passes,
                 double slope = 0.01);

Tensor dense_gcn(const Tensor& features, const ObjectGraph& graph, const Tensor& w,
                 double slope = 0.01);

/// Conway's rule on its own: next aliveness of a cell from its state and
/// live-neighbor count.
bool conway_next(bool alive, int live_neighbors);

/// Seeded random instance with the domain's natural topology (near-square
/// grid for the cellular domain).
ProblemInstance make_instance(DomainId domain, int size, std::uint64_t seed,
                              int horizon = 20);

/// Relabel objects: perm[i] is the new position of old object i. All
/// matrices and the object list are permuted consistently.
ProblemInstance permute_instance(const ProblemInstance& instance,
                                 const std::vector<int>& perm);

GroundState permute_state(const GroundState& state, const std::vector<int>& perm);

std::vector<int> random_permutation(int n, RngStream& rng);

GroundState random_boolean_state(const ProblemInstance& instance, RngStream& rng);

/// Add uniform(-scale, scale) noise to every parameter entry. Gradient
/// checks run at such a generic point so that no pre-activation sits exactly
/// on a kink.
void jitter_params(nn::ParamStore& params, double scale, RngStream rng);

} // namespace trapsnet::oracle
