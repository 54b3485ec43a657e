#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "trapsnet/domain_params.hpp"
#include "trapsnet/rng.hpp"
#include "trapsnet/tensor.hpp"

namespace trapsnet {

enum class DomainId { SysAdmin, GameOfLife, AcademicAdvising };

const std::string& domain_name(DomainId id);
DomainId domain_from_name(const std::string& name);

/// One ground factored MDP: objects, their fixed connectivity and unary
/// non-fluents, the initial fluent assignment, and episode bounds.
///
/// The canonical object ordering is the declaration order of `objects`;
/// every matrix row index and every ground-action object index refers to it.
struct ProblemInstance {
    DomainId domain = DomainId::SysAdmin;
    std::string name;
    std::vector<std::string> objects;
    Tensor unary_nonfluents;   // [n x L]
    Tensor binary_nonfluent;   // [n x n], zero diagonal
    Tensor initial_fluents;    // [n x J]
    int horizon = 1;
    double discount = 1.0;
    DomainParams params;

    int object_count() const { return static_cast<int>(objects.size()); }

    /// Throws Error when a structural invariant is violated.
    void validate() const;
};

/// Per-step fluent values, one row per object in canonical order.
struct GroundState {
    Tensor fluents;   // [n x J]

    bool operator==(const GroundState& o) const { return fluents == o.fluents; }
};

/// Either one action template applied to one object, or the explicit no-op.
struct GroundAction {
    int template_index = -1;
    int object_index = -1;

    static GroundAction noop() { return GroundAction{}; }
    static GroundAction apply(int k, int i) { return GroundAction{k, i}; }
    bool is_noop() const { return template_index < 0; }

    bool operator==(const GroundAction& o) const {
        return template_index == o.template_index && object_index == o.object_index;
    }
};

struct Trajectory {
    struct Step {
        GroundState state;
        GroundAction action;
        double reward;
    };
    std::vector<Step> steps;
    GroundState terminal_state;

    int length() const { return static_cast<int>(steps.size()); }
};

/// Probabilities over the legal_actions() order of one instance, with
/// log-probabilities cached for the training loss.
struct PolicyDistribution {
    std::vector<double> probs;
    std::vector<double> log_probs;

    double entropy() const;
};

using PolicyFn = std::function<PolicyDistribution(const GroundState&)>;

int num_action_templates(DomainId id);

/// Every Apply(k, i) in k-major order followed by exactly one Noop.
std::vector<GroundAction> legal_actions(const ProblemInstance& instance);
int legal_action_count(const ProblemInstance& instance);

/// Position of an action within the legal_actions() order.
int action_index(const ProblemInstance& instance, const GroundAction& action);

/// Sample the next state and compute this step's reward. Each object's next
/// fluent is drawn in canonical object order, one uniform draw per object,
/// so (instance, state, action, rng state) fixes the outcome exactly.
std::pair<GroundState, double> step(const ProblemInstance& instance,
                                    const GroundState& state,
                                    const GroundAction& action,
                                    RngStream& rng);

/// True when the domain declares the state terminal before the horizon.
bool is_terminal(const ProblemInstance& instance, const GroundState& state);

/// Simulate `policy` from the initial state for at most `horizon` steps.
Trajectory rollout(const ProblemInstance& instance, const PolicyFn& policy,
                   RngStream& rng);

double discounted_return(const Trajectory& trajectory, double discount);

/// Inverse-CDF sample over the canonical action order.
GroundAction sample_action(const ProblemInstance& instance,
                           const PolicyDistribution& dist, RngStream& rng);

/// Argmax action; ties resolve to the lowest canonical index.
GroundAction greedy_action(const ProblemInstance& instance,
                           const PolicyDistribution& dist);

} // namespace trapsnet
