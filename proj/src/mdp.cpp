#include "trapsnet/mdp.hpp"

#include <algorithm>
#include <cmath>

#include "trapsnet/domains.hpp"
#include "trapsnet/errors.hpp"

namespace trapsnet {

namespace {

const std::string kDomainNames[] = {"sysadmin", "game_of_life", "academic_advising"};

GroundAction action_from_index(const ProblemInstance& instance, int index) {
    int n = instance.object_count();
    int templates = num_action_templates(instance.domain);
    if (index == templates * n) return GroundAction::noop();
    return GroundAction::apply(index / n, index % n);
}

} // namespace

const std::string& domain_name(DomainId id) {
    return kDomainNames[static_cast<int>(id)];
}

DomainId domain_from_name(const std::string& name) {
    for (int i = 0; i < 3; ++i)
        if (kDomainNames[i] == name) return static_cast<DomainId>(i);
    throw Error("unknown domain: " + name);
}

void ProblemInstance::validate() const {
    const DomainSchema& s = schema(domain);
    int n = object_count();
    if (n < 1) throw Error("instance has no objects");
    if (horizon < 1) throw Error("horizon must be >= 1");
    if (!(discount > 0.0 && discount <= 1.0))
        throw Error("discount must be in (0, 1]");
    if (initial_fluents.rows() != n ||
        initial_fluents.cols() != static_cast<int>(s.fluents.size()))
        throw Error("initial fluent matrix has wrong shape");
    if (unary_nonfluents.rows() != n ||
        unary_nonfluents.cols() != static_cast<int>(s.unary_nonfluents.size()))
        throw Error("unary non-fluent matrix has wrong shape");
    if (binary_nonfluent.rows() != n || binary_nonfluent.cols() != n)
        throw Error("adjacency matrix has wrong shape");
    for (int i = 0; i < n; ++i) {
        if (binary_nonfluent.at(i, i) != 0.0)
            throw Error("adjacency diagonal must be zero");
        for (int j = 0; j < n; ++j) {
            double v = binary_nonfluent.at(i, j);
            if (v != 0.0 && v != 1.0)
                throw Error("adjacency entries must be 0 or 1");
        }
        double f = initial_fluents.at(i, 0);
        if (f != 0.0 && f != 1.0)
            throw Error("boolean fluents must be 0 or 1");
    }
}

double PolicyDistribution::entropy() const {
    double h = 0.0;
    for (double p : probs)
        if (p > 0.0) h -= p * std::log(std::max(p, 1e-12));
    return h;
}

int num_action_templates(DomainId id) {
    return static_cast<int>(schema(id).action_templates.size());
}

std::vector<GroundAction> legal_actions(const ProblemInstance& instance) {
    int n = instance.object_count();
    int templates = num_action_templates(instance.domain);
    std::vector<GroundAction> actions;
    actions.reserve(static_cast<std::size_t>(templates) * n + 1);
    for (int k = 0; k < templates; ++k)
        for (int i = 0; i < n; ++i)
            actions.push_back(GroundAction::apply(k, i));
    actions.push_back(GroundAction::noop());
    return actions;
}

int legal_action_count(const ProblemInstance& instance) {
    return num_action_templates(instance.domain) * instance.object_count() + 1;
}

int action_index(const ProblemInstance& instance, const GroundAction& action) {
    int n = instance.object_count();
    if (action.is_noop()) return num_action_templates(instance.domain) * n;
    return action.template_index * n + action.object_index;
}

std::pair<GroundState, double> step(const ProblemInstance& instance,
                                    const GroundState& state,
                                    const GroundAction& action,
                                    RngStream& rng) {
    int n = instance.object_count();
    if (!action.is_noop() &&
        (action.object_index < 0 || action.object_index >= n ||
         action.template_index < 0 ||
         action.template_index >= num_action_templates(instance.domain)))
        throw IllegalAction("action indices out of range for instance " + instance.name);
    double r = reward(instance, state, action);
    GroundState next{Tensor(n, 1)};
    for (int i = 0; i < n; ++i) {
        double p = next_prob(instance, state, action, i);
        next.fluents.at(i, 0) = rng.bernoulli(p) ? 1.0 : 0.0;
    }
    return {std::move(next), r};
}

bool is_terminal(const ProblemInstance& instance, const GroundState& state) {
    if (instance.domain != DomainId::AcademicAdvising) return false;
    for (int i = 0; i < instance.object_count(); ++i)
        if (instance.unary_nonfluents.at(i, 0) != 0.0 &&
            state.fluents.at(i, 0) == 0.0)
            return false;
    return true;   // every program requirement passed
}

Trajectory rollout(const ProblemInstance& instance, const PolicyFn& policy,
                   RngStream& rng) {
    Trajectory traj;
    GroundState state{instance.initial_fluents};
    for (int t = 0; t < instance.horizon; ++t) {
        if (is_terminal(instance, state)) break;
        PolicyDistribution dist = policy(state);
        GroundAction action = sample_action(instance, dist, rng);
        auto [next, r] = step(instance, state, action, rng);
        traj.steps.push_back({state, action, r});
        state = std::move(next);
    }
    traj.terminal_state = std::move(state);
    return traj;
}

double discounted_return(const Trajectory& trajectory, double discount) {
    double total = 0.0;
    double factor = 1.0;
    for (const Trajectory::Step& s : trajectory.steps) {
        total += factor * s.reward;
        factor *= discount;
    }
    return total;
}

GroundAction sample_action(const ProblemInstance& instance,
                           const PolicyDistribution& dist, RngStream& rng) {
    int count = legal_action_count(instance);
    if (static_cast<int>(dist.probs.size()) != count)
        throw ShapeMismatch("policy distribution size does not match action count");
    double u = rng.uniform01();
    double cum = 0.0;
    for (int i = 0; i < count; ++i) {
        cum += dist.probs[i];
        if (u < cum) return action_from_index(instance, i);
    }
    return action_from_index(instance, count - 1);   // rounding residue
}

GroundAction greedy_action(const ProblemInstance& instance,
                           const PolicyDistribution& dist) {
    int count = legal_action_count(instance);
    if (static_cast<int>(dist.probs.size()) != count)
        throw ShapeMismatch("policy distribution size does not match action count");
    int best = 0;
    for (int i = 1; i < count; ++i)
        if (dist.probs[i] > dist.probs[best]) best = i;
    return action_from_index(instance, best);
}

} // namespace trapsnet
