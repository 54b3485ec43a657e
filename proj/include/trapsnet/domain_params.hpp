#pragma once

#include <variant>

namespace trapsnet {

/// Dynamics constants for the computer-network domain. Probabilities are
/// clamped to [0,1] wherever they are combined.
struct SysAdminParams {
    double reboot_success_prob = 1.0;
    double base_running_prob = 0.45;
    double neighbor_bonus = 0.5;
    double spontaneous_recovery_prob = 0.04;
    double reboot_penalty = 0.75;
};

/// Dynamics constants for the cellular-automaton domain.
struct GoLParams {
    double noise_prob = 0.1;
    double set_action_penalty = 0.0;
};

/// Dynamics constants for the course-planning domain. The set of required
/// courses itself lives in the instance's unary non-fluent column.
struct AcadParams {
    double prior_pass_prob_no_prereq = 0.8;
    double pass_prob_scale = 0.9;       // scales (1 + #passed prereqs) / (1 + #prereqs)
    double course_cost = -1.0;
    double redo_cost = -2.0;
    double incomplete_penalty = -5.0;   // charged per step while any requirement is unpassed
};

using DomainParams = std::variant<SysAdminParams, GoLParams, AcadParams>;

} // namespace trapsnet
