#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trapsnet/mdp.hpp"

namespace trapsnet {

/// Fixed vocabulary of one domain: fluent/non-fluent/action names used by
/// instance files and the feature layout used by the encoder.
struct DomainSchema {
    std::string object_type;
    std::vector<std::string> fluents;            // J columns, in order
    std::vector<std::string> unary_nonfluents;   // L columns, in order
    std::string binary_nonfluent;
    std::vector<std::string> action_templates;
    bool symmetric_adjacency;                    // symmetrized on load when true
};

const DomainSchema& schema(DomainId id);

/// P(running'(o) = 1) for one computer. Factored: independent per object.
double sysadmin_next_prob(const SysAdminParams& params, const ProblemInstance& instance,
                          const GroundState& state, const GroundAction& action,
                          int object_index);

/// Count of running computers minus the reboot penalty when rebooting.
double sysadmin_reward(const SysAdminParams& params, const GroundState& state,
                       const GroundAction& action);

/// P(alive'(cell) = 1): the Conway successor (or the set-action target)
/// flipped with probability noise_prob.
double gol_next_prob(const GoLParams& params, const ProblemInstance& instance,
                     const GroundState& state, const GroundAction& action,
                     int cell_index);

/// Count of alive cells minus the set-action penalty.
double gol_reward(const GoLParams& params, const GroundState& state,
                  const GroundAction& action);

/// P(passed'(course) = 1). Passed courses are absorbing; untaken unpassed
/// courses stay unpassed; taking one passes it with a probability that grows
/// with the fraction of its prerequisites already passed.
double acad_next_prob(const AcadParams& params, const ProblemInstance& instance,
                      const GroundState& state, const GroundAction& action,
                      int course_index);

/// Registration cost (redo cost when retaking a passed course) plus the
/// per-step penalty while any required course is unpassed.
double acad_reward(const AcadParams& params, const ProblemInstance& instance,
                   const GroundState& state, const GroundAction& action);

/// Dispatch to the instance's domain. Probability that fluent column 0 of
/// `object_index` is 1 in the next state.
double next_prob(const ProblemInstance& instance, const GroundState& state,
                 const GroundAction& action, int object_index);

double reward(const ProblemInstance& instance, const GroundState& state,
              const GroundAction& action);

enum class Topology { RandomGraph, Grid, Dag };

struct GeneratorConfig {
    DomainId domain = DomainId::SysAdmin;
    int size = 0;
    Topology topology = Topology::RandomGraph;
    double edge_prob = 0.3;      // random_graph / dag
    int grid_rows = 0;           // grid; rows*cols must equal size
    int grid_cols = 0;
    std::uint64_t seed = 0;
    int horizon = 20;
    double discount = 1.0;
};

/// Seeded, reproducible random instance. SysAdmin draws a random undirected
/// graph, GoL materializes an 8-neighborhood grid into the adjacency, and
/// Academic Advising draws a random DAG with roughly 40% of the courses
/// marked as program requirements (always at least one).
ProblemInstance generate_instance(const GeneratorConfig& config);

} // namespace trapsnet
