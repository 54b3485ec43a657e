#include "trapsnet/domains.hpp"

#include <algorithm>
#include <cmath>

#include "trapsnet/errors.hpp"

namespace trapsnet {

namespace {

const DomainSchema kSysAdminSchema{
    "computer", {"running"}, {}, "connected", {"reboot"}, true};
const DomainSchema kGoLSchema{
    "cell", {"alive"}, {}, "neighbor", {"set"}, true};
const DomainSchema kAcadSchema{
    "course", {"passed"}, {"program_requirement"}, "prereq", {"take"}, false};

double clamp01(double p) { return std::min(1.0, std::max(0.0, p)); }

bool targets(const GroundAction& action, int object_index) {
    return !action.is_noop() && action.object_index == object_index;
}

} // namespace

const DomainSchema& schema(DomainId id) {
    switch (id) {
    case DomainId::SysAdmin: return kSysAdminSchema;
    case DomainId::GameOfLife: return kGoLSchema;
    case DomainId::AcademicAdvising: return kAcadSchema;
    }
    throw Error("unknown domain id");
}

double sysadmin_next_prob(const SysAdminParams& params, const ProblemInstance& instance,
                          const GroundState& state, const GroundAction& action,
                          int object_index) {
    if (targets(action, object_index))
        return clamp01(params.reboot_success_prob);
    if (state.fluents.at(object_index, 0) != 0.0) {
        int neighbors = 0;
        int running = 0;
        for (int j = 0; j < instance.object_count(); ++j) {
            if (instance.binary_nonfluent.at(object_index, j) == 0.0) continue;
            ++neighbors;
            if (state.fluents.at(j, 0) != 0.0) ++running;
        }
        double frac = (1.0 + running) / (1.0 + neighbors);
        return clamp01(params.base_running_prob + params.neighbor_bonus * frac);
    }
    return clamp01(params.spontaneous_recovery_prob);
}

double sysadmin_reward(const SysAdminParams& params, const GroundState& state,
                       const GroundAction& action) {
    double running = 0.0;
    for (int i = 0; i < state.fluents.rows(); ++i)
        running += state.fluents.at(i, 0);
    return running - (action.is_noop() ? 0.0 : params.reboot_penalty);
}

double gol_next_prob(const GoLParams& params, const ProblemInstance& instance,
                     const GroundState& state, const GroundAction& action,
                     int cell_index) {
    int alive_neighbors = 0;
    for (int j = 0; j < instance.object_count(); ++j)
        if (instance.binary_nonfluent.at(cell_index, j) != 0.0 &&
            state.fluents.at(j, 0) != 0.0)
            ++alive_neighbors;
    bool alive = state.fluents.at(cell_index, 0) != 0.0;
    bool conway = alive ? (alive_neighbors == 2 || alive_neighbors == 3)
                        : (alive_neighbors == 3);
    bool target = targets(action, cell_index) ? true : conway;
    return target ? 1.0 - params.noise_prob : params.noise_prob;
}

double gol_reward(const GoLParams& params, const GroundState& state,
                  const GroundAction& action) {
    double alive = 0.0;
    for (int i = 0; i < state.fluents.rows(); ++i)
        alive += state.fluents.at(i, 0);
    return alive - (action.is_noop() ? 0.0 : params.set_action_penalty);
}

double acad_next_prob(const AcadParams& params, const ProblemInstance& instance,
                      const GroundState& state, const GroundAction& action,
                      int course_index) {
    if (state.fluents.at(course_index, 0) != 0.0)
        return 1.0;                                   // passed is absorbing
    if (!targets(action, course_index))
        return 0.0;
    int prereqs = 0;
    int passed = 0;
    for (int j = 0; j < instance.object_count(); ++j) {
        if (instance.binary_nonfluent.at(j, course_index) == 0.0) continue;
        ++prereqs;
        if (state.fluents.at(j, 0) != 0.0) ++passed;
    }
    if (prereqs == 0)
        return clamp01(params.prior_pass_prob_no_prereq);
    return clamp01(params.pass_prob_scale * (1.0 + passed) / (1.0 + prereqs));
}

double acad_reward(const AcadParams& params, const ProblemInstance& instance,
                   const GroundState& state, const GroundAction& action) {
    double r = 0.0;
    if (!action.is_noop()) {
        bool retake = state.fluents.at(action.object_index, 0) != 0.0;
        r += retake ? params.redo_cost : params.course_cost;
    }
    for (int i = 0; i < instance.object_count(); ++i)
        if (instance.unary_nonfluents.at(i, 0) != 0.0 &&
            state.fluents.at(i, 0) == 0.0) {
            r += params.incomplete_penalty;
            break;
        }
    return r;
}

double next_prob(const ProblemInstance& instance, const GroundState& state,
                 const GroundAction& action, int object_index) {
    switch (instance.domain) {
    case DomainId::SysAdmin:
        return sysadmin_next_prob(std::get<SysAdminParams>(instance.params),
                                  instance, state, action, object_index);
    case DomainId::GameOfLife:
        return gol_next_prob(std::get<GoLParams>(instance.params),
                             instance, state, action, object_index);
    case DomainId::AcademicAdvising:
        return acad_next_prob(std::get<AcadParams>(instance.params),
                              instance, state, action, object_index);
    }
    throw Error("unknown domain id");
}

double reward(const ProblemInstance& instance, const GroundState& state,
              const GroundAction& action) {
    switch (instance.domain) {
    case DomainId::SysAdmin:
        return sysadmin_reward(std::get<SysAdminParams>(instance.params), state, action);
    case DomainId::GameOfLife:
        return gol_reward(std::get<GoLParams>(instance.params), state, action);
    case DomainId::AcademicAdvising:
        return acad_reward(std::get<AcadParams>(instance.params), instance, state, action);
    }
    throw Error("unknown domain id");
}

namespace {

std::vector<std::string> make_object_names(const std::string& stem, int n) {
    std::vector<std::string> names;
    names.reserve(n);
    for (int i = 0; i < n; ++i)
        names.push_back(stem + std::to_string(i));
    return names;
}

ProblemInstance generate_sysadmin(const GeneratorConfig& config, RngStream& rng) {
    if (config.topology != Topology::RandomGraph)
        throw InvalidTopology("sysadmin instances use the random_graph topology");
    int n = config.size;
    ProblemInstance inst;
    inst.domain = DomainId::SysAdmin;
    inst.objects = make_object_names("c", n);
    inst.unary_nonfluents = Tensor(n, 0);
    inst.binary_nonfluent = Tensor(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.bernoulli(config.edge_prob)) {
                inst.binary_nonfluent.at(i, j) = 1.0;
                inst.binary_nonfluent.at(j, i) = 1.0;
            }
    inst.initial_fluents = Tensor(n, 1, 1.0);   // every computer starts running
    inst.params = SysAdminParams{};
    return inst;
}

ProblemInstance generate_gol(const GeneratorConfig& config, RngStream& rng) {
    if (config.topology != Topology::Grid)
        throw InvalidTopology("game_of_life instances use the grid topology");
    int rows = config.grid_rows;
    int cols = config.grid_cols;
    if (rows < 1 || cols < 1 || rows * cols != config.size)
        throw InvalidTopology("grid rows*cols must equal the instance size");
    int n = config.size;
    ProblemInstance inst;
    inst.domain = DomainId::GameOfLife;
    inst.objects.reserve(n);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            inst.objects.push_back("x" + std::to_string(r) + "_" + std::to_string(c));
    inst.unary_nonfluents = Tensor(n, 0);
    inst.binary_nonfluent = Tensor(n, n);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            for (int dr = -1; dr <= 1; ++dr)
                for (int dc = -1; dc <= 1; ++dc) {
                    if (dr == 0 && dc == 0) continue;
                    int rr = r + dr, cc = c + dc;
                    if (rr < 0 || rr >= rows || cc < 0 || cc >= cols) continue;
                    inst.binary_nonfluent.at(r * cols + c, rr * cols + cc) = 1.0;
                }
    inst.initial_fluents = Tensor(n, 1);
    for (int i = 0; i < n; ++i)
        inst.initial_fluents.at(i, 0) = rng.bernoulli(0.5) ? 1.0 : 0.0;
    inst.params = GoLParams{};
    return inst;
}

ProblemInstance generate_acad(const GeneratorConfig& config, RngStream& rng) {
    if (config.topology != Topology::Dag)
        throw InvalidTopology("academic_advising instances use the dag topology");
    int n = config.size;
    ProblemInstance inst;
    inst.domain = DomainId::AcademicAdvising;
    inst.objects = make_object_names("course", n);
    inst.binary_nonfluent = Tensor(n, n);
    // Edges only from lower to higher index, so the graph is acyclic by
    // construction; prereq(i, j) means i must precede j.
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.bernoulli(config.edge_prob))
                inst.binary_nonfluent.at(i, j) = 1.0;
    inst.unary_nonfluents = Tensor(n, 1);
    int required = 0;
    for (int i = 0; i < n; ++i)
        if (rng.bernoulli(0.4)) {
            inst.unary_nonfluents.at(i, 0) = 1.0;
            ++required;
        }
    if (required == 0)
        inst.unary_nonfluents.at(static_cast<int>(rng.uniform_int(n)), 0) = 1.0;
    inst.initial_fluents = Tensor(n, 1);
    inst.params = AcadParams{};
    return inst;
}

} // namespace

ProblemInstance generate_instance(const GeneratorConfig& config) {
    if (config.size < 1) throw InvalidTopology("instance size must be positive");
    if (config.horizon < 1) throw InvalidTopology("horizon must be positive");
    if (!(config.discount > 0.0 && config.discount <= 1.0))
        throw InvalidTopology("discount must be in (0, 1]");
    RngStream rng(config.seed);
    ProblemInstance inst;
    switch (config.domain) {
    case DomainId::SysAdmin: inst = generate_sysadmin(config, rng); break;
    case DomainId::GameOfLife: inst = generate_gol(config, rng); break;
    case DomainId::AcademicAdvising: inst = generate_acad(config, rng); break;
    }
    inst.name = domain_name(config.domain) + "_" + std::to_string(config.size) +
                "_s" + std::to_string(config.seed);
    inst.horizon = config.horizon;
    inst.discount = config.discount;
    inst.validate();
    return inst;
}

} // namespace trapsnet
