#include "trapsnet/evalkit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

#include "trapsnet/threads.hpp"

namespace trapsnet {

namespace {

const std::string kBaselineNames[] = {"uniform_random", "noop_only", "sysadmin_greedy",
                                      "gol_greedy", "acad_greedy"};

PolicyDistribution point_mass(const ProblemInstance& instance,
                              const GroundAction& action) {
    PolicyDistribution d;
    d.probs.assign(legal_action_count(instance), 0.0);
    d.probs[action_index(instance, action)] = 1.0;
    d.log_probs.assign(d.probs.size(), std::log(1e-12));
    d.log_probs[action_index(instance, action)] = 0.0;
    return d;
}

/// Highest-scoring object among those where eligible(i), ties to the lowest
/// index; -1 when none is eligible.
template <typename Eligible, typename Score>
int best_object(int n, Eligible eligible, Score score) {
    int best = -1;
    double best_score = 0.0;
    for (int i = 0; i < n; ++i) {
        if (!eligible(i)) continue;
        double s = score(i);
        if (best < 0 || s > best_score) {
            best = i;
            best_score = s;
        }
    }
    return best;
}

GroundAction greedy_heuristic_action(const ProblemInstance& instance,
                                     const GroundState& state) {
    // dispatch below assumes kind/domain agreement, checked in baseline_policy
    int n = instance.object_count();
    const Tensor& adj = instance.binary_nonfluent;
    switch (instance.domain) {
    case DomainId::SysAdmin: {
        int pick = best_object(
            n, [&](int i) { return state.fluents.at(i, 0) == 0.0; },
            [&](int i) {
                double running = 0.0;
                for (int j = 0; j < n; ++j)
                    if (adj.at(i, j) != 0.0 && state.fluents.at(j, 0) != 0.0)
                        running += 1.0;
                return running;
            });
        return pick < 0 ? GroundAction::noop() : GroundAction::apply(0, pick);
    }
    case DomainId::GameOfLife: {
        int pick = best_object(
            n, [&](int i) { return state.fluents.at(i, 0) == 0.0; },
            [&](int i) {
                double alive = 0.0;
                for (int j = 0; j < n; ++j)
                    if (adj.at(i, j) != 0.0 && state.fluents.at(j, 0) != 0.0)
                        alive += 1.0;
                return alive;
            });
        return pick < 0 ? GroundAction::noop() : GroundAction::apply(0, pick);
    }
    case DomainId::AcademicAdvising: {
        // Unmet requirement with the most prerequisites already passed;
        // course costs are uniform, so cost never breaks a tie here.
        int pick = best_object(
            n,
            [&](int i) {
                return instance.unary_nonfluents.at(i, 0) != 0.0 &&
                       state.fluents.at(i, 0) == 0.0;
            },
            [&](int i) {
                double passed = 0.0;
                for (int j = 0; j < n; ++j)
                    if (adj.at(j, i) != 0.0 && state.fluents.at(j, 0) != 0.0)
                        passed += 1.0;
                return passed;
            });
        return pick < 0 ? GroundAction::noop() : GroundAction::apply(0, pick);
    }
    }
    return GroundAction::noop();
}

} // namespace

const std::string& baseline_name(BaselineKind kind) {
    return kBaselineNames[static_cast<int>(kind)];
}

BaselineKind domain_greedy_kind(DomainId domain) {
    switch (domain) {
    case DomainId::SysAdmin: return BaselineKind::SysAdminGreedy;
    case DomainId::GameOfLife: return BaselineKind::GoLGreedy;
    case DomainId::AcademicAdvising: return BaselineKind::AcadGreedy;
    }
    throw Error("unknown domain id");
}

PolicyFn baseline_policy(const ProblemInstance& instance, BaselineKind kind) {
    const ProblemInstance* inst = &instance;
    switch (kind) {
    case BaselineKind::UniformRandom:
        return [inst](const GroundState&) {
            int count = legal_action_count(*inst);
            PolicyDistribution d;
            d.probs.assign(count, 1.0 / count);
            d.log_probs.assign(count, std::log(1.0 / count));
            return d;
        };
    case BaselineKind::NoopOnly:
        return [inst](const GroundState&) {
            return point_mass(*inst, GroundAction::noop());
        };
    case BaselineKind::SysAdminGreedy:
    case BaselineKind::GoLGreedy:
    case BaselineKind::AcadGreedy:
        if (kind != domain_greedy_kind(instance.domain))
            throw DomainMismatch("baseline " + baseline_name(kind) +
                                 " does not apply to domain " +
                                 domain_name(instance.domain));
        return [inst](const GroundState& state) {
            return point_mass(*inst, greedy_heuristic_action(*inst, state));
        };
    }
    throw Error("unknown baseline kind");
}

EvalReport estimate_value(const ProblemInstance& instance, const PolicyFn& policy,
                          int runs, RngStream rng, const std::string& policy_id,
                          int threads) {
    if (runs < 1) throw Error("estimate_value: runs must be >= 1");
    std::vector<double> returns(runs);
    run_units(runs, threads, [&](int i) {
        RngStream stream = rng.derive(static_cast<std::uint64_t>(i));
        Trajectory traj = rollout(instance, policy, stream);
        returns[i] = discounted_return(traj, instance.discount);
    });
    double mean = 0.0;
    for (double r : returns) mean += r;
    mean /= runs;
    double var = 0.0;
    for (double r : returns) var += (r - mean) * (r - mean);
    double stderr_ = runs > 1 ? std::sqrt(var / (runs - 1)) / std::sqrt(runs) : 0.0;
    return EvalReport{instance.name, policy_id, runs, mean, stderr_, instance.horizon};
}

EvalReport estimate_value(const ProblemInstance& instance, const PolicyFn& policy,
                          RngStream rng, const std::string& policy_id) {
    return estimate_value(instance, policy, 100, rng, policy_id);
}

double alpha(double v, double v_sup, double v_inf) {
    if (!(v_sup > v_inf))
        throw DegenerateRange("alpha: v_sup must exceed v_inf");
    double a = (v - v_inf) / (v_sup - v_inf);
    return std::min(1.0, std::max(0.0, a));
}

LearningCurve learning_curve(const std::vector<Checkpoint>& checkpoints,
                             const ProblemInstance& instance, int runs,
                             RngStream rng, int threads) {
    struct Pending {
        double t;
        std::string policy_id;
        EvalReport report;
    };
    std::vector<Pending> rows;
    std::uint64_t stream_tag = 0;

    for (BaselineKind kind : {BaselineKind::UniformRandom, BaselineKind::NoopOnly,
                              domain_greedy_kind(instance.domain)}) {
        EvalReport report =
            estimate_value(instance, baseline_policy(instance, kind), runs,
                           rng.derive(stream_tag++), baseline_name(kind), threads);
        rows.push_back({0.0, baseline_name(kind), report});
    }

    for (const Checkpoint& cp : checkpoints) {
        ModelEval model = ModelEval(instance, cp.params, cp.config);
        const ProblemInstance* inst = &instance;
        PolicyFn greedy = [&model, inst](const GroundState& s) {
            return point_mass(*inst, greedy_action(*inst, model.policy(s)));
        };
        EvalReport greedy_report = estimate_value(
            instance, greedy, runs, rng.derive(stream_tag++), "greedy", threads);
        rows.push_back({cp.meta.wall_seconds, "greedy", greedy_report});
        EvalReport sampled_report =
            estimate_value(instance, model.policy_fn(), runs,
                           rng.derive(stream_tag++), "sampled", threads);
        rows.push_back({cp.meta.wall_seconds, "sampled", sampled_report});
    }

    LearningCurve curve;
    curve.v_sup = rows.front().report.mean_return;
    curve.v_inf = rows.front().report.mean_return;
    for (const Pending& row : rows) {
        curve.v_sup = std::max(curve.v_sup, row.report.mean_return);
        curve.v_inf = std::min(curve.v_inf, row.report.mean_return);
    }
    for (const Pending& row : rows) {
        double a = curve.v_sup > curve.v_inf
                       ? alpha(row.report.mean_return, curve.v_sup, curve.v_inf)
                       : 0.0;
        curve.points.push_back({row.t, row.report.mean_return, a,
                                row.report.standard_error, row.policy_id});
    }
    return curve;
}

std::string format_csv_number(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

void write_curve_csv(std::ostream& out, const LearningCurve& curve) {
    out << "t,V,alpha,stderr,policy_id\n";
    for (const CurvePoint& p : curve.points)
        out << format_csv_number(p.t) << "," << format_csv_number(p.value) << ","
            << format_csv_number(p.alpha) << ","
            << format_csv_number(p.standard_error) << "," << p.policy_id << "\n";
}

void write_report_csv_header(std::ostream& out) {
    out << "instance,policy,runs,mean_return,stderr,horizon\n";
}

void write_report_csv_row(std::ostream& out, const EvalReport& report) {
    out << report.instance_id << "," << report.policy_id << "," << report.runs
        << "," << format_csv_number(report.mean_return) << ","
        << format_csv_number(report.standard_error) << "," << report.horizon << "\n";
}

} // namespace trapsnet
