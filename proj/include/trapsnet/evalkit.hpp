#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "trapsnet/instance_io.hpp"
#include "trapsnet/mdp.hpp"
#include "trapsnet/model.hpp"

namespace trapsnet {

struct EvalReport {
    std::string instance_id;
    std::string policy_id;
    int runs = 0;
    double mean_return = 0.0;
    double standard_error = 0.0;
    int horizon = 0;
};

enum class BaselineKind {
    UniformRandom,
    NoopOnly,
    SysAdminGreedy,   // reboot the dead computer with the most running neighbors
    GoLGreedy,        // revive the dead cell with the most live neighbors
    AcadGreedy,       // take the unmet requirement with most prerequisites passed
};

const std::string& baseline_name(BaselineKind kind);

/// The greedy baseline matching an instance's domain.
BaselineKind domain_greedy_kind(DomainId domain);

/// Deterministic hand-coded policies used as desk-scale value anchors.
/// The greedy kinds must match the instance's domain (DomainMismatch).
PolicyFn baseline_policy(const ProblemInstance& instance, BaselineKind kind);

/// Mean discounted return over `runs` independent rollouts; run i draws from
/// rng.derive(i), so results are reproducible and order-independent.
EvalReport estimate_value(const ProblemInstance& instance, const PolicyFn& policy,
                          int runs, RngStream rng,
                          const std::string& policy_id = "policy",
                          int threads = 1);

/// Default protocol: 100 rollouts.
EvalReport estimate_value(const ProblemInstance& instance, const PolicyFn& policy,
                          RngStream rng, const std::string& policy_id = "policy");

/// Fraction of the best observed performance: (v - v_inf) / (v_sup - v_inf),
/// clamped to [0, 1] for reporting. Throws DegenerateRange if v_sup <= v_inf.
double alpha(double v, double v_sup, double v_inf);

struct CurvePoint {
    double t = 0.0;             // training wall seconds of the checkpoint
    double value = 0.0;         // V_pi(t)
    double alpha = 0.0;
    double standard_error = 0.0;
    std::string policy_id;
};

struct LearningCurve {
    std::vector<CurvePoint> points;
    double v_sup = 0.0;
    double v_inf = 0.0;
};

/// Evaluate every checkpoint's greedy and sampled policy on the instance,
/// plus the three baselines (reported at t = 0). V_sup/V_inf are the extreme
/// mean returns over everything evaluated here.
LearningCurve learning_curve(const std::vector<Checkpoint>& checkpoints,
                             const ProblemInstance& instance, int runs,
                             RngStream rng, int threads = 1);

/// CSV column order: t,V,alpha,stderr,policy_id (LF newlines).
void write_curve_csv(std::ostream& out, const LearningCurve& curve);

/// CSV column order: instance,policy,runs,mean_return,stderr,horizon.
void write_report_csv_header(std::ostream& out);
void write_report_csv_row(std::ostream& out, const EvalReport& report);

std::string format_csv_number(double v);

} // namespace trapsnet
