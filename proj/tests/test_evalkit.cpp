#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "trapsnet/evalkit.hpp"
#include "trapsnet/trainer.hpp"

using namespace trapsnet;

TEST_CASE("alpha endpoints, midpoint, clamping, and the degenerate range") {
    CHECK(alpha(6.0, 6.0, 2.0) == 1.0);
    CHECK(alpha(2.0, 6.0, 2.0) == 0.0);
    CHECK(alpha(4.0, 6.0, 2.0) == doctest::Approx(0.5));
    CHECK(alpha(7.0, 6.0, 2.0) == 1.0);    // clamped for reporting
    CHECK(alpha(1.0, 6.0, 2.0) == 0.0);
    CHECK_THROWS_AS(alpha(1.0, 2.0, 2.0), DegenerateRange);
    CHECK_THROWS_AS(alpha(1.0, 1.0, 2.0), DegenerateRange);
}

TEST_CASE("alpha is invariant under a shared positive affine rescaling") {
    RngStream rng(3);
    for (int i = 0; i < 100; ++i) {
        double v_inf = rng.uniform(-10, 10);
        double v_sup = v_inf + rng.uniform(0.1, 20);
        double v = rng.uniform(v_inf, v_sup);
        double a = rng.uniform(0.1, 5);
        double b = rng.uniform(-30, 30);
        CHECK(alpha(a * v + b, a * v_sup + b, a * v_inf + b) ==
              doctest::Approx(alpha(v, v_sup, v_inf)).epsilon(1e-9));
    }
}

TEST_CASE("noop policy on an empty board scores exactly zero") {
    ProblemInstance inst = oracle::make_instance(DomainId::GameOfLife, 9, 4);
    inst.initial_fluents = Tensor(9, 1, 0.0);
    std::get<GoLParams>(inst.params).noise_prob = 0.0;
    EvalReport report = estimate_value(inst, baseline_policy(inst, BaselineKind::NoopOnly),
                                       100, RngStream(5), "noop_only");
    CHECK(report.mean_return == 0.0);
    CHECK(report.standard_error == 0.0);
    CHECK(report.runs == 100);
}

TEST_CASE("runs=1 reports a single rollout with zero stderr") {
    ProblemInstance inst = oracle::make_instance(DomainId::SysAdmin, 3, 9);
    EvalReport report = estimate_value(
        inst, baseline_policy(inst, BaselineKind::UniformRandom), 1, RngStream(4),
        "uniform_random");
    CHECK(report.runs == 1);
    CHECK(report.standard_error == 0.0);
    RngStream check = RngStream(4).derive(0);
    Trajectory t = rollout(inst, baseline_policy(inst, BaselineKind::UniformRandom),
                           check);
    CHECK(report.mean_return == discounted_return(t, inst.discount));
}

TEST_CASE("uniform-random estimate agrees with the exact chain within 3 SE") {
    ProblemInstance inst = oracle::make_instance(DomainId::SysAdmin, 2, 3, 10);
    inst.binary_nonfluent.at(0, 1) = inst.binary_nonfluent.at(1, 0) = 1.0;
    oracle::ExactMdp mdp(inst);
    int actions = legal_action_count(inst);
    double exact = mdp.policy_value([&](std::uint32_t) {
        return std::vector<double>(actions, 1.0 / actions);
    });
    EvalReport report = estimate_value(
        inst, baseline_policy(inst, BaselineKind::UniformRandom), 2000, RngStream(8),
        "uniform_random");
    CHECK(std::abs(report.mean_return - exact) < 3.0 * report.standard_error);
}

TEST_CASE("eval reports are exactly reproducible under a fixed seed") {
    ProblemInstance inst = oracle::make_instance(DomainId::AcademicAdvising, 5, 6);
    PolicyFn policy = baseline_policy(inst, domain_greedy_kind(inst.domain));
    EvalReport a = estimate_value(inst, policy, 50, RngStream(123), "sysadmin_greedy");
    EvalReport b = estimate_value(inst, policy, 50, RngStream(123), "sysadmin_greedy");
    CHECK(a.mean_return == b.mean_return);
    CHECK(a.standard_error == b.standard_error);
}

TEST_CASE("baselines always return one legal action's worth of mass") {
    RngStream rng(10);
    for (DomainId domain : {DomainId::SysAdmin, DomainId::GameOfLife,
                            DomainId::AcademicAdvising}) {
        ProblemInstance inst = oracle::make_instance(domain, 6, 12);
        for (BaselineKind kind : {BaselineKind::UniformRandom, BaselineKind::NoopOnly,
                                  domain_greedy_kind(inst.domain)}) {
            PolicyFn policy = baseline_policy(inst, kind);
            for (int trial = 0; trial < 20; ++trial) {
                GroundState s = oracle::random_boolean_state(inst, rng);
                PolicyDistribution d = policy(s);
                REQUIRE(static_cast<int>(d.probs.size()) == legal_action_count(inst));
                double sum = 0.0;
                for (double p : d.probs) sum += p;
                CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
                GroundAction a = greedy_action(inst, d);
                CHECK((a.is_noop() || a.object_index < inst.object_count()));
            }
        }
    }
}

TEST_CASE("greedy heuristic reboots the dead computer with most running neighbors") {
    ProblemInstance inst = oracle::make_instance(DomainId::SysAdmin, 4, 1);
    inst.binary_nonfluent = Tensor(4, 4);
    // c1 has 2 running neighbors (c0, c2); c3 has none
    inst.binary_nonfluent.at(0, 1) = inst.binary_nonfluent.at(1, 0) = 1.0;
    inst.binary_nonfluent.at(2, 1) = inst.binary_nonfluent.at(1, 2) = 1.0;
    GroundState s{Tensor(4, 1, 1.0)};
    s.fluents.at(1, 0) = 0.0;
    s.fluents.at(3, 0) = 0.0;
    PolicyDistribution d = baseline_policy(inst, domain_greedy_kind(inst.domain))(s);
    CHECK(greedy_action(inst, d) == GroundAction::apply(0, 1));
    // nothing dead -> noop
    GroundState all{Tensor(4, 1, 1.0)};
    PolicyDistribution d2 = baseline_policy(inst, domain_greedy_kind(inst.domain))(all);
    CHECK(greedy_action(inst, d2).is_noop());
}

TEST_CASE("learning_curve covers baselines plus per-checkpoint greedy and sampled") {
    ProblemInstance train_inst = oracle::make_instance(DomainId::SysAdmin, 3, 2, 10);
    TrainConfig tc;
    tc.instances = {train_inst};
    tc.max_rounds = 2;
    tc.checkpoint_every_rounds = 1;
    tc.nstep = 4;
    tc.seed = 5;
    std::vector<Checkpoint> checkpoints;
    train(tc, [&](const Checkpoint& cp) { checkpoints.push_back(cp); });
    REQUIRE(checkpoints.size() == 3);

    ProblemInstance target = oracle::make_instance(DomainId::SysAdmin, 5, 3, 10);
    LearningCurve curve = learning_curve(checkpoints, target, 20, RngStream(31));
    // 3 baselines + 2 rows per checkpoint
    CHECK(curve.points.size() == 3 + 2 * checkpoints.size());
    CHECK(curve.v_sup > curve.v_inf);
    int zero_shot_rows = 0;
    for (const CurvePoint& p : curve.points) {
        CHECK(p.alpha >= 0.0);
        CHECK(p.alpha <= 1.0);
        CHECK(p.value >= curve.v_inf);
        CHECK(p.value <= curve.v_sup);
        if (p.t == 0.0 && (p.policy_id == "greedy" || p.policy_id == "sampled"))
            ++zero_shot_rows;
    }
    CHECK(zero_shot_rows == 2);   // the initial checkpoint provides t=0 points

    // curve t column equals the checkpoint metadata times, in order
    std::vector<double> ts;
    for (const CurvePoint& p : curve.points)
        if (p.policy_id == "greedy") ts.push_back(p.t);
    REQUIRE(ts.size() == checkpoints.size());
    for (std::size_t i = 0; i < ts.size(); ++i)
        CHECK(ts[i] == checkpoints[i].meta.wall_seconds);
}

TEST_CASE("curve CSV has the documented shape") {
    LearningCurve curve;
    curve.v_sup = 2.0;
    curve.v_inf = 0.0;
    curve.points.push_back({0.0, 1.0, 0.5, 0.25, "greedy"});
    std::ostringstream out;
    write_curve_csv(out, curve);
    CHECK(out.str() == "t,V,alpha,stderr,policy_id\n0,1,0.5,0.25,greedy\n");

    std::ostringstream report_out;
    write_report_csv_header(report_out);
    EvalReport r{"inst", "noop_only", 100, -1.25, 0.5, 40};
    write_report_csv_row(report_out, r);
    CHECK(report_out.str() ==
          "instance,policy,runs,mean_return,stderr,horizon\n"
          "inst,noop_only,100,-1.25,0.5,40\n");
}

TEST_CASE("single checkpoint equal to the best baseline gets alpha 1") {
    // a checkpoint whose greedy value reaches v_sup must land at alpha=1;
    // verified structurally through alpha() rather than by training
    CHECK(alpha(3.5, 3.5, -1.0) == 1.0);
}

TEST_CASE("greedy baselines are domain-checked") {
    ProblemInstance sys = oracle::make_instance(DomainId::SysAdmin, 3, 1);
    CHECK(domain_greedy_kind(sys.domain) == BaselineKind::SysAdminGreedy);
    CHECK_THROWS_AS(baseline_policy(sys, BaselineKind::GoLGreedy), DomainMismatch);
    CHECK_THROWS_AS(baseline_policy(sys, BaselineKind::AcadGreedy), DomainMismatch);
    CHECK(baseline_name(BaselineKind::GoLGreedy) == "gol_greedy");
}
