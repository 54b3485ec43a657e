#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "oracles.hpp"
#include "trapsnet/domains.hpp"
#include "trapsnet/mdp.hpp"

using namespace trapsnet;

namespace {

GeneratorConfig sysadmin_config(int size, std::uint64_t seed, double edge_prob = 0.5) {
    GeneratorConfig c;
    c.domain = DomainId::SysAdmin;
    c.size = size;
    c.topology = Topology::RandomGraph;
    c.edge_prob = edge_prob;
    c.seed = seed;
    return c;
}

GeneratorConfig gol_config(int rows, int cols, std::uint64_t seed) {
    GeneratorConfig c;
    c.domain = DomainId::GameOfLife;
    c.size = rows * cols;
    c.topology = Topology::Grid;
    c.grid_rows = rows;
    c.grid_cols = cols;
    c.seed = seed;
    return c;
}

GeneratorConfig acad_config(int size, std::uint64_t seed, double edge_prob = 0.3) {
    GeneratorConfig c;
    c.domain = DomainId::AcademicAdvising;
    c.size = size;
    c.topology = Topology::Dag;
    c.edge_prob = edge_prob;
    c.seed = seed;
    return c;
}

/// Path c0 - c1 - c2 with a chosen running pattern.
ProblemInstance sysadmin_path3() {
    ProblemInstance inst = generate_instance(sysadmin_config(3, 1, 0.0));
    inst.binary_nonfluent.at(0, 1) = inst.binary_nonfluent.at(1, 0) = 1.0;
    inst.binary_nonfluent.at(1, 2) = inst.binary_nonfluent.at(2, 1) = 1.0;
    inst.validate();
    return inst;
}

} // namespace

TEST_CASE("legal_actions enumerates apply(k,i) k-major plus one noop") {
    ProblemInstance inst = generate_instance(sysadmin_config(3, 7));
    std::vector<GroundAction> actions = legal_actions(inst);
    REQUIRE(actions.size() == 4);
    CHECK(actions[0] == GroundAction::apply(0, 0));
    CHECK(actions[1] == GroundAction::apply(0, 1));
    CHECK(actions[2] == GroundAction::apply(0, 2));
    CHECK(actions[3].is_noop());
    for (std::size_t i = 0; i < actions.size(); ++i)
        CHECK(action_index(inst, actions[i]) == static_cast<int>(i));

    ProblemInstance one = generate_instance(sysadmin_config(1, 7));
    CHECK(legal_actions(one).size() == 2);

    ProblemInstance gol = generate_instance(gol_config(3, 3, 7));
    CHECK(legal_actions(gol).size() == 10);
    CHECK(legal_action_count(gol) == 10);
}

TEST_CASE("legal action count is templates*objects+1 on random instances") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        for (int size : {1, 2, 5, 9}) {
            ProblemInstance a = generate_instance(sysadmin_config(size, seed));
            CHECK(legal_action_count(a) == size + 1);
            ProblemInstance c = generate_instance(acad_config(size, seed));
            CHECK(legal_action_count(c) == size + 1);
        }
    }
}

TEST_CASE("step reward for sysadmin counts running computers") {
    ProblemInstance inst = sysadmin_path3();
    GroundState all_running{Tensor(3, 1, 1.0)};
    RngStream rng(3);
    auto [next, r] = step(inst, all_running, GroundAction::noop(), rng);
    CHECK(r == 3.0);

    RngStream rng2(3);
    auto [next2, r2] = step(inst, all_running, GroundAction::apply(0, 1), rng2);
    CHECK(r2 == doctest::Approx(3.0 - 0.75));
}

TEST_CASE("gol with zero noise keeps a dead board dead under noop") {
    ProblemInstance inst = generate_instance(gol_config(3, 3, 5));
    std::get<GoLParams>(inst.params).noise_prob = 0.0;
    GroundState dead{Tensor(9, 1, 0.0)};
    RngStream rng(11);
    auto [next, r] = step(inst, dead, GroundAction::noop(), rng);
    CHECK(r == 0.0);
    for (int i = 0; i < 9; ++i) CHECK(next.fluents.at(i, 0) == 0.0);
}

TEST_CASE("equal seeds give bit-identical step outcomes") {
    ProblemInstance inst = generate_instance(sysadmin_config(6, 9));
    GroundState s{inst.initial_fluents};
    RngStream a(1234), b(1234);
    for (int t = 0; t < 20; ++t) {
        auto [na, ra] = step(inst, s, GroundAction::apply(0, t % 6), a);
        auto [nb, rb] = step(inst, s, GroundAction::apply(0, t % 6), b);
        CHECK(ra == rb);
        CHECK(na == nb);
        s = na;
    }
}

TEST_CASE("step rejects out-of-range actions") {
    ProblemInstance inst = generate_instance(sysadmin_config(3, 9));
    GroundState s{inst.initial_fluents};
    RngStream rng(1);
    CHECK_THROWS_AS(step(inst, s, GroundAction::apply(0, 3), rng), IllegalAction);
    CHECK_THROWS_AS(step(inst, s, GroundAction::apply(1, 0), rng), IllegalAction);
}

TEST_CASE("discounted_return") {
    Trajectory t;
    GroundState dummy{Tensor(1, 1)};
    for (double r : {1.0, 1.0, 1.0})
        t.steps.push_back({dummy, GroundAction::noop(), r});
    CHECK(discounted_return(t, 1.0) == 3.0);
    Trajectory t2;
    t2.steps.push_back({dummy, GroundAction::noop(), 1.0});
    t2.steps.push_back({dummy, GroundAction::noop(), 1.0});
    CHECK(discounted_return(t2, 0.5) == doctest::Approx(1.5));
    CHECK(discounted_return(Trajectory{}, 0.9) == 0.0);
}

TEST_CASE("rollout length is bounded by the horizon and is reproducible") {
    ProblemInstance inst = generate_instance(sysadmin_config(4, 2));
    inst.horizon = 5;
    PolicyFn uniform = [&inst](const GroundState&) {
        PolicyDistribution d;
        int n = legal_action_count(inst);
        d.probs.assign(n, 1.0 / n);
        d.log_probs.assign(n, std::log(1.0 / n));
        return d;
    };
    RngStream r1(77);
    Trajectory t1 = rollout(inst, uniform, r1);
    CHECK(t1.length() <= 5);
    CHECK(t1.length() == 5);   // sysadmin never terminates early
    RngStream r2(77);
    Trajectory t2 = rollout(inst, uniform, r2);
    REQUIRE(t1.length() == t2.length());
    for (int i = 0; i < t1.length(); ++i) {
        CHECK(t1.steps[i].action == t2.steps[i].action);
        CHECK(t1.steps[i].reward == t2.steps[i].reward);
        CHECK(t1.steps[i].state == t2.steps[i].state);
    }
}

TEST_CASE("academic advising rollout stops when all requirements pass") {
    ProblemInstance inst = generate_instance(acad_config(3, 4, 0.0));
    // single requirement on course0, no prereqs, pass prob 0.8
    inst.unary_nonfluents = Tensor(3, 1);
    inst.unary_nonfluents.at(0, 0) = 1.0;
    inst.horizon = 50;
    PolicyFn take0 = [&inst](const GroundState&) {
        PolicyDistribution d;
        d.probs.assign(legal_action_count(inst), 0.0);
        d.probs[0] = 1.0;   // Apply(take, course0)
        d.log_probs.assign(d.probs.size(), -27.0);
        d.log_probs[0] = 0.0;
        return d;
    };
    RngStream rng(5);
    Trajectory t = rollout(inst, take0, rng);
    CHECK(t.length() < 50);
    CHECK(is_terminal(inst, t.terminal_state));
}

TEST_CASE("uniform policy return matches exact chain evaluation within 3 SE") {
    ProblemInstance inst = generate_instance(sysadmin_config(2, 3, 1.0));
    inst.horizon = 10;
    oracle::ExactMdp mdp(inst);
    int action_count = legal_action_count(inst);
    double exact = mdp.policy_value([&](std::uint32_t) {
        return std::vector<double>(action_count, 1.0 / action_count);
    });

    PolicyFn uniform = [&](const GroundState&) {
        PolicyDistribution d;
        d.probs.assign(action_count, 1.0 / action_count);
        d.log_probs.assign(action_count, std::log(1.0 / action_count));
        return d;
    };
    const int runs = 10000;
    RngStream rng(999);
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < runs; ++i) {
        RngStream stream = rng.derive(i);
        double v = discounted_return(rollout(inst, uniform, stream), inst.discount);
        sum += v;
        sq += v * v;
    }
    double mean = sum / runs;
    double se = std::sqrt((sq / runs - mean * mean) / (runs - 1));
    CHECK(std::abs(mean - exact) < 3.0 * se);
}

TEST_CASE("sysadmin_next_prob follows the stated formula") {
    SysAdminParams params;
    ProblemInstance inst = generate_instance(sysadmin_config(4, 1, 0.0));
    // star: c0 connected to c1, c2, c3
    for (int j = 1; j < 4; ++j)
        inst.binary_nonfluent.at(0, j) = inst.binary_nonfluent.at(j, 0) = 1.0;
    GroundState s{Tensor(4, 1, 1.0)};
    s.fluents.at(3, 0) = 0.0;   // 2 of c0's 3 neighbors running

    CHECK(sysadmin_next_prob(params, inst, s, GroundAction::apply(0, 0), 0) == 1.0);
    CHECK(sysadmin_next_prob(params, inst, s, GroundAction::noop(), 0) ==
          doctest::Approx(0.45 + 0.5 * (3.0 / 4.0)));
    CHECK(sysadmin_next_prob(params, inst, s, GroundAction::noop(), 3) ==
          doctest::Approx(0.04));
}

TEST_CASE("sysadmin_reward examples") {
    SysAdminParams params;
    GroundState s{Tensor(8, 1, 1.0)};
    for (int i = 5; i < 8; ++i) s.fluents.at(i, 0) = 0.0;   // 5 of 8 running
    CHECK(sysadmin_reward(params, s, GroundAction::noop()) == 5.0);
    CHECK(sysadmin_reward(params, s, GroundAction::apply(0, 5)) ==
          doctest::Approx(4.25));
    GroundState dead{Tensor(8, 1, 0.0)};
    CHECK(sysadmin_reward(params, dead, GroundAction::noop()) == 0.0);
}

TEST_CASE("gol_next_prob follows Conway plus noise and the set action") {
    ProblemInstance inst = generate_instance(gol_config(3, 3, 2));
    GoLParams zero_noise;
    zero_noise.noise_prob = 0.0;
    GoLParams params;   // noise 0.1

    // alive center with exactly two alive neighbors
    GroundState s{Tensor(9, 1, 0.0)};
    s.fluents.at(4, 0) = 1.0;
    s.fluents.at(0, 0) = 1.0;
    s.fluents.at(8, 0) = 1.0;
    CHECK(gol_next_prob(zero_noise, inst, s, GroundAction::noop(), 4) == 1.0);

    // dead center with exactly three alive neighbors
    GroundState s3{Tensor(9, 1, 0.0)};
    s3.fluents.at(0, 0) = s3.fluents.at(1, 0) = s3.fluents.at(2, 0) = 1.0;
    CHECK(gol_next_prob(params, inst, s3, GroundAction::noop(), 4) ==
          doctest::Approx(0.9));

    // set action on a dead isolated cell
    GroundState dead{Tensor(9, 1, 0.0)};
    CHECK(gol_next_prob(params, inst, dead, GroundAction::apply(0, 4), 4) ==
          doctest::Approx(0.9));
}

TEST_CASE("gol_reward examples") {
    GoLParams params;
    GroundState s{Tensor(9, 1, 0.0)};
    for (int i = 0; i < 4; ++i) s.fluents.at(i, 0) = 1.0;
    CHECK(gol_reward(params, s, GroundAction::noop()) == 4.0);
    GroundState dead{Tensor(9, 1, 0.0)};
    CHECK(gol_reward(params, dead, GroundAction::noop()) == 0.0);
    GoLParams penalized;
    penalized.set_action_penalty = 0.5;
    CHECK(gol_reward(penalized, s, GroundAction::apply(0, 7)) == doctest::Approx(3.5));
}

TEST_CASE("acad_next_prob: persistence, prereq formula, prereq-free prior") {
    AcadParams params;
    ProblemInstance inst = generate_instance(acad_config(4, 1, 0.0));
    // course2 has prereqs course0 and course1
    inst.binary_nonfluent.at(0, 2) = 1.0;
    inst.binary_nonfluent.at(1, 2) = 1.0;

    GroundState s{Tensor(4, 1, 0.0)};
    s.fluents.at(3, 0) = 1.0;   // already passed
    CHECK(acad_next_prob(params, inst, s, GroundAction::noop(), 3) == 1.0);
    CHECK(acad_next_prob(params, inst, s, GroundAction::apply(0, 3), 3) == 1.0);

    CHECK(acad_next_prob(params, inst, s, GroundAction::apply(0, 2), 2) ==
          doctest::Approx(0.9 / 3.0));
    CHECK(acad_next_prob(params, inst, s, GroundAction::apply(0, 0), 0) ==
          doctest::Approx(0.8));
    // untaken unpassed course stays unpassed
    CHECK(acad_next_prob(params, inst, s, GroundAction::noop(), 2) == 0.0);
}

TEST_CASE("acad_reward examples") {
    AcadParams params;
    ProblemInstance inst = generate_instance(acad_config(3, 1, 0.0));
    inst.unary_nonfluents = Tensor(3, 1);
    inst.unary_nonfluents.at(0, 0) = 1.0;

    GroundState done{Tensor(3, 1, 1.0)};
    CHECK(acad_reward(params, inst, done, GroundAction::noop()) == 0.0);

    GroundState fresh{Tensor(3, 1, 0.0)};
    CHECK(acad_reward(params, inst, fresh, GroundAction::apply(0, 1)) ==
          doctest::Approx(-6.0));
    CHECK(acad_reward(params, inst, fresh, GroundAction::noop()) ==
          doctest::Approx(-5.0));
    // retaking a passed course pays the redo cost
    GroundState partial{Tensor(3, 1, 0.0)};
    partial.fluents.at(1, 0) = 1.0;
    CHECK(acad_reward(params, inst, partial, GroundAction::apply(0, 1)) ==
          doctest::Approx(-2.0 + -5.0));
}

TEST_CASE("generated grid has 8-neighborhoods with 3-neighbor corners") {
    ProblemInstance inst = generate_instance(gol_config(3, 3, 21));
    CHECK(inst.object_count() == 9);
    auto degree = [&](int i) {
        int d = 0;
        for (int j = 0; j < 9; ++j)
            if (inst.binary_nonfluent.at(i, j) != 0.0) ++d;
        return d;
    };
    CHECK(degree(0) == 3);   // corner
    CHECK(degree(1) == 5);   // edge
    CHECK(degree(4) == 8);   // center
}

TEST_CASE("generated dag is acyclic and has at least one requirement") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        ProblemInstance inst = generate_instance(acad_config(6, seed, 0.4));
        // construction places edges only from lower to higher index
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j <= i; ++j)
                CHECK(inst.binary_nonfluent.at(i, j) == 0.0);
        double req = 0.0;
        for (int i = 0; i < 6; ++i) req += inst.unary_nonfluents.at(i, 0);
        CHECK(req >= 1.0);
    }
}

TEST_CASE("same generator seed reproduces the instance exactly") {
    for (std::uint64_t seed : {0ULL, 5ULL, 123456ULL}) {
        ProblemInstance a = generate_instance(sysadmin_config(8, seed));
        ProblemInstance b = generate_instance(sysadmin_config(8, seed));
        CHECK(a.binary_nonfluent == b.binary_nonfluent);
        CHECK(a.initial_fluents == b.initial_fluents);
        CHECK(a.objects == b.objects);
        ProblemInstance g1 = generate_instance(gol_config(2, 3, seed));
        ProblemInstance g2 = generate_instance(gol_config(2, 3, seed));
        CHECK(g1.initial_fluents == g2.initial_fluents);
    }
}

TEST_CASE("generator rejects invalid configurations") {
    GeneratorConfig bad = gol_config(3, 3, 1);
    bad.grid_cols = 2;   // 3*2 != 9
    CHECK_THROWS_AS(generate_instance(bad), InvalidTopology);
    GeneratorConfig neg = sysadmin_config(0, 1);
    CHECK_THROWS_AS(generate_instance(neg), InvalidTopology);
    GeneratorConfig wrong_topology = sysadmin_config(4, 1);
    wrong_topology.topology = Topology::Grid;
    CHECK_THROWS_AS(generate_instance(wrong_topology), InvalidTopology);
}

TEST_CASE("noise-free gol reproduces Conway's rule on all 512 neighborhoods") {
    ProblemInstance inst = generate_instance(gol_config(3, 3, 1));
    std::get<GoLParams>(inst.params).noise_prob = 0.0;
    for (int mask = 0; mask < 512; ++mask) {
        GroundState s{Tensor(9, 1)};
        for (int i = 0; i < 9; ++i)
            s.fluents.at(i, 0) = (mask >> i) & 1 ? 1.0 : 0.0;
        int live = 0;
        for (int i = 0; i < 9; ++i)
            if (i != 4 && ((mask >> i) & 1)) ++live;
        bool expect = oracle::conway_next((mask >> 4) & 1, live);
        double p = gol_next_prob(std::get<GoLParams>(inst.params), inst, s,
                                 GroundAction::noop(), 4);
        CHECK(p == (expect ? 1.0 : 0.0));
    }
}

TEST_CASE("next_prob outputs stay in [0,1] over random states and actions") {
    RngStream rng(31337);
    std::vector<ProblemInstance> instances = {
        generate_instance(sysadmin_config(6, 1)),
        generate_instance(gol_config(2, 3, 2)),
        generate_instance(acad_config(6, 3)),
    };
    for (int trial = 0; trial < 3000; ++trial) {
        const ProblemInstance& inst = instances[trial % instances.size()];
        int n = inst.object_count();
        GroundState s{Tensor(n, 1)};
        for (int i = 0; i < n; ++i)
            s.fluents.at(i, 0) = rng.bernoulli(0.5) ? 1.0 : 0.0;
        int a = static_cast<int>(rng.uniform_int(n + 1));
        GroundAction action = a == n ? GroundAction::noop() : GroundAction::apply(0, a);
        for (int o = 0; o < n; ++o) {
            double p = next_prob(inst, s, action, o);
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
        }
    }
}

TEST_CASE("sysadmin next_prob is non-decreasing in running neighbors") {
    SysAdminParams params;
    ProblemInstance inst = generate_instance(sysadmin_config(5, 1, 0.0));
    for (int j = 1; j < 5; ++j)
        inst.binary_nonfluent.at(0, j) = inst.binary_nonfluent.at(j, 0) = 1.0;
    double prev = -1.0;
    for (int running = 0; running <= 4; ++running) {
        GroundState s{Tensor(5, 1, 0.0)};
        s.fluents.at(0, 0) = 1.0;
        for (int j = 1; j <= running; ++j) s.fluents.at(j, 0) = 1.0;
        double p = sysadmin_next_prob(params, inst, s, GroundAction::noop(), 0);
        CHECK(p >= prev);
        prev = p;
    }
}

TEST_CASE("passed courses stay passed under any action") {
    ProblemInstance inst = generate_instance(acad_config(5, 17, 0.5));
    RngStream rng(8);
    GroundState s{Tensor(5, 1, 0.0)};
    s.fluents.at(2, 0) = 1.0;
    for (int t = 0; t < 50; ++t) {
        int a = static_cast<int>(rng.uniform_int(6));
        GroundAction action = a == 5 ? GroundAction::noop() : GroundAction::apply(0, a);
        auto [next, r] = step(inst, s, action, rng);
        for (int i = 0; i < 5; ++i)
            if (s.fluents.at(i, 0) == 1.0)
                CHECK(next.fluents.at(i, 0) == 1.0);
        s = next;
    }
}

TEST_CASE("sampled fluent frequencies match next_prob within 4 sigma") {
    ProblemInstance inst = sysadmin_path3();
    GroundState s{Tensor(3, 1, 1.0)};
    s.fluents.at(2, 0) = 0.0;
    GroundAction action = GroundAction::noop();
    const int draws = 100000;
    std::vector<int> ones(3, 0);
    RngStream rng(4242);
    for (int d = 0; d < draws; ++d) {
        auto [next, r] = step(inst, s, action, rng);
        for (int i = 0; i < 3; ++i)
            if (next.fluents.at(i, 0) != 0.0) ++ones[i];
    }
    for (int i = 0; i < 3; ++i) {
        double p = next_prob(inst, s, action, i);
        double sigma = std::sqrt(p * (1.0 - p) / draws);
        CHECK(std::abs(static_cast<double>(ones[i]) / draws - p) <= 4.0 * sigma);
    }
}

TEST_CASE("sample_action follows the distribution; greedy takes the argmax") {
    ProblemInstance inst = generate_instance(sysadmin_config(2, 1));
    PolicyDistribution d;
    d.probs = {1.0, 0.0, 0.0};
    d.log_probs = {0.0, -27.0, -27.0};
    RngStream rng(5);
    for (int i = 0; i < 100; ++i)
        CHECK(sample_action(inst, d, rng) == GroundAction::apply(0, 0));

    PolicyDistribution mixed;
    mixed.probs = {0.2, 0.5, 0.3};
    mixed.log_probs = {std::log(0.2), std::log(0.5), std::log(0.3)};
    CHECK(greedy_action(inst, mixed) == GroundAction::apply(0, 1));

    const int draws = 100000;
    std::vector<int> counts(3, 0);
    RngStream rng2(6);
    for (int i = 0; i < draws; ++i)
        ++counts[action_index(inst, sample_action(inst, mixed, rng2))];
    for (int i = 0; i < 3; ++i) {
        double p = mixed.probs[i];
        double sigma = std::sqrt(p * (1 - p) / draws);
        CHECK(std::abs(static_cast<double>(counts[i]) / draws - p) <= 4.0 * sigma);
    }

    RngStream ra(9), rb(9);
    for (int i = 0; i < 50; ++i)
        CHECK(sample_action(inst, mixed, ra) == sample_action(inst, mixed, rb));
}
