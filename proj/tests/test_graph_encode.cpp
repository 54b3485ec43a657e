#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "trapsnet/domains.hpp"
#include "trapsnet/graph_encode.hpp"

using namespace trapsnet;

namespace {

ProblemInstance path3_instance() {
    GeneratorConfig c;
    c.domain = DomainId::SysAdmin;
    c.size = 3;
    c.topology = Topology::RandomGraph;
    c.edge_prob = 0.0;
    c.seed = 1;
    ProblemInstance inst = generate_instance(c);
    inst.binary_nonfluent.at(0, 1) = inst.binary_nonfluent.at(1, 0) = 1.0;
    inst.binary_nonfluent.at(1, 2) = inst.binary_nonfluent.at(2, 1) = 1.0;
    return inst;
}

} // namespace

TEST_CASE("neighborhoods include self and direct neighbors only") {
    ObjectGraph g = build_graph(path3_instance());
    CHECK(g.neighborhoods[1] == std::vector<int>{0, 1, 2});
    CHECK(g.neighborhoods[0] == std::vector<int>{0, 1});
    // raw adjacency keeps a zero diagonal
    for (int i = 0; i < 3; ++i) CHECK(g.adjacency.at(i, i) == 0.0);

    // isolated node: neighborhood is just itself
    GeneratorConfig c;
    c.domain = DomainId::SysAdmin;
    c.size = 2;
    c.topology = Topology::RandomGraph;
    c.edge_prob = 0.0;
    c.seed = 2;
    ObjectGraph isolated = build_graph(generate_instance(c));
    CHECK(isolated.neighborhoods[0] == std::vector<int>{0});
    CHECK(isolated.neighborhoods[1] == std::vector<int>{1});
}

TEST_CASE("3x3 grid center has a 9-element neighborhood") {
    ProblemInstance inst = oracle::make_instance(DomainId::GameOfLife, 9, 7);
    ObjectGraph g = build_graph(inst);
    CHECK(g.neighborhoods[4].size() == 9);   // 8 neighbors + self
    CHECK(g.neighborhoods[0].size() == 4);   // corner: 3 + self
}

TEST_CASE("directed domains use in-neighbors plus self") {
    ProblemInstance inst = oracle::make_instance(DomainId::AcademicAdvising, 3, 1);
    inst.binary_nonfluent = Tensor(3, 3);
    inst.binary_nonfluent.at(0, 2) = 1.0;   // prereq(course0, course2)
    ObjectGraph g = build_graph(inst);
    CHECK(g.neighborhoods[2] == std::vector<int>{0, 2});
    CHECK(g.neighborhoods[0] == std::vector<int>{0});   // no incoming edge
}

TEST_CASE("node features are fluents first, then unary non-fluents") {
    ProblemInstance sys = oracle::make_instance(DomainId::SysAdmin, 4, 3);
    NodeFeatureMatrix f = node_features(sys, GroundState{sys.initial_fluents});
    REQUIRE(f.features.cols() == 1);   // J=1, L=0
    for (int i = 0; i < 4; ++i)
        CHECK(f.features.at(i, 0) == 1.0);   // all running

    ProblemInstance acad = oracle::make_instance(DomainId::AcademicAdvising, 4, 3);
    NodeFeatureMatrix g = node_features(acad, GroundState{acad.initial_fluents});
    REQUIRE(g.features.cols() == 2);   // passed, program_requirement
    for (int i = 0; i < 4; ++i) {
        CHECK(g.features.at(i, 0) == 0.0);
        CHECK(g.features.at(i, 1) == acad.unary_nonfluents.at(i, 0));
    }

    CHECK(feature_count(DomainId::SysAdmin) == 1);
    CHECK(feature_count(DomainId::GameOfLife) == 1);
    CHECK(feature_count(DomainId::AcademicAdvising) == 2);
}

TEST_CASE("graph and features are permutation equivariant") {
    RngStream rng(9);
    for (DomainId domain : {DomainId::SysAdmin, DomainId::GameOfLife,
                            DomainId::AcademicAdvising}) {
        for (int trial = 0; trial < 20; ++trial) {
            int size = domain == DomainId::GameOfLife ? 9
                       : 3 + static_cast<int>(rng.uniform_int(5));
            ProblemInstance inst = oracle::make_instance(domain, size, 10 + trial);
            GroundState state = oracle::random_boolean_state(inst, rng);
            std::vector<int> perm = oracle::random_permutation(size, rng);
            ProblemInstance pinst = oracle::permute_instance(inst, perm);
            GroundState pstate = oracle::permute_state(state, perm);

            Tensor f = node_features(inst, state).features;
            Tensor pf = node_features(pinst, pstate).features;
            for (int i = 0; i < size; ++i)
                for (int c = 0; c < f.cols(); ++c)
                    CHECK(pf.at(perm[i], c) == f.at(i, c));

            ObjectGraph g = build_graph(inst);
            ObjectGraph pg = build_graph(pinst);
            for (int i = 0; i < size; ++i)
                for (int j = 0; j < size; ++j)
                    CHECK(pg.adjacency.at(perm[i], perm[j]) == g.adjacency.at(i, j));
        }
    }
}
