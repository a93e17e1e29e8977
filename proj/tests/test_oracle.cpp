#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "persist/oracle.hpp"
#include "support.hpp"

using namespace persist;
using namespace testing_support;

namespace {

ProblemInstance k3(ProblemKind kind, double uv, double uw, double vw) {
    return ProblemInstance::from_edges(kind, 3, {{0, 1, uv}, {0, 2, uw}, {1, 2, vw}});
}

std::size_t bell(std::size_t n) {
    // Bell triangle
    std::vector<std::size_t> row{1};
    for (std::size_t i = 1; i <= n; ++i) {
        std::vector<std::size_t> next{row.back()};
        for (std::size_t x : row) next.push_back(next.back() + x);
        row = next;
    }
    return row.front();
}

}  // namespace

TEST_CASE("K3 optima") {
    auto a = k3(ProblemKind::multicut, 5, 2, -1);
    auto oa = enumerate_optima(a);
    CHECK(oa.value == 0.0);
    REQUIRE(oa.solutions.size() == 1);
    CHECK(oa.solutions[0] == EdgeLabeling{0, 0, 0});

    auto b = k3(ProblemKind::multicut, -5, 2, 1);
    auto ob = enumerate_optima(b);
    CHECK(ob.value == -4.0);
    REQUIRE(ob.solutions.size() == 1);
    CHECK(ob.solutions[0] == EdgeLabeling{1, 0, 1});

    auto m = k3(ProblemKind::maxcut, -5, 2, 1);
    auto om = enumerate_optima(m);
    CHECK(om.value == -4.0);
    REQUIRE(om.solutions.size() == 1);
    CHECK(om.solutions[0][0] == 1);
}

TEST_CASE("feasible set sizes") {
    for (std::size_t n = 1; n <= 6; ++n) {
        std::vector<Edge> edges;
        for (NodeId i = 0; i < n; ++i)
            for (NodeId j = i + 1; j < n; ++j) edges.push_back({i, j, 1.0});
        auto mc = ProblemInstance::from_edges(ProblemKind::multicut, n, edges);
        CHECK(enumerate_feasible(mc).size() == bell(n));
        auto cut = ProblemInstance::from_edges(ProblemKind::maxcut, n, edges);
        CHECK(enumerate_feasible(cut).size() == (std::size_t{1} << (n - 1)));
    }
    // a path has every labeling feasible
    auto path = ProblemInstance::from_edges(ProblemKind::multicut, 4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}});
    CHECK(enumerate_feasible(path).size() == 8);
}

TEST_CASE("the two enumeration paths agree") {
    Rng rng(51);
    for (int trial = 0; trial < 300; ++trial) {
        auto inst = random_instance(rng, any_kind(rng), 2 + rng.below(6), 0.5, any_weights(rng));
        if (inst.edge_count() > 14) continue;
        auto a = enumerate_optima(inst);
        auto b = enumerate_optima_by_labelings(inst);
        CHECK(close(a.value, b.value));
        CHECK(a.solutions == b.solutions);
    }
}

TEST_CASE("size caps") {
    auto big = ProblemInstance::from_edges(ProblemKind::multicut, kOracleMaxMulticutNodes + 1, {{0, 1, 1}});
    CHECK_THROWS_AS(enumerate_optima(big), ContractViolation);
    auto wide = ProblemInstance::from_edges(ProblemKind::maxcut, kOracleMaxMaxcutNodes + 1, {{0, 1, 1}});
    CHECK_THROWS_AS(enumerate_optima(wide), ContractViolation);
}

TEST_CASE("corrupted certificates are caught") {
    auto b = k3(ProblemKind::multicut, -5, 2, 1);
    PersistencyCertificate good{0, 1, Criterion::edge_e2, CutWitness{{0}}, 0};
    CHECK(verify_certificate(b, good));
    auto flipped = good;
    flipped.beta = 0;
    CHECK_FALSE(verify_certificate(b, flipped));
    auto out_of_range = good;
    out_of_range.edge = 7;
    CHECK_FALSE(verify_certificate(b, out_of_range));

    // ties: any optimum suffices for plain persistency, all optima for reduced cost fixing
    auto tie = ProblemInstance::from_edges(ProblemKind::multicut, 2, {{0, 1, 0.0}});
    PersistencyCertificate zero{0, 0, Criterion::edge_e1, CutWitness{{0}}, 0};
    CHECK(verify_certificate(tie, zero));
    zero.criterion = Criterion::rcf;
    CHECK_FALSE(verify_certificate(tie, zero));
}

TEST_CASE("joint verification") {
    auto b = k3(ProblemKind::multicut, -5, 2, 1);
    auto o = enumerate_optima(b);
    CHECK(verify_joint(b, o, {{0, 1}, {1, 0}}));
    CHECK_FALSE(verify_joint(b, o, {{0, 1}, {1, 1}}));
    CHECK(verify_joint(b, o, {}));
}

TEST_CASE("improving mapping check") {
    auto a = k3(ProblemKind::multicut, 5, 2, -1);
    CHECK(verify_improving(a, edge_proof_mapping(a, 0, NodeSet(3, {0})), 0, 0));
    // the identity is not improving into x_f = beta
    CHECK_FALSE(verify_improving(a, [](const EdgeLabeling& x) { return x; }, 0, 0));
    // a map to an infeasible labeling is rejected
    CHECK_FALSE(verify_improving(a, [](const EdgeLabeling&) { return EdgeLabeling{0, 1, 0}; }, 0, 0));
}
