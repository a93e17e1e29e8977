#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "persist/mappings.hpp"
#include "persist/oracle.hpp"
#include "support.hpp"

using namespace persist;
using namespace testing_support;

namespace {

ProblemInstance k3(ProblemKind kind, double uv, double uw, double vw) {
    return ProblemInstance::from_edges(kind, 3, {{0, 1, uv}, {0, 2, uw}, {1, 2, vw}});
}

// random connected node set of a connected instance, grown from a random node
NodeSet random_connected_set(Rng& rng, const ProblemInstance& inst) {
    const std::size_t n = inst.node_count();
    NodeSet s(n);
    s.insert(static_cast<NodeId>(rng.below(n)));
    std::size_t target = 1 + rng.below(n);
    while (s.size() < target) {
        std::vector<NodeId> frontier;
        for (NodeId v : s.nodes())
            for (const auto& inc : inst.neighbors(v))
                if (!s.contains(inc.neighbor)) frontier.push_back(inc.neighbor);
        if (frontier.empty()) break;
        s.insert(frontier[rng.below(frontier.size())]);
    }
    return s;
}

}  // namespace

TEST_CASE("cut mapping on K3") {
    auto inst = k3(ProblemKind::multicut, 1, 1, 1);
    auto x = cut_mapping(inst, {0, 0, 0}, NodeSet(3, {0}));
    CHECK(x == EdgeLabeling{1, 1, 0});
    CHECK(cut_mapping(inst, x, NodeSet(3, {0})) == x);
}

TEST_CASE("join mapping examples") {
    auto inst = k3(ProblemKind::multicut, 1, 1, 1);
    CHECK(join_mapping(inst, {1, 1, 1}, NodeSet(3, {0, 1, 2})) == EdgeLabeling{0, 0, 0});
    // U inside one component leaves x alone
    CHECK(join_mapping(inst, {0, 1, 1}, NodeSet(3, {0, 1})) == EdgeLabeling{0, 1, 1});
}

TEST_CASE("join mapping merges exactly the components touching U") {
    // path 0-1-2-3-4-5-6 plus chords; clusters {0,1} {2,3} {4} {5,6}
    auto inst = ProblemInstance::from_edges(
        ProblemKind::multicut, 7,
        {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1}, {4, 5, 1}, {5, 6, 1}, {0, 6, 1}, {1, 4, 1}});
    std::vector<NodeId> labels{0, 0, 2, 2, 4, 5, 5};
    auto x = partition_labeling(inst, labels);
    auto y = join_mapping(inst, x, NodeSet(7, {1, 2}));
    auto comp = connected_components(inst, [&](EdgeId e) { return y[e] == 0; });
    CHECK(comp[0] == comp[3]);
    CHECK(comp[4] != comp[0]);
    CHECK(comp[5] == comp[6]);
    CHECK(comp[5] != comp[0]);
    CHECK(comp[4] != comp[5]);
}

TEST_CASE("cut and join mappings reject bad premises") {
    auto inst = ProblemInstance::from_edges(ProblemKind::multicut, 4, {{0, 1, 1}, {2, 3, 1}, {1, 2, 1}});
    CHECK_THROWS_AS(cut_mapping(inst, {0, 0, 0}, NodeSet(4, {0, 3})), ContractViolation);
    auto tri = k3(ProblemKind::multicut, 1, 1, 1);
    CHECK_THROWS_AS(join_mapping(tri, {1, 0, 0}, NodeSet(3, {0})), ContractViolation);
}

TEST_CASE("mappings keep labelings feasible") {
    Rng rng(3);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 2 + rng.below(9);
        auto inst = random_connected(rng, ProblemKind::multicut, n, 0.4, Weights::integer);
        auto x = random_feasible(rng, inst);
        NodeSet u = random_connected_set(rng, inst);
        auto c = cut_mapping(inst, x, u);
        auto j = join_mapping(inst, x, u);
        CHECK(is_feasible(inst, c));
        CHECK(is_feasible(inst, j));
        for (EdgeId e : delta(inst, u)) CHECK(c[e] == 1);
        auto mc = ProblemInstance::from_edges(ProblemKind::maxcut, n, inst.edges());
        auto xc = random_feasible(rng, mc);
        CHECK(is_feasible(mc, sym_diff_mapping(mc, xc, random_subset(rng, n))));
    }
}

TEST_CASE("symmetric difference of cuts is the cut of the symmetric difference") {
    Rng rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        auto inst = random_instance(rng, ProblemKind::maxcut, 8, 0.5, Weights::gaussian);
        NodeSet w = random_subset(rng, 8), u = random_subset(rng, 8);
        NodeSet wu(8);
        for (NodeId v = 0; v < 8; ++v)
            if (w.contains(v) != u.contains(v)) wu.insert(v);
        CHECK(sym_diff_mapping(inst, cut_labeling(inst, w), u) == cut_labeling(inst, wu));
        CHECK(sym_diff_mapping(inst, cut_labeling(inst, w), NodeSet(8)) == cut_labeling(inst, w));
        auto x = cut_labeling(inst, u);
        CHECK(sym_diff_mapping(inst, x, u) == EdgeLabeling(inst.edge_count(), 0));
    }
}

TEST_CASE("switching preserves objectives and is an involution") {
    Rng rng(9);
    for (int trial = 0; trial < 300; ++trial) {
        auto inst = random_instance(rng, ProblemKind::maxcut, 2 + rng.below(7), 0.6, Weights::mixed);
        auto y = cut_labeling(inst, random_subset(rng, inst.node_count()));
        auto [sw, rec] = switch_instance(inst, y);
        for (int k = 0; k < 5; ++k) {
            auto x = cut_labeling(inst, random_subset(rng, inst.node_count()));
            EdgeLabeling xy(x.size());
            for (std::size_t e = 0; e < x.size(); ++e) xy[e] = x[e] ^ y[e];
            CHECK(close(sw.objective(xy) + sw.objective_constant(),
                        inst.objective(x) + inst.objective_constant()));
        }
        auto [back, rec2] = switch_instance(sw, y);
        for (EdgeId e = 0; e < inst.edge_count(); ++e) CHECK(back.weight(e) == inst.weight(e));
        CHECK(close(back.objective_constant(), inst.objective_constant()));
    }
    auto zero = k3(ProblemKind::maxcut, -5, 2, 1);
    auto [same, rec] = switch_instance(zero, EdgeLabeling{0, 0, 0});
    CHECK(same.edges()[0].weight == -5);
    CHECK(rec.constant_delta == 0.0);
    CHECK_THROWS_AS(switch_instance(k3(ProblemKind::multicut, 1, 1, 1), {0, 0, 0}), UnsupportedKind);
}

TEST_CASE("switching K3 on the cut of v maps optima onto optima") {
    auto inst = k3(ProblemKind::maxcut, -5, 2, 1);
    auto y = cut_labeling(inst, NodeSet(3, {1}));
    auto [sw, rec] = switch_instance(inst, y);
    auto a = enumerate_optima(inst);
    auto b = enumerate_optima(sw);
    CHECK(close(a.value + inst.objective_constant(), b.value + sw.objective_constant()));
    REQUIRE(a.solutions.size() == b.solutions.size());
    for (const auto& x : a.solutions) {
        EdgeLabeling xy(x.size());
        for (std::size_t e = 0; e < x.size(); ++e) xy[e] = x[e] ^ y[e];
        CHECK(std::find(b.solutions.begin(), b.solutions.end(), xy) != b.solutions.end());
    }
}
