#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "persist/oracle.hpp"
#include "persist/pipeline.hpp"
#include "support.hpp"

using namespace persist;
using namespace testing_support;

namespace {

ProblemInstance two_cliques() {
    std::vector<Edge> edges;
    for (NodeId base : {0u, 4u})
        for (NodeId i = 0; i < 4; ++i)
            for (NodeId j = i + 1; j < 4; ++j) edges.push_back({base + i, base + j, 2.0});
    edges.push_back({3, 4, -1.0});
    edges.push_back({0, 7, -0.5});
    return ProblemInstance::from_edges(ProblemKind::multicut, 8, edges);
}

// every feasible labeling of the reduced instance lifts to one of the original with the same value
void check_lift(const ShrinkState& st) {
    const auto& orig = st.original();
    const auto& cur = st.current();
    for (const auto& y : enumerate_feasible(cur)) {
        auto x = st.lift(y);
        REQUIRE(is_feasible(orig, x));
        CHECK(close(orig.objective(x) + orig.objective_constant(), cur.objective(y) + cur.objective_constant()));
        for (const auto& c : st.certificates()) CHECK(x[c.edge] == c.beta);
    }
}

}  // namespace

TEST_CASE("stage names round trip") {
    for (Stage s : full_ladder()) CHECK(stage_from_string(to_string(s)) == s);
    CHECK_THROWS(stage_from_string("bogus"));
    CHECK(full_ladder().front() == Stage::gplus);
    CHECK(full_ladder().back() == Stage::icp_subgraph);
}

TEST_CASE("fixing edges by hand") {
    auto inst = ProblemInstance::from_edges(ProblemKind::multicut, 4,
                                            {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {2, 3, -1}});
    ShrinkState st(inst);
    CHECK(st.fix(0, 0));
    CHECK(st.fix(3, 1));
    st.commit();
    CHECK(st.current().node_count() == 3);
    CHECK(st.current().edge_count() == 1);  // 0-2 and 1-2 merge; 2-3 is gone
    CHECK(st.current().weight(0) == 2.0);
    CHECK(st.constant() == -1.0);
    CHECK(st.edge_status(0).kind == EdgeStatus::Kind::contracted);
    CHECK(st.edge_status(3).kind == EdgeStatus::Kind::deleted);
    CHECK(st.edge_status(1).kind == EdgeStatus::Kind::live);
    CHECK(st.node_map(0) == st.node_map(1));
    // contracting 1-2 now forces 0-2 to 0 as well; asking for 1 conflicts
    CHECK(st.fix(1, 0));
    CHECK_FALSE(st.fix(2, 1));
    CHECK_FALSE(st.fix(3, 0));
}

TEST_CASE("max-cut fixing to one switches a class") {
    auto inst = ProblemInstance::from_edges(ProblemKind::maxcut, 3, {{0, 1, -5}, {0, 2, 2}, {1, 2, 1}});
    ShrinkState st(inst);
    CHECK(st.fix(0, 1));
    st.commit();
    CHECK(st.current().node_count() == 2);
    CHECK(st.switch_log().size() == 1);
    check_lift(st);
    CHECK(st.to_original(0, 0) == 1);
    CHECK_FALSE(st.fix(0, 0));
}

TEST_CASE("greedy additive edge contraction") {
    auto inst = two_cliques();
    auto x = gaec_primal(inst);
    CHECK(is_feasible(inst, x));
    auto comp = connected_components(inst, [&](EdgeId e) { return x[e] == 0; });
    for (NodeId v = 0; v < 8; ++v) CHECK(comp[v] == (v < 4 ? 0u : 4u));
    CHECK(inst.objective(x) == -1.5);

    auto cut = ProblemInstance::from_edges(ProblemKind::maxcut, 3, {{0, 1, -5}, {0, 2, 2}, {1, 2, 1}});
    auto y = gaec_primal(cut);
    CHECK(is_feasible(cut, y));
    CHECK(cut.objective(y) == -4.0);
}

TEST_CASE("local search finds the optimum on small instances") {
    Rng rng(61);
    int hits = 0;
    for (int trial = 0; trial < 100; ++trial) {
        auto inst = random_instance(rng, ProblemKind::maxcut, 10, 0.5, Weights::gaussian);
        auto side = maxcut_local_search(inst);
        double v = inst.objective(cut_labeling(inst, side));
        double opt = enumerate_optima(inst).value;
        CHECK(v >= opt - 1e-9);
        hits += close(v, opt);
    }
    CHECK(hits >= 95);
}

TEST_CASE("candidate subgraphs are connected and induced") {
    Rng rng(62);
    for (int trial = 0; trial < 200; ++trial) {
        auto inst = random_connected(rng, any_kind(rng), 4 + rng.below(8), 0.4, any_weights(rng));
        auto primal = gaec_primal(inst);
        auto p = icp(inst);
        for (const auto& h : generate_candidates(inst, primal, p)) {
            CHECK(h.nodes.size() >= 2);
            CHECK(is_induced(inst, h));
            CHECK(is_connected_set(inst, NodeSet::from_nodes(inst.node_count(), h.nodes)));
        }
    }
}

TEST_CASE("end to end on two cliques") {
    auto inst = two_cliques();
    auto r = run(inst, PipelineConfig{});
    CHECK(r.report.final_nodes == 2);
    CHECK(r.report.final_edges == 0);
    CHECK(close(r.state.constant(), -1.5));
    CHECK(r.report.node_fraction() == doctest::Approx(2.0 / 8.0));
    check_lift(r.state);
}

TEST_CASE("shrinking preserves the optimum and lifts feasibly") {
    Rng rng(63);
    for (int trial = 0; trial < 150; ++trial) {
        auto kind = any_kind(rng);
        auto inst = random_instance(rng, kind, 3 + rng.below(6), 0.6, any_weights(rng));
        PipelineConfig cfg;
        cfg.exact_triangle_flow = rng.coin();
        auto r = run(inst, cfg);
        const auto& st = r.state;
        auto before = enumerate_optima(inst);
        auto after = enumerate_optima(st.current());
        CHECK(close(before.value + inst.objective_constant(), after.value + st.constant()));
        // an optimum of the reduced instance is an optimum of the original
        auto lifted = st.lift(after.solutions.front());
        CHECK(std::find(before.solutions.begin(), before.solutions.end(), lifted) != before.solutions.end());
        check_lift(st);
        CHECK(r.report.final_nodes == st.current().node_count());
        CHECK(r.report.final_edges <= inst.edge_count());
    }
}

TEST_CASE("a recorded run replays and tampering is detected") {
    Rng rng(64);
    int tampered = 0;
    for (int trial = 0; trial < 60; ++trial) {
        auto inst = random_connected(rng, any_kind(rng), 5 + rng.below(6), 0.5, any_weights(rng));
        PipelineConfig cfg;
        auto r = run(inst, cfg);
        ShrinkState fresh(inst);
        auto res = replay_steps(fresh, r.state.steps(), cfg, r.state.hints());
        CHECK(res.ok);
        CHECK(fresh.current().node_count() == r.state.current().node_count());
        CHECK(fresh.current().edge_count() == r.state.current().edge_count());
        CHECK(close(fresh.constant(), r.state.constant()));

        if (r.state.steps().empty()) continue;
        auto steps = r.state.steps();
        auto& victim = steps[rng.below(steps.size())];
        victim.edges.front().beta ^= 1;
        ShrinkState again(inst);
        CHECK_FALSE(replay_steps(again, steps, cfg).ok);
        ++tampered;
    }
    CHECK(tampered > 20);
}

TEST_CASE("ablation is monotone") {
    Rng rng(65);
    for (int trial = 0; trial < 30; ++trial) {
        auto inst = random_connected(rng, any_kind(rng), 6 + rng.below(20), 0.3, any_weights(rng));
        auto points = ablate(inst, PipelineConfig{});
        REQUIRE(points.size() == full_ladder().size() + 1);
        CHECK(points.front().nodes == inst.node_count());
        CHECK(points.front().stages.empty());
        for (std::size_t i = 1; i < points.size(); ++i) {
            CHECK(points[i].nodes <= points[i - 1].nodes);
            CHECK(points[i].edges <= points[i - 1].edges);
            CHECK(points[i].stages.size() == i);
        }
    }
}

TEST_CASE("threads do not change the result") {
    Rng rng(66);
    for (int trial = 0; trial < 10; ++trial) {
        auto inst = random_connected(rng, any_kind(rng), 30, 0.2, Weights::gaussian);
        PipelineConfig one, many;
        many.threads = 4;
        auto a = run(inst, one);
        auto b = run(inst, many);
        CHECK(a.state.current().node_count() == b.state.current().node_count());
        REQUIRE(a.state.steps().size() == b.state.steps().size());
        for (std::size_t i = 0; i < a.state.steps().size(); ++i) {
            CHECK(a.state.steps()[i].criterion == b.state.steps()[i].criterion);
            CHECK(a.state.steps()[i].edges.size() == b.state.steps()[i].edges.size());
        }
    }
}

TEST_CASE("single stages") {
    auto inst = two_cliques();
    PipelineConfig g;
    g.stages = {Stage::gplus};
    auto r = run(inst, g);
    // only the negative edges go
    CHECK(r.report.final_nodes == 8);
    CHECK(r.report.final_edges == 12);
    CHECK(r.report.criterion_counts[Criterion::gplus_decomp] == 2);

    auto cut = ProblemInstance::from_edges(ProblemKind::maxcut, 3, {{0, 1, -5}, {0, 2, 2}, {1, 2, 1}});
    g.stages = {Stage::gplus};
    CHECK(run(cut, g).report.final_nodes == 3);  // G+ does not apply to max-cut
}
