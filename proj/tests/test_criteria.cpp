#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "persist/criteria.hpp"
#include "persist/mappings.hpp"
#include "persist/oracle.hpp"
#include "support.hpp"

using namespace persist;
using namespace testing_support;

namespace {

ProblemInstance k3(ProblemKind kind, double uv, double uw, double vw) {
    return ProblemInstance::from_edges(kind, 3, {{0, 1, uv}, {0, 2, uw}, {1, 2, vw}});
}

const PersistencyCertificate* find_cert(const std::vector<PersistencyCertificate>& certs, EdgeId e) {
    for (const auto& c : certs)
        if (c.edge == e) return &c;
    return nullptr;
}

std::set<EdgeId> edge_set(const std::vector<PersistencyCertificate>& certs) {
    std::set<EdgeId> s;
    for (const auto& c : certs) s.insert(c.edge);
    return s;
}

// a connected node set grown from a random start
std::vector<NodeId> grow(Rng& rng, const ProblemInstance& inst, std::size_t target) {
    NodeSet s(inst.node_count());
    s.insert(static_cast<NodeId>(rng.below(inst.node_count())));
    while (s.size() < target) {
        std::vector<NodeId> frontier;
        for (NodeId v : s.nodes())
            for (const auto& inc : inst.neighbors(v))
                if (!s.contains(inc.neighbor)) frontier.push_back(inc.neighbor);
        if (frontier.empty()) break;
        s.insert(frontier[rng.below(frontier.size())]);
    }
    return s.nodes();
}

}  // namespace

TEST_CASE("edge criterion examples") {
    auto a = k3(ProblemKind::multicut, 5, 2, -1);
    auto ca = edge_criterion_all(a);
    auto* c = find_cert(ca, 0);
    REQUIRE(c);
    CHECK(c->beta == 0);
    CHECK(c->criterion == Criterion::edge_e1);
    CHECK(verify_certificate(a, *c));
    CHECK(check_edge_criterion(a, 0, NodeSet(3, {0})));

    auto b = k3(ProblemKind::multicut, -5, 2, 1);
    auto cb = edge_criterion_all(b);
    c = find_cert(cb, 0);
    REQUIRE(c);
    CHECK(c->beta == 1);
    CHECK(c->criterion == Criterion::edge_e2);
    CHECK(enumerate_optima(b).value == -4.0);
    CHECK(verify_certificate(b, *c));

    auto m = k3(ProblemKind::maxcut, -5, 2, 1);
    auto cm = edge_criterion_all(m);
    c = find_cert(cm, 0);
    REQUIRE(c);
    CHECK(c->beta == 1);
    CHECK(c->criterion == Criterion::edge_e3);
    CHECK(enumerate_optima(m).value == -4.0);
    CHECK(verify_certificate(m, *c));
}

TEST_CASE("edge criterion replay rejects bad witnesses") {
    auto inst = k3(ProblemKind::multicut, 1, 5, 5);
    // f not in delta(U)
    CHECK_FALSE(check_edge_criterion(inst, 0, NodeSet(3, {0, 1})));
    // inequality fails
    CHECK_FALSE(check_edge_criterion(inst, 0, NodeSet(3, {0})));
    auto split = ProblemInstance::from_edges(ProblemKind::multicut, 4, {{0, 1, 5}, {2, 3, 1}});
    // disconnected witness for multicut
    CHECK_FALSE(check_edge_criterion(split, 0, NodeSet(4, {0, 2})));
    CHECK(check_edge_criterion(split, 0, NodeSet(4, {0})));
}

TEST_CASE("Gomory-Hu pass finds cuts the single node pass misses") {
    // f = 0-1 with heavy edges around both ends but a light separating cut
    auto inst = ProblemInstance::from_edges(ProblemKind::multicut, 6,
                                            {{0, 1, 3}, {0, 2, 4}, {2, 3, 0.5}, {1, 4, 4}, {4, 5, 0.5}, {0, 5, -4}});
    auto simple = edge_set(edge_criterion_simple(inst));
    auto all = edge_criterion_all(inst);
    CHECK(simple.count(0) == 0);
    REQUIRE(find_cert(all, 0));
    for (const auto& c : all) {
        const auto& w = std::get<CutWitness>(c.witness);
        CHECK(check_edge_criterion(inst, c.edge, NodeSet::from_nodes(6, w.side)));
        CHECK(verify_certificate(inst, c));
    }
}

TEST_CASE("isolated triangle with nonnegative sums") {
    for (auto kind : {ProblemKind::multicut, ProblemKind::maxcut}) {
        auto inst = k3(kind, 1, 2, -1);
        auto tri = enumerate_triangles(inst).at(0);
        auto certs = triangle_criterion(inst, tri);
        // uw = 0-2 has theta_uw + theta_uv >= 0, theta_uw + theta_vw >= 0 and positive total
        REQUIRE(find_cert(certs, 1));
        for (const auto& c : certs) {
            CHECK(c.beta == 0);
            CHECK(verify_certificate(inst, c));
            const auto& w = std::get<TriangleWitness>(c.witness);
            CHECK(check_triangle_criterion(inst, w.u, w.v, w.w, NodeSet::from_nodes(3, w.cut_u),
                                           NodeSet::from_nodes(3, w.cut_w)));
        }
    }
}

TEST_CASE("a heavy pendant edge defeats the default cuts") {
    auto inst = ProblemInstance::from_edges(ProblemKind::multicut, 4,
                                            {{0, 1, 0.5}, {0, 2, 0.5}, {1, 2, 0.5}, {0, 3, 10}, {1, 3, 10}, {2, 3, 10}});
    for (const auto& t : enumerate_triangles(inst))
        if (t.c == 2) CHECK(triangle_criterion(inst, t).empty());
}

TEST_CASE("triangle certificates agree with the oracle") {
    Rng rng(41);
    int emitted = 0;
    for (int trial = 0; trial < 400; ++trial) {
        auto inst = random_instance(rng, any_kind(rng), 6, 0.7, any_weights(rng));
        auto optima = enumerate_optima(inst);
        for (auto mode : {TriangleCuts::simple, TriangleCuts::exact_flow})
            for (const auto& c : triangle_criterion_all(inst, mode)) {
                ++emitted;
                CHECK(verify_certificate(inst, optima, c));
            }
    }
    CHECK(emitted > 50);
}

TEST_CASE("multicut subgraph criterion examples") {
    // positive 4-cycle with one positive edge leaving it
    auto inst = ProblemInstance::from_edges(ProblemKind::multicut, 5,
                                            {{0, 1, 3}, {1, 2, 3}, {2, 3, 3}, {0, 3, 3}, {3, 4, 2}});
    auto h = induced_subgraph(inst, {0, 1, 2, 3});
    auto res = multicut_subgraph_criterion(inst, h, icp(inst, h));
    CHECK(res.skipped.empty());
    CHECK(res.certificates.size() == 4);
    for (const auto& c : res.certificates) CHECK(verify_certificate(inst, c));
    CHECK(positive_boundary(inst, h) == 2.0);

    // isolated positive H: every edge certified
    auto pos = k3(ProblemKind::multicut, 1, 2, 3);
    auto all = induced_subgraph(pos, {0, 1, 2});
    CHECK(multicut_subgraph_criterion(pos, all, icp(pos, all)).certificates.size() == 3);

    // a subgraph whose packing does not reach zero is skipped
    auto bad = k3(ProblemKind::multicut, -2, 1, 1);
    auto hb = induced_subgraph(bad, {0, 1, 2});
    auto rb = multicut_subgraph_criterion(bad, hb, icp(bad, hb));
    CHECK(rb.certificates.empty());
    CHECK_FALSE(rb.skipped.empty());
}

TEST_CASE("the positive closure certifies an edge the plain criteria miss") {
    auto inst = k3(ProblemKind::multicut, 3, 2, 2);
    auto h = induced_subgraph(inst, {0, 1});
    REQUIRE(h.edges == std::vector<EdgeId>{0});
    CHECK(multicut_subgraph_criterion(inst, h, icp(inst, h)).certificates.empty());
    auto refined = boundary_refined_criterion(inst, h, icp(inst, h));
    REQUIRE(find_cert(refined.certificates, 0));
    auto single = boundary_edge_criterion(inst, 0);
    REQUIRE(single);
    CHECK(single->beta == 0);
    CHECK(verify_certificate(inst, *single));
    auto optima = enumerate_optima(inst);
    REQUIRE(optima.solutions.size() == 1);
    CHECK(optima.solutions[0] == EdgeLabeling{0, 0, 0});
}

TEST_CASE("the positive closure is never weaker") {
    Rng rng(43);
    for (int trial = 0; trial < 300; ++trial) {
        auto inst = random_connected(rng, ProblemKind::multicut, 4 + rng.below(5), 0.5, any_weights(rng));
        auto h = induced_subgraph(inst, grow(rng, inst, 2 + rng.below(inst.node_count() - 1)));
        auto p = icp(inst, h);
        auto plain = edge_set(multicut_subgraph_criterion(inst, h, p).certificates);
        auto refined = edge_set(boundary_refined_criterion(inst, h, p).certificates);
        for (EdgeId e : plain) CHECK(refined.count(e) == 1);
        if (h.nodes.size() == 2 && !h.edges.empty()) {
            bool fast = boundary_edge_criterion(inst, h.edges[0]).has_value();
            if (plain.count(h.edges[0])) CHECK(fast);
        }
    }
}

TEST_CASE("max-cut relaxation on an isolated subgraph is the plain min cut") {
    auto inst = k3(ProblemKind::maxcut, 2, 1, 1);
    auto h = induced_subgraph(inst, {0, 1, 2});
    auto p = icp(inst, h);
    auto r = maxcut_relaxation(inst, h, reduced_costs(inst, p), 0);
    CHECK(r.outer == 0.0);
    CHECK(r.best == doctest::Approx(3.0));
    auto cert = maxcut_subgraph_criterion(inst, h, p, 0);
    REQUIRE(cert);
    CHECK(verify_certificate(inst, *cert));
}

TEST_CASE("bisection finds the maximum of the concave relaxation") {
    Rng rng(44);
    int tested = 0;
    for (int trial = 0; trial < 400 && tested < 150; ++trial) {
        auto inst = random_connected(rng, ProblemKind::maxcut, 4 + rng.below(5), 0.5, any_weights(rng));
        auto h = induced_subgraph(inst, grow(rng, inst, 2 + rng.below(4)));
        if (h.edges.empty()) continue;
        auto p = icp(inst, h);
        auto reduced = reduced_costs(inst, p);
        EdgeId uv = h.edges[rng.below(h.edges.size())];
        auto r = maxcut_relaxation(inst, h, reduced, uv);
        ++tested;
        for (int k = 0; k <= 100; ++k) {
            double g = maxcut_relaxation_value(inst, h, reduced, uv, k / 100.0);
            CHECK(g <= r.best + 1e-6 * (1 + std::abs(g)));
        }
    }
    CHECK(tested == 150);
}

TEST_CASE("max-cut subgraph criterion on one edge is the edge criterion") {
    Rng rng(45);
    for (int trial = 0; trial < 300; ++trial) {
        auto inst = random_instance(rng, ProblemKind::maxcut, 6, 0.6, any_weights(rng));
        auto simple = edge_set(edge_criterion_simple(inst));
        for (EdgeId e = 0; e < inst.edge_count(); ++e) {
            // the subgraph criterion only fixes x = 0, so negative edges are switched first
            auto sw = inst;
            if (inst.weight(e) < 0.0) sw = switch_instance(inst, cut_labeling(inst, NodeSet(6, {inst.edge(e).u}))).first;
            auto h = induced_subgraph(sw, {inst.edge(e).u, inst.edge(e).v});
            bool sub = maxcut_subgraph_criterion(sw, h, icp(sw, h), e).has_value();
            CHECK(sub == (simple.count(e) == 1));
        }
        // on a triangle the subgraph criterion never certifies more than the triangle criterion
        for (const auto& t : enumerate_triangles(inst)) {
            auto tc = edge_set(triangle_criterion(inst, t));
            auto h = induced_subgraph(inst, {t.a, t.b, t.c});
            auto p = icp(inst, h);
            for (EdgeId e : {t.ab, t.ac, t.bc})
                if (maxcut_subgraph_criterion(inst, h, p, e)) CHECK(tc.count(e) == 1);
        }
    }
}

TEST_CASE("max-cut subgraph certificates agree with the oracle and the exact min max") {
    Rng rng(46);
    int emitted = 0;
    for (int trial = 0; trial < 400; ++trial) {
        auto inst = random_connected(rng, ProblemKind::maxcut, 7, 0.5, any_weights(rng));
        auto h = induced_subgraph(inst, grow(rng, inst, 4));
        auto p = icp(inst, h);
        if (!assumption1_check(inst, h, p)) continue;
        auto reduced = reduced_costs(inst, p);
        auto optima = enumerate_optima(inst);
        NodeSet in = NodeSet::from_nodes(7, h.nodes);
        for (EdgeId uv : h.edges) {
            auto r = maxcut_relaxation(inst, h, reduced, uv);
            // exact: min over U in H separating u and v of
            // theta(delta_H(U)) + max(|theta|(delta(U, outside)), |theta|(delta(H \ U, outside)))
            double exact = std::numeric_limits<double>::infinity();
            const Edge& f = inst.edge(uv);
            const std::size_t k = h.nodes.size();
            for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
                NodeSet u(7);
                for (std::size_t i = 0; i < k; ++i)
                    if (mask >> i & 1) u.insert(h.nodes[i]);
                if (!u.contains(f.u) || u.contains(f.v)) continue;
                double inner = 0.0, out_u = 0.0, out_rest = 0.0;
                for (const auto& e : inst.edges()) {
                    bool a = in.contains(e.u), b = in.contains(e.v);
                    if (a && b) {
                        if (u.contains(e.u) != u.contains(e.v)) inner += e.weight;
                    } else if (a != b) {
                        NodeId inside = a ? e.u : e.v;
                        (u.contains(inside) ? out_u : out_rest) += std::abs(e.weight);
                    }
                }
                exact = std::min(exact, inner + std::max(out_u, out_rest));
            }
            CHECK(r.best - r.slack <= exact + 1e-6 * (1 + std::abs(exact)));
            if (auto c = maxcut_subgraph_criterion(inst, h, p, uv)) {
                ++emitted;
                CHECK(verify_certificate(inst, optima, *c));
            }
        }
    }
    CHECK(emitted > 20);
}

TEST_CASE("G+ decomposition") {
    auto pos = k3(ProblemKind::multicut, 1, 2, 3);
    auto r = gplus_decomposition(pos);
    CHECK(r.certificates.empty());
    CHECK(r.labels == std::vector<NodeId>{0, 0, 0});

    // two positive triangles joined by one negative edge
    auto two = ProblemInstance::from_edges(ProblemKind::multicut, 6,
                                           {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {3, 4, 1}, {4, 5, 1}, {3, 5, 1}, {2, 3, -1}});
    auto r2 = gplus_decomposition(two);
    REQUIRE(r2.certificates.size() == 1);
    CHECK(r2.certificates[0].edge == *two.find_edge(2, 3));
    CHECK(r2.certificates[0].beta == 1);
    CHECK(verify_certificate(two, r2.certificates[0]));

    auto neg = k3(ProblemKind::multicut, -1, -2, -3);
    auto r3 = gplus_decomposition(neg);
    CHECK(r3.certificates.size() == 3);
    CHECK(r3.labels == std::vector<NodeId>{0, 1, 2});
    for (const auto& c : r3.certificates) CHECK(verify_certificate(neg, c));

    CHECK_THROWS_AS(gplus_decomposition(k3(ProblemKind::maxcut, 1, 1, 1)), UnsupportedKind);
}

TEST_CASE("reduced cost fixing") {
    // K3(-2, 1, 1) plus an isolated positive edge
    auto inst = ProblemInstance::from_edges(ProblemKind::multicut, 5,
                                            {{0, 1, -2}, {0, 2, 1}, {1, 2, 1}, {3, 4, 3}});
    auto p = icp(inst);
    CHECK(p.dual_bound == -1.0);
    auto optimum = partition_labeling(inst, std::vector<NodeId>{0, 1, 0, 3, 3});
    CHECK(inst.objective(optimum) == -1.0);
    auto certs = reduced_cost_fixing(inst, optimum, p);
    REQUIRE(certs.size() == 1);
    CHECK(certs[0].edge == 3);
    CHECK(certs[0].beta == 0);
    CHECK(certs[0].criterion == Criterion::rcf);
    CHECK(verify_certificate(inst, certs[0]));

    // gap zero on an all-positive instance fixes everything
    auto pos = k3(ProblemKind::multicut, 1, 2, 3);
    CHECK(reduced_cost_fixing(pos, {0, 0, 0}, icp(pos)).size() == 3);
    // a bad primal leaves a gap larger than every reduced cost
    CHECK(reduced_cost_fixing(pos, {1, 1, 1}, icp(pos)).empty());
    CHECK_THROWS(reduced_cost_fixing(pos, {1, 0, 0}, icp(pos)));
}

TEST_CASE("every criterion is sound on small random instances") {
    Rng rng(47);
    for (int trial = 0; trial < 300; ++trial) {
        auto kind = any_kind(rng);
        auto inst = random_instance(rng, kind, 3 + rng.below(5), 0.6, any_weights(rng));
        auto optima = enumerate_optima(inst);
        std::vector<PersistencyCertificate> certs = edge_criterion_all(inst);
        auto tri = triangle_criterion_all(inst);
        certs.insert(certs.end(), tri.begin(), tri.end());
        if (kind == ProblemKind::multicut) {
            auto g = gplus_decomposition(inst);
            certs.insert(certs.end(), g.certificates.begin(), g.certificates.end());
            for (EdgeId e = 0; e < inst.edge_count(); ++e)
                if (auto c = boundary_edge_criterion(inst, e)) certs.push_back(*c);
            auto rcf = reduced_cost_fixing(inst, optima.solutions.front(), icp(inst));
            certs.insert(certs.end(), rcf.begin(), rcf.end());
        }
        for (const auto& c : certs) CHECK(verify_certificate(inst, optima, c));
    }
}

TEST_CASE("criterion names round trip") {
    for (int i = 0; i <= static_cast<int>(Criterion::rcf); ++i) {
        auto c = static_cast<Criterion>(i);
        CHECK(criterion_from_string(to_string(c)) == c);
    }
    CHECK_THROWS(criterion_from_string("nope"));
}
