#include "persist/criteria.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <tuple>

#include "persist/flow.hpp"

namespace persist {

std::string to_string(Criterion c) {
    switch (c) {
        case Criterion::edge_e1: return "edge_e1";
        case Criterion::edge_e2: return "edge_e2";
        case Criterion::edge_e3: return "edge_e3";
        case Criterion::triangle: return "triangle";
        case Criterion::subgraph_mc: return "subgraph_mc";
        case Criterion::subgraph_maxcut: return "subgraph_maxcut";
        case Criterion::boundary_edge: return "boundary_edge";
        case Criterion::boundary_subgraph: return "boundary_subgraph";
        case Criterion::gplus_decomp: return "gplus_decomp";
        case Criterion::rcf: return "rcf";
    }
    return "?";
}

Criterion criterion_from_string(const std::string& s) {
    static const std::array all{Criterion::edge_e1,         Criterion::edge_e2,
                                Criterion::edge_e3,         Criterion::triangle,
                                Criterion::subgraph_mc,     Criterion::subgraph_maxcut,
                                Criterion::boundary_edge,   Criterion::boundary_subgraph,
                                Criterion::gplus_decomp,    Criterion::rcf};
    for (Criterion c : all)
        if (to_string(c) == s) return c;
    throw InputError("unknown criterion '" + s + "'");
}

void sort_certificates(std::vector<PersistencyCertificate>& certs) {
    std::stable_sort(certs.begin(), certs.end(), [](const auto& a, const auto& b) {
        return std::tie(a.edge, a.criterion) < std::tie(b.edge, b.criterion);
    });
}

namespace {

double positive_part(double w) { return w > 0.0 ? w : 0.0; }

// Sum of fn(e) over delta(U), walking the adjacency of U's nodes only.
template <class Fn>
double cut_sum(const ProblemInstance& inst, const std::vector<NodeId>& nodes, const NodeSet& set,
               Fn fn) {
    double total = 0.0;
    for (NodeId a : nodes)
        for (const auto& inc : inst.neighbors(a))
            if (!set.contains(inc.neighbor)) total += fn(inc.edge);
    return total;
}

struct NodeSums {
    std::vector<double> abs;  // sum of |theta| over incident edges
    std::vector<double> pos;  // sum of positive theta over incident edges
};

NodeSums node_sums(const ProblemInstance& inst) {
    NodeSums s{std::vector<double>(inst.node_count(), 0.0),
               std::vector<double>(inst.node_count(), 0.0)};
    for (const auto& e : inst.edges()) {
        s.abs[e.u] += std::abs(e.weight);
        s.abs[e.v] += std::abs(e.weight);
        s.pos[e.u] += positive_part(e.weight);
        s.pos[e.v] += positive_part(e.weight);
    }
    return s;
}

PersistencyCertificate make_cert(EdgeId e, std::uint8_t beta, Criterion c, Witness w) {
    PersistencyCertificate cert;
    cert.edge = e;
    cert.beta = beta;
    cert.criterion = c;
    cert.witness = std::move(w);
    return cert;
}

void require_usable_subgraph(const ProblemInstance& inst, const Subgraph& h) {
    if (h.nodes.empty()) throw ContractViolation("empty subgraph");
    if (!is_induced(inst, h)) throw ContractViolation("subgraph must be induced");
    if (!is_connected_set(inst, NodeSet::from_nodes(inst.node_count(), h.nodes)))
        throw ContractViolation("subgraph must be connected");
}

// Network over the nodes of h (local ids = positions in h.nodes) with capacity max(theta~, 0).
struct LocalNetwork {
    FlowNetwork net;
    std::vector<NodeId> local;  // global -> local, kNoNode outside
};

LocalNetwork subgraph_network(const ProblemInstance& inst, const std::vector<NodeId>& nodes,
                              const std::vector<EdgeId>& edges, const ReducedCosts& reduced,
                              std::size_t extra_nodes = 0) {
    LocalNetwork out{FlowNetwork(nodes.size() + extra_nodes),
                     std::vector<NodeId>(inst.node_count(), kNoNode)};
    for (NodeId i = 0; i < nodes.size(); ++i) out.local[nodes[i]] = i;
    for (EdgeId e : edges) {
        const Edge& ed = inst.edge(e);
        out.net.add_edge(out.local[ed.u], out.local[ed.v], positive_part(reduced[e]));
    }
    return out;
}

}  // namespace

// ---- edge criterion ----------------------------------------------------------------------

std::pair<Criterion, std::uint8_t> edge_criterion_kind(const ProblemInstance& inst, EdgeId f) {
    double w = inst.weight(f);
    if (inst.kind() == ProblemKind::maxcut) return {Criterion::edge_e3, w < 0.0 ? 1 : 0};
    return w >= 0.0 ? std::pair{Criterion::edge_e1, std::uint8_t{0}}
                    : std::pair{Criterion::edge_e2, std::uint8_t{1}};
}

bool check_edge_criterion(const ProblemInstance& inst, EdgeId f, const NodeSet& u) {
    if (f >= inst.edge_count() || u.universe() != inst.node_count()) return false;
    const Edge& ef = inst.edge(f);
    if (u.contains(ef.u) == u.contains(ef.v)) return false;
    auto kind = edge_criterion_kind(inst, f).first;
    if (inst.kind() == ProblemKind::multicut && !is_connected_set(inst, u)) return false;
    auto nodes = u.nodes();
    double lhs = std::abs(ef.weight);
    double rhs = 0.0;
    if (kind == Criterion::edge_e2) {
        rhs = cut_sum(inst, nodes, u, [&](EdgeId e) {
            return inst.weight(e) >= 0.0 ? inst.weight(e) : 0.0;
        });
    } else {
        rhs = cut_sum(inst, nodes, u,
                      [&](EdgeId e) { return e == f ? 0.0 : std::abs(inst.weight(e)); });
        if (kind == Criterion::edge_e1) lhs = ef.weight;
    }
    return lhs >= rhs;
}

std::vector<PersistencyCertificate> edge_criterion_simple(const ProblemInstance& inst) {
    std::vector<PersistencyCertificate> out;
    const auto sums = node_sums(inst);
    const std::size_t n = inst.node_count();
    for (EdgeId f = 0; f < inst.edge_count(); ++f) {
        const Edge& ef = inst.edge(f);
        auto [crit, beta] = edge_criterion_kind(inst, f);
        double a = std::abs(ef.weight);
        for (NodeId x : {ef.u, ef.v}) {
            double rhs = crit == Criterion::edge_e2 ? sums.pos[x] : sums.abs[x] - a;
            // screen with the running sums, confirm by direct summation
            if (a < rhs - 1e-9 * (1.0 + rhs)) continue;
            NodeSet side(n, {x});
            if (!check_edge_criterion(inst, f, side)) continue;
            out.push_back(make_cert(f, beta, crit, CutWitness{{x}}));
            break;
        }
    }
    return out;
}

std::vector<PersistencyCertificate> edge_criterion_all(const ProblemInstance& inst) {
    auto out = edge_criterion_simple(inst);
    std::vector<std::uint8_t> done(inst.edge_count(), 0);
    for (const auto& c : out) done[c.edge] = 1;

    bool need_abs = false, need_pos = false;
    for (EdgeId f = 0; f < inst.edge_count(); ++f) {
        if (done[f]) continue;
        (edge_criterion_kind(inst, f).first == Criterion::edge_e2 ? need_pos : need_abs) = true;
    }
    std::optional<GomoryHuTree> abs_tree, pos_tree;
    if (need_abs)
        abs_tree = gomory_hu(network_from(inst, [&](EdgeId e) { return std::abs(inst.weight(e)); }));
    if (need_pos)
        pos_tree = gomory_hu(network_from(inst, [&](EdgeId e) { return positive_part(inst.weight(e)); }));

    for (EdgeId f = 0; f < inst.edge_count(); ++f) {
        if (done[f]) continue;
        const Edge& ef = inst.edge(f);
        auto [crit, beta] = edge_criterion_kind(inst, f);
        const GomoryHuTree& tree = crit == Criterion::edge_e2 ? *pos_tree : *abs_tree;
        double cut = tree.min_cut_value(ef.u, ef.v);
        double a = std::abs(ef.weight);
        // f itself lies in every u-v cut of the |theta| network
        double lhs = crit == Criterion::edge_e2 ? a : 2.0 * a;
        if (lhs < cut - 1e-9 * (1.0 + cut)) continue;
        NodeSet side = component_within(inst, tree.min_cut_side(ef.u, ef.v), ef.u);
        if (!check_edge_criterion(inst, f, side)) continue;
        out.push_back(make_cert(f, beta, crit, CutWitness{side.nodes()}));
    }
    sort_certificates(out);
    return out;
}

// ---- triangle criterion ------------------------------------------------------------------

bool check_triangle_criterion(const ProblemInstance& inst, NodeId u, NodeId v, NodeId w,
                              const NodeSet& cut_u, const NodeSet& cut_w) {
    const std::size_t n = inst.node_count();
    if (u >= n || v >= n || w >= n || u == v || v == w || u == w) return false;
    if (cut_u.universe() != n || cut_w.universe() != n) return false;
    auto uw = inst.find_edge(u, w), uv = inst.find_edge(u, v), vw = inst.find_edge(v, w);
    if (!uw || !uv || !vw) return false;
    auto crosses = [](const NodeSet& s, NodeId a, NodeId b) { return s.contains(a) != s.contains(b); };
    if (!crosses(cut_u, u, v) || !crosses(cut_u, u, w)) return false;
    if (!crosses(cut_w, u, w) || !crosses(cut_w, v, w)) return false;
    const bool multicut = inst.kind() == ProblemKind::multicut;
    if (multicut && (!is_connected_set(inst, cut_u) || !is_connected_set(inst, cut_w))) return false;

    auto outer = [&](const NodeSet& s, EdgeId skip1, EdgeId skip2) {
        return cut_sum(inst, s.nodes(), s, [&](EdgeId e) {
            return e == skip1 || e == skip2 ? 0.0 : std::abs(inst.weight(e));
        });
    };
    double t_uw = inst.weight(*uw), t_uv = inst.weight(*uv), t_vw = inst.weight(*vw);
    if (t_uw + t_uv < outer(cut_u, *uw, *uv)) return false;
    if (t_uw + t_vw < outer(cut_w, *uw, *vw)) return false;
    if (multicut) {
        NodeSet tri(n, {u, v, w});
        double rhs = cut_sum(inst, {u, v, w}, tri,
                             [&](EdgeId e) { return positive_part(inst.weight(e)); });
        if (t_uw + t_uv + t_vw < rhs) return false;
    }
    return true;
}

namespace {

// Minimum |theta| cut separating `source` from both `sink_a` and `sink_b`, reduced to the
// connected component of the source.
NodeSet separating_cut(const ProblemInstance& inst, NodeId source, NodeId sink_a, NodeId sink_b) {
    const std::size_t n = inst.node_count();
    FlowNetwork net(n + 1);
    double total = 1.0;
    for (const auto& e : inst.edges()) {
        net.add_edge(e.u, e.v, std::abs(e.weight));
        total += std::abs(e.weight);
    }
    const NodeId sink = static_cast<NodeId>(n);
    net.add_arc(sink_a, sink, total);
    net.add_arc(sink_b, sink, total);
    MinCut cut = min_cut(net, source, sink);
    NodeSet side(n);
    for (NodeId x = 0; x < n; ++x)
        if (cut.source_side.contains(x)) side.insert(x);
    return component_within(inst, side, source);
}

}  // namespace

std::vector<PersistencyCertificate> triangle_criterion(const ProblemInstance& inst,
                                                       const Triangle& t, TriangleCuts mode) {
    const std::size_t n = inst.node_count();
    if (!inst.find_edge(t.a, t.b) || !inst.find_edge(t.a, t.c) || !inst.find_edge(t.b, t.c))
        throw ContractViolation("triangle_criterion: not a triangle");
    const bool multicut = inst.kind() == ProblemKind::multicut;
    std::vector<PersistencyCertificate> out;
    // (edge uw, u, v, w): every edge of the triangle plays the role of uw once
    const std::array<std::tuple<EdgeId, NodeId, NodeId, NodeId>, 3> roles{
        std::tuple{t.ab, t.a, t.c, t.b}, std::tuple{t.ac, t.a, t.b, t.c},
        std::tuple{t.bc, t.b, t.a, t.c}};
    for (auto [uw, u, v, w] : roles) {
        double t_uw = inst.weight(uw);
        double t_uv = inst.weight(*inst.find_edge(u, v));
        double t_vw = inst.weight(*inst.find_edge(v, w));
        if (t_uw + t_uv < 0.0 || t_uw + t_vw < 0.0) continue;  // outer sums are never negative
        if (multicut && t_uw + t_uv + t_vw < 0.0) continue;
        NodeSet cut_u(n), cut_w(n);
        if (mode == TriangleCuts::exact_flow) {
            cut_u = separating_cut(inst, u, v, w);
            cut_w = separating_cut(inst, w, u, v);
        } else {
            NodeSet single_u(n, {u}), pair_vw(n, {v, w});
            auto rest = [&](const NodeSet& s, EdgeId a, EdgeId b) {
                return cut_sum(inst, s.nodes(), s, [&](EdgeId e) {
                    return e == a || e == b ? 0.0 : std::abs(inst.weight(e));
                });
            };
            EdgeId uv = *inst.find_edge(u, v), vw = *inst.find_edge(v, w);
            cut_u = rest(single_u, uw, uv) <= rest(pair_vw, uw, uv) ? single_u : pair_vw;
            NodeSet single_w(n, {w}), pair_uv(n, {u, v});
            cut_w = rest(single_w, uw, vw) <= rest(pair_uv, uw, vw) ? single_w : pair_uv;
        }
        if (!check_triangle_criterion(inst, u, v, w, cut_u, cut_w)) continue;
        out.push_back(make_cert(uw, 0, Criterion::triangle,
                                TriangleWitness{u, v, w, cut_u.nodes(), cut_w.nodes()}));
    }
    return out;
}

std::vector<PersistencyCertificate> triangle_criterion_all(const ProblemInstance& inst,
                                                           TriangleCuts mode) {
    std::vector<PersistencyCertificate> out;
    std::vector<std::uint8_t> done(inst.edge_count(), 0);
    const auto sums = node_sums(inst);
    const bool multicut = inst.kind() == ProblemKind::multicut;
    for (const Triangle& t : enumerate_triangles(inst)) {
        if (done[t.ab] && done[t.ac] && done[t.bc]) continue;
        if (mode == TriangleCuts::simple) {
            // screen with node sums before building witnesses
            double ab = inst.weight(t.ab), ac = inst.weight(t.ac), bc = inst.weight(t.bc);
            auto fires = [&](NodeId u, NodeId v, NodeId w, double uw, double uv, double vw) {
                double au = std::abs(uw), av = std::abs(uv), aw = std::abs(vw);
                double rest_u = std::min(sums.abs[u] - au - av,
                                         sums.abs[v] + sums.abs[w] - 2.0 * aw - au - av);
                double rest_w = std::min(sums.abs[w] - au - aw,
                                         sums.abs[u] + sums.abs[v] - 2.0 * av - au - aw);
                double slack = 1e-9 * (1.0 + sums.abs[u] + sums.abs[v] + sums.abs[w]);
                if (uw + uv < rest_u - slack || uw + vw < rest_w - slack) return false;
                if (!multicut) return true;
                double outer = sums.pos[u] + sums.pos[v] + sums.pos[w] -
                               2.0 * (positive_part(uw) + positive_part(uv) + positive_part(vw));
                return uw + uv + vw >= outer - slack;
            };
            bool any = (!done[t.ab] && fires(t.a, t.c, t.b, ab, ac, bc)) ||
                       (!done[t.ac] && fires(t.a, t.b, t.c, ac, ab, bc)) ||
                       (!done[t.bc] && fires(t.b, t.a, t.c, bc, ab, ac));
            if (!any) continue;
        }
        for (auto& c : triangle_criterion(inst, t, mode)) {
            if (done[c.edge]) continue;
            done[c.edge] = 1;
            out.push_back(std::move(c));
        }
    }
    sort_certificates(out);
    return out;
}

// ---- subgraph criteria ---------------------------------------------------------------------

double negative_slack(const ProblemInstance& inst, const Subgraph& h, const ReducedCosts& reduced) {
    double s = 0.0;
    for (EdgeId e : h.edges)
        if (reduced[e] < 0.0) s += -reduced[e];
    (void)inst;
    return s;
}

double positive_boundary(const ProblemInstance& inst, const Subgraph& h) {
    NodeSet in = NodeSet::from_nodes(inst.node_count(), h.nodes);
    return cut_sum(inst, h.nodes, in, [&](EdgeId e) { return positive_part(inst.weight(e)); });
}

namespace {

SubgraphResult gh_subgraph_criterion(const ProblemInstance& inst, const Subgraph& h,
                                     const DualPacking& packing, bool closure) {
    require_usable_subgraph(inst, h);
    SubgraphResult res;
    if (inst.kind() != ProblemKind::multicut)
        throw UnsupportedKind("multicut subgraph criterion on a max-cut instance");
    if (!assumption1_check(inst, h, packing)) {
        res.skipped = "packing bound on the subgraph is below zero";
        return res;
    }
    const auto reduced = reduced_costs(inst, packing);
    const double slack = negative_slack(inst, h, reduced);
    const double rhs = positive_boundary(inst, h);
    Criterion tag = !closure ? Criterion::subgraph_mc
                    : h.nodes.size() == 2 ? Criterion::boundary_edge
                                          : Criterion::boundary_subgraph;
    auto emit = [&](EdgeId e, double lhs) {
        res.certificates.push_back(make_cert(e, 0, tag, SubgraphWitness{h.nodes, {}, lhs, rhs, 0.0}));
    };
    if (rhs == 0.0 && slack == 0.0) {
        for (EdgeId e : h.edges) emit(e, 0.0);
        return res;
    }

    NodeSet in = NodeSet::from_nodes(inst.node_count(), h.nodes);
    std::vector<NodeId> nodes = h.nodes;
    std::vector<EdgeId> boundary;
    if (closure) {
        for (NodeId a : h.nodes)
            for (const auto& inc : inst.neighbors(a))
                if (!in.contains(inc.neighbor) && inst.weight(inc.edge) > 0.0) {
                    boundary.push_back(inc.edge);
                    nodes.push_back(inc.neighbor);
                }
        std::sort(nodes.begin() + static_cast<std::ptrdiff_t>(h.nodes.size()), nodes.end());
        nodes.erase(std::unique(nodes.begin() + static_cast<std::ptrdiff_t>(h.nodes.size()), nodes.end()),
                    nodes.end());
    }
    auto local = subgraph_network(inst, nodes, h.edges, reduced);
    for (EdgeId e : boundary)
        local.net.add_edge(local.local[inst.edge(e).u], local.local[inst.edge(e).v], inst.weight(e));
    GomoryHuTree tree = gomory_hu(local.net);
    for (EdgeId e : h.edges) {
        const Edge& ed = inst.edge(e);
        double lhs = tree.min_cut_value(local.local[ed.u], local.local[ed.v]) - slack;
        if (lhs >= rhs) emit(e, lhs);
    }
    return res;
}

}  // namespace

SubgraphResult multicut_subgraph_criterion(const ProblemInstance& inst, const Subgraph& h,
                                           const DualPacking& packing) {
    return gh_subgraph_criterion(inst, h, packing, false);
}

SubgraphResult boundary_refined_criterion(const ProblemInstance& inst, const Subgraph& h,
                                          const DualPacking& packing) {
    return gh_subgraph_criterion(inst, h, packing, true);
}

std::optional<PersistencyCertificate> boundary_edge_criterion(const ProblemInstance& inst, EdgeId f) {
    if (inst.kind() != ProblemKind::multicut)
        throw UnsupportedKind("boundary criterion on a max-cut instance");
    const Edge& ef = inst.edge(f);
    if (ef.weight < 0.0) return std::nullopt;
    NodeSet pair(inst.node_count(), {ef.u, ef.v});
    double rhs = cut_sum(inst, {ef.u, ef.v}, pair,
                         [&](EdgeId e) { return positive_part(inst.weight(e)); });
    double shared = 0.0;
    for (const auto& inc : inst.neighbors(ef.u)) {
        if (inc.neighbor == ef.v || inst.weight(inc.edge) < 0.0) continue;
        auto other = inst.find_edge(ef.v, inc.neighbor);
        if (!other || inst.weight(*other) < 0.0) continue;
        shared += std::min(inst.weight(inc.edge), inst.weight(*other));
    }
    double lhs = ef.weight + shared;
    if (lhs < rhs) return std::nullopt;
    return make_cert(f, 0, Criterion::boundary_edge,
                     SubgraphWitness{{std::min(ef.u, ef.v), std::max(ef.u, ef.v)}, {}, lhs, rhs, 0.0});
}

namespace {

// g(alpha) = min over u-v cuts U of  cut_{theta~+}(U) + alpha b(U) + (1 - alpha) b(V_H \ U).
class Relaxation {
public:
    Relaxation(const ProblemInstance& inst, const Subgraph& h, const ReducedCosts& reduced, EdgeId uv)
        : solver_(FlowNetwork(0)) {
        NodeSet in = NodeSet::from_nodes(inst.node_count(), h.nodes);
        auto local = subgraph_network(inst, h.nodes, h.edges, reduced);
        const Edge& e = inst.edge(uv);
        if (!in.contains(e.u) || !in.contains(e.v)) throw ContractViolation("edge not in subgraph");
        s_ = local.local[e.u];
        t_ = local.local[e.v];
        b_.assign(h.nodes.size(), 0.0);
        for (NodeId i = 0; i < h.nodes.size(); ++i) {
            b_[i] = cut_sum(inst, {h.nodes[i]}, in, [&](EdgeId x) { return std::abs(inst.weight(x)); });
            outer_ += b_[i];
        }
        for (NodeId i = 0; i < h.nodes.size(); ++i) {
            if (i == s_ || i == t_ || b_[i] == 0.0) continue;
            to_sink_.push_back({i, local.net.add_arc(i, t_, 0.0)});
            from_source_.push_back({i, local.net.add_arc(s_, i, b_[i])});
        }
        direct_ = local.net.add_arc(s_, t_, b_[t_]);
        solver_ = MaxFlowSolver(std::move(local.net));
    }

    double outer() const { return outer_; }

    // (g(alpha), subgradient)
    std::pair<double, double> evaluate(double alpha) {
        for (auto [i, link] : to_sink_) solver_.set_capacity(link, alpha * b_[i], 0.0);
        for (auto [i, link] : from_source_) solver_.set_capacity(link, (1.0 - alpha) * b_[i], 0.0);
        solver_.set_capacity(direct_, alpha * b_[s_] + (1.0 - alpha) * b_[t_], 0.0);
        MinCut cut = solver_.solve(s_, t_);
        double inside = 0.0;
        for (NodeId i = 0; i < b_.size(); ++i)
            if (cut.source_side.contains(i)) inside += b_[i];
        return {cut.value, inside - (outer_ - inside)};
    }

private:
    MaxFlowSolver solver_;
    NodeId s_ = 0, t_ = 0;
    std::vector<double> b_;
    double outer_ = 0.0;
    std::vector<std::pair<NodeId, FlowNetwork::LinkId>> to_sink_, from_source_;
    FlowNetwork::LinkId direct_ = 0;
};

MaxcutRelaxation maximize(Relaxation& g, double target) {
    MaxcutRelaxation r;
    r.outer = g.outer();
    auto consider = [&](double alpha, double value) {
        ++r.evaluations;
        if (r.evaluations == 1 || value > r.best) {
            r.best = value;
            r.alpha = alpha;
        }
        return value >= target;
    };
    auto [g0, s0] = g.evaluate(0.0);
    if (consider(0.0, g0) || s0 <= 0.0) return r;
    auto [g1, s1] = g.evaluate(1.0);
    if (consider(1.0, g1) || s1 >= 0.0) return r;
    double lo = 0.0, hi = 1.0, glo = g0, slo = s0, ghi = g1, shi = s1;
    // concavity: g stays below both supporting lines, so their crossing bounds the maximum
    auto hopeless = [&] {
        double cross = (ghi - glo + slo * lo - shi * hi) / (slo - shi);
        return glo + slo * (cross - lo) < target;
    };
    for (int it = 0; it < 60 && hi - lo >= 1e-6; ++it) {
        if (std::isfinite(target) && hopeless()) return r;
        double mid = 0.5 * (lo + hi);
        auto [gm, sm] = g.evaluate(mid);
        if (consider(mid, gm)) return r;
        if (sm > 0.0) {
            lo = mid, glo = gm, slo = sm;
        } else if (sm < 0.0) {
            hi = mid, ghi = gm, shi = sm;
        } else {
            return r;
        }
    }
    // the maximum of a concave piecewise linear function near the kink where the
    // supporting lines at lo and hi meet
    if (slo > shi) {
        double cross = (ghi - glo + slo * lo - shi * hi) / (slo - shi);
        if (cross > lo && cross < hi) consider(cross, g.evaluate(cross).first);
    }
    consider(0.5 * (lo + hi), g.evaluate(0.5 * (lo + hi)).first);
    return r;
}

}  // namespace

double maxcut_relaxation_value(const ProblemInstance& inst, const Subgraph& h,
                               const ReducedCosts& reduced, EdgeId uv, double alpha) {
    Relaxation g(inst, h, reduced, uv);
    return g.evaluate(alpha).first;
}

MaxcutRelaxation maxcut_relaxation(const ProblemInstance& inst, const Subgraph& h,
                                   const ReducedCosts& reduced, EdgeId uv) {
    Relaxation g(inst, h, reduced, uv);
    auto r = maximize(g, std::numeric_limits<double>::infinity());
    r.slack = negative_slack(inst, h, reduced);
    return r;
}

std::optional<PersistencyCertificate> maxcut_subgraph_criterion(const ProblemInstance& inst,
                                                                const Subgraph& h,
                                                                const DualPacking& packing,
                                                                EdgeId uv) {
    require_usable_subgraph(inst, h);
    if (inst.kind() != ProblemKind::maxcut)
        throw UnsupportedKind("max-cut subgraph criterion on a multicut instance");
    if (!std::binary_search(h.edges.begin(), h.edges.end(), uv))
        throw ContractViolation("edge not in subgraph");
    if (!assumption1_check(inst, h, packing)) return std::nullopt;
    const auto reduced = reduced_costs(inst, packing);
    const double slack = negative_slack(inst, h, reduced);
    Relaxation g(inst, h, reduced, uv);
    const double target = g.outer() + slack;
    auto r = maximize(g, target);
    if (r.best < target) return std::nullopt;
    return make_cert(uv, 0, Criterion::subgraph_maxcut,
                     SubgraphWitness{h.nodes, {}, r.best - slack, r.outer, r.alpha});
}

SubgraphResult maxcut_subgraph_criterion_all(const ProblemInstance& inst, const Subgraph& h,
                                             const DualPacking& packing) {
    require_usable_subgraph(inst, h);
    if (inst.kind() != ProblemKind::maxcut)
        throw UnsupportedKind("max-cut subgraph criterion on a multicut instance");
    SubgraphResult res;
    if (!assumption1_check(inst, h, packing)) {
        res.skipped = "packing bound on the subgraph is below zero";
        return res;
    }
    const auto reduced = reduced_costs(inst, packing);
    const double slack = negative_slack(inst, h, reduced);
    NodeSet in = NodeSet::from_nodes(inst.node_count(), h.nodes);
    std::vector<double> b(inst.node_count(), 0.0);
    double outer = 0.0;
    for (NodeId a : h.nodes) {
        b[a] = cut_sum(inst, {a}, in, [&](EdgeId x) { return std::abs(inst.weight(x)); });
        outer += b[a];
    }
    const double target = outer + slack;
    auto emit = [&](EdgeId e, double lhs, double alpha) {
        res.certificates.push_back(make_cert(e, 0, Criterion::subgraph_maxcut,
                                             SubgraphWitness{h.nodes, {}, lhs, outer, alpha}));
    };
    if (target == 0.0) {
        for (EdgeId e : h.edges) emit(e, 0.0, 0.0);
        return res;
    }
    auto local = subgraph_network(inst, h.nodes, h.edges, reduced);
    GomoryHuTree tree = gomory_hu(local.net);
    for (EdgeId e : h.edges) {
        const Edge& ed = inst.edge(e);
        NodeId lu = local.local[ed.u], lv = local.local[ed.v];
        double cut = tree.min_cut_value(lu, lv);
        if (cut >= target) {  // g(alpha) >= plain min cut for every alpha
            emit(e, cut - slack, 0.0);
            continue;
        }
        // g is bounded by the line of the tree's cut, whose maximum is at alpha in {0, 1}
        NodeSet side = tree.min_cut_side(lu, lv);
        double inside = 0.0;
        for (NodeId i = 0; i < h.nodes.size(); ++i)
            if (side.contains(i)) inside += b[h.nodes[i]];
        if (cut + std::max(inside, outer - inside) < target) continue;
        Relaxation g(inst, h, reduced, e);
        auto r = maximize(g, target);
        if (r.best >= target) emit(e, r.best - slack, r.alpha);
    }
    return res;
}

// ---- G+ decomposition and reduced cost fixing ----------------------------------------------

GplusResult gplus_decomposition(const ProblemInstance& inst) {
    if (inst.kind() != ProblemKind::multicut)
        throw UnsupportedKind("G+ decomposition is defined for multicut instances");
    GplusResult res;
    res.labels = connected_components(inst, [&](EdgeId e) { return inst.weight(e) >= 0.0; });
    for (EdgeId e = 0; e < inst.edge_count(); ++e) {
        const Edge& ed = inst.edge(e);
        NodeId a = res.labels[ed.u], b = res.labels[ed.v];
        if (a != b) res.certificates.push_back(make_cert(e, 1, Criterion::gplus_decomp,
                                                         ComponentWitness{{a, b}}));
    }
    return res;
}

std::vector<PersistencyCertificate> reduced_cost_fixing(const ProblemInstance& inst,
                                                        const EdgeLabeling& primal,
                                                        const DualPacking& packing) {
    if (!is_feasible(inst, primal)) throw ContractViolation("reduced cost fixing: infeasible primal");
    validate_packing(inst, packing);
    const auto reduced = reduced_costs(inst, packing);
    double gamma = inst.objective(primal) - packing.dual_bound;
    double scale = 1.0;
    for (const auto& e : inst.edges()) scale += std::abs(e.weight);
    if (gamma < -1e-9 * scale) throw ContractViolation("reduced cost fixing: negative duality gap");
    gamma = std::max(gamma, 0.0);
    std::vector<PersistencyCertificate> out;
    for (EdgeId f = 0; f < inst.edge_count(); ++f) {
        if (inst.weight(f) <= 0.0) continue;
        if (reduced[f] > gamma + kCriterionEps)
            out.push_back(make_cert(f, 0, Criterion::rcf, GapWitness{gamma, reduced[f], {}}));
    }
    return out;
}

}  // namespace persist
