#include "persist/packing.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace persist {

namespace {

constexpr double kSlackEps = 1e-12;

class CyclePacker {
public:
    explicit CyclePacker(const ProblemInstance& inst)
        : inst_(inst), slack_(inst.edge_count()), stamp_(inst.node_count(), 0),
          pred_(inst.node_count(), kNoEdge), dist_(inst.node_count(), 0),
          stamp_b_(inst.node_count(), 0), pred_b_(inst.node_count(), kNoEdge),
          dist_b_(inst.node_count(), 0) {
        for (EdgeId e = 0; e < inst.edge_count(); ++e) slack_[e] = std::abs(inst.weight(e));
    }

    DualPacking run() {
        DualPacking out;
        out.load.assign(inst_.edge_count(), 0.0);
        using Key = std::pair<std::size_t, EdgeId>;  // (cycle length, negative edge)
        std::priority_queue<Key, std::vector<Key>, std::greater<>> queue;
        for (EdgeId f = 0; f < inst_.edge_count(); ++f) {
            if (inst_.weight(f) >= 0.0) continue;
            if (auto path = shortest_path(f)) queue.push({path->size() + 1, f});
        }
        while (!queue.empty()) {
            auto [length, f] = queue.top();
            queue.pop();
            if (slack_[f] <= kSlackEps) continue;
            auto path = shortest_path(f);
            if (!path) continue;
            if (path->size() + 1 > length) {
                queue.push({path->size() + 1, f});
                continue;
            }
            double lambda = slack_[f];
            for (EdgeId e : *path) lambda = std::min(lambda, slack_[e]);
            PackedCycle cycle;
            cycle.lambda = lambda;
            cycle.edges.push_back(f);
            cycle.edges.insert(cycle.edges.end(), path->begin(), path->end());
            for (EdgeId e : cycle.edges) {
                slack_[e] = slack_[e] - lambda <= kSlackEps ? 0.0 : slack_[e] - lambda;
                out.load[e] += lambda;
            }
            out.cycles.push_back(std::move(cycle));
            queue.push({length, f});
        }
        out.dual_bound = 0.0;
        for (const auto& c : out.cycles) out.dual_bound += c.lambda;
        for (EdgeId e = 0; e < inst_.edge_count(); ++e)
            if (inst_.weight(e) < 0.0) out.dual_bound += inst_.weight(e);
        return out;
    }

private:
    bool usable(EdgeId e) const { return inst_.weight(e) > 0.0 && slack_[e] > kSlackEps; }

    // Shortest u-v path over positive edges with slack, f = uv excluded. Edges from u to v.
    // Bidirectional BFS, one full level of the smaller frontier at a time.
    std::optional<std::vector<EdgeId>> shortest_path(EdgeId f) {
        const Edge& ef = inst_.edge(f);
        // Slack only decreases, so components of the usable graph only split: different labels
        // stay a valid proof that no path exists.
        if (component_.empty()) relabel();
        if (component_[ef.u] != component_[ef.v]) return std::nullopt;
        auto path = search(f);
        if (!path) relabel();
        return path;
    }

    void relabel() {
        component_ = connected_components(inst_, [&](EdgeId e) { return usable(e); });
    }

    std::optional<std::vector<EdgeId>> search(EdgeId f) {
        const Edge& ef = inst_.edge(f);
        ++round_;
        Side sides[2] = {{&stamp_, &pred_, &dist_, {ef.u}}, {&stamp_b_, &pred_b_, &dist_b_, {ef.v}}};
        for (int k = 0; k < 2; ++k) {
            NodeId root = sides[k].frontier.front();
            (*sides[k].stamp)[root] = round_;
            (*sides[k].pred)[root] = kNoEdge;
            (*sides[k].dist)[root] = 0;
        }
        while (!sides[0].frontier.empty() && !sides[1].frontier.empty()) {
            int k = sides[0].frontier.size() <= sides[1].frontier.size() ? 0 : 1;
            Side& me = sides[k];
            Side& other = sides[1 - k];
            std::vector<NodeId> next;
            std::size_t best = static_cast<std::size_t>(-1);
            NodeId meet = kNoNode;
            EdgeId bridge = kNoEdge;
            NodeId from = kNoNode;
            for (NodeId x : me.frontier)
                for (const auto& inc : inst_.neighbors(x)) {
                    if (inc.edge == f || !usable(inc.edge)) continue;
                    NodeId y = inc.neighbor;
                    if ((*other.stamp)[y] == round_) {
                        std::size_t len = (*me.dist)[x] + 1 + (*other.dist)[y];
                        if (len < best) {
                            best = len;
                            meet = y;
                            bridge = inc.edge;
                            from = x;
                        }
                        continue;
                    }
                    if ((*me.stamp)[y] == round_) continue;
                    (*me.stamp)[y] = round_;
                    (*me.pred)[y] = inc.edge;
                    (*me.dist)[y] = (*me.dist)[x] + 1;
                    next.push_back(y);
                }
            if (meet != kNoNode) {
                // walk both halves back to their roots
                std::vector<EdgeId> mine = walk(me, from), theirs = walk(other, meet);
                std::vector<EdgeId> path;
                if (k == 0) {
                    path.assign(mine.rbegin(), mine.rend());
                    path.push_back(bridge);
                    path.insert(path.end(), theirs.begin(), theirs.end());
                } else {
                    path.assign(theirs.rbegin(), theirs.rend());
                    path.push_back(bridge);
                    path.insert(path.end(), mine.begin(), mine.end());
                }
                return path;
            }
            me.frontier = std::move(next);
        }
        return std::nullopt;
    }

    struct Side {
        std::vector<std::uint64_t>* stamp;
        std::vector<EdgeId>* pred;
        std::vector<std::uint32_t>* dist;
        std::vector<NodeId> frontier;
    };

    // Edges from x back to the root of its side, starting at x.
    std::vector<EdgeId> walk(const Side& side, NodeId x) const {
        std::vector<EdgeId> out;
        for (EdgeId e = (*side.pred)[x]; e != kNoEdge; e = (*side.pred)[x]) {
            out.push_back(e);
            const Edge& ed = inst_.edge(e);
            x = ed.u == x ? ed.v : ed.u;
        }
        return out;
    }

    const ProblemInstance& inst_;
    std::vector<double> slack_;
    std::vector<std::uint64_t> stamp_;
    std::vector<EdgeId> pred_;
    std::vector<std::uint32_t> dist_;
    std::vector<NodeId> component_;
    std::vector<std::uint64_t> stamp_b_;
    std::vector<EdgeId> pred_b_;
    std::vector<std::uint32_t> dist_b_;
    std::uint64_t round_ = 0;
};

// Induced subgraph as a standalone instance plus the local -> global edge map.
std::pair<ProblemInstance, std::vector<EdgeId>> local_instance(const ProblemInstance& inst,
                                                               const Subgraph& h) {
    std::vector<NodeId> local(inst.node_count(), kNoNode);
    for (NodeId i = 0; i < h.nodes.size(); ++i) local[h.nodes[i]] = i;
    std::vector<Edge> edges;
    for (EdgeId e : h.edges) {
        const Edge& ed = inst.edge(e);
        if (local[ed.u] == kNoNode || local[ed.v] == kNoNode)
            throw ContractViolation("subgraph edge leaves its node set");
        edges.push_back({local[ed.u], local[ed.v], ed.weight});
    }
    auto sub = ProblemInstance::from_edges(inst.kind(), h.nodes.size(), std::move(edges));
    // local edges are sorted by local endpoints, which preserves the global order of h.edges
    std::vector<EdgeId> to_global(sub.edge_count());
    for (EdgeId e : h.edges) {
        const Edge& ed = inst.edge(e);
        to_global[*sub.find_edge(local[ed.u], local[ed.v])] = e;
    }
    return {std::move(sub), std::move(to_global)};
}

}  // namespace

DualPacking icp(const ProblemInstance& inst) { return CyclePacker(inst).run(); }

DualPacking icp(const ProblemInstance& inst, const Subgraph& h) {
    auto [sub, to_global] = local_instance(inst, h);
    DualPacking local = CyclePacker(sub).run();
    DualPacking out;
    out.load.assign(inst.edge_count(), 0.0);
    out.dual_bound = local.dual_bound;
    for (EdgeId e = 0; e < sub.edge_count(); ++e) out.load[to_global[e]] = local.load[e];
    for (auto& c : local.cycles) {
        for (EdgeId& e : c.edges) e = to_global[e];
        out.cycles.push_back(std::move(c));
    }
    return out;
}

void validate_packing(const ProblemInstance& inst, const DualPacking& packing) {
    if (packing.load.size() != inst.edge_count())
        throw ContractViolation("packing load vector size mismatch");
    std::vector<double> load(inst.edge_count(), 0.0);
    for (const auto& c : packing.cycles) {
        if (c.lambda < 0.0) throw ContractViolation("negative cycle multiplier");
        std::size_t negatives = 0;
        for (EdgeId e : c.edges) {
            if (e >= inst.edge_count()) throw ContractViolation("packed cycle edge out of range");
            if (inst.weight(e) < 0.0) ++negatives;
            load[e] += c.lambda;
        }
        if (negatives != 1) throw ContractViolation("packed cycle is not conflicted");
    }
    for (EdgeId e = 0; e < inst.edge_count(); ++e) {
        double cap = std::abs(inst.weight(e));
        if (load[e] > cap + 1e-9 * (1.0 + cap))
            throw ContractViolation("packing overloads edge " + std::to_string(e));
    }
}

ReducedCosts reduced_costs(const ProblemInstance& inst, const DualPacking& packing) {
    if (packing.load.size() != inst.edge_count())
        throw ContractViolation("packing load vector size mismatch");
    ReducedCosts out(inst.edge_count(), 0.0);
    for (EdgeId e = 0; e < inst.edge_count(); ++e) {
        double w = inst.weight(e);
        double cap = std::abs(w);
        double rest = cap - packing.load[e];
        if (rest < -1e-9 * (1.0 + cap)) throw ContractViolation("packing is not dual feasible");
        if (rest <= kSlackEps * (1.0 + cap)) rest = 0.0;
        out[e] = w > 0.0 ? rest : (w < 0.0 ? -rest : 0.0);
    }
    return out;
}

bool assumption1_check(const ProblemInstance& inst, const Subgraph& h, const DualPacking& packing) {
    if (packing.load.size() != inst.edge_count())
        throw ContractViolation("packing load vector size mismatch");
    std::vector<std::uint8_t> in_h(inst.edge_count(), 0);
    for (EdgeId e : h.edges) in_h[e] = 1;
    double bound = 0.0;
    for (const auto& c : packing.cycles) {
        for (EdgeId e : c.edges)
            if (!in_h[e]) throw ContractViolation("packing is not restricted to the subgraph");
        bound += c.lambda;
    }
    for (EdgeId e : h.edges)
        if (inst.weight(e) < 0.0) bound += inst.weight(e);
    return bound >= -kDualBoundEps;
}

std::pair<double, double> lemma8_bound(const ProblemInstance& inst, const Subgraph& h,
                                       const DualPacking& packing, const NodeSet& u) {
    if (!assumption1_check(inst, h, packing))
        throw ContractViolation("lemma8_bound requires a zero packing bound on the subgraph");
    auto reduced = reduced_costs(inst, packing);
    double lb = 0.0, ub = 0.0;
    for (EdgeId e : h.edges) {
        const Edge& ed = inst.edge(e);
        if (u.contains(ed.u) == u.contains(ed.v)) continue;
        lb += reduced[e];
        ub += ed.weight;
    }
    return {lb, ub};
}

}  // namespace persist
