#include "persist/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numeric>
#include <queue>
#include <random>
#include <thread>
#include <tuple>
#include <unordered_map>

namespace persist {

std::string to_string(Stage s) {
    switch (s) {
        case Stage::gplus: return "gplus";
        case Stage::edge: return "edge";
        case Stage::triangle: return "triangle";
        case Stage::greedy_subgraph: return "greedy_subgraph";
        case Stage::icp_subgraph: return "icp_subgraph";
    }
    return "?";
}

Stage stage_from_string(const std::string& s) {
    for (Stage st : full_ladder())
        if (to_string(st) == s) return st;
    throw InputError("unknown stage '" + s + "'");
}

const std::vector<Stage>& full_ladder() {
    static const std::vector<Stage> ladder{Stage::gplus, Stage::edge, Stage::triangle,
                                           Stage::greedy_subgraph, Stage::icp_subgraph};
    return ladder;
}

double RunReport::node_fraction() const {
    return original_nodes == 0 ? 0.0 : static_cast<double>(final_nodes) / original_nodes;
}

double RunReport::edge_fraction() const {
    return original_edges == 0 ? 0.0 : static_cast<double>(final_edges) / original_edges;
}

// ---- ShrinkState -------------------------------------------------------------------------

ShrinkState::ShrinkState(ProblemInstance original)
    : original_(std::move(original)),
      parent_(original_.node_count()),
      members_(original_.node_count()),
      min_member_(original_.node_count()),
      parity_(original_.node_count(), 0),
      deleted_(original_.edge_count(), 0) {
    std::iota(parent_.begin(), parent_.end(), 0);
    std::iota(min_member_.begin(), min_member_.end(), 0);
    for (NodeId v = 0; v < original_.node_count(); ++v) members_[v] = {v};
    commit();
    version_ = 0;
}

NodeId ShrinkState::find(NodeId x) const {
    while (parent_[x] != x) x = parent_[x];
    return x;
}

void ShrinkState::commit() {
    const std::size_t n = original_.node_count();
    node_map_.assign(n, kNoNode);
    class_root_.clear();
    std::vector<NodeId> dense(n, kNoNode);  // root -> current id
    for (NodeId v = 0; v < n; ++v) {
        NodeId r = find(v);
        if (dense[r] == kNoNode) {
            dense[r] = static_cast<NodeId>(class_root_.size());
            class_root_.push_back(r);
        }
        node_map_[v] = dense[r];
    }
    double constant = original_.objective_constant();
    std::vector<Edge> edges;
    std::vector<std::pair<NodeId, NodeId>> keys(original_.edge_count(), {kNoNode, kNoNode});
    for (EdgeId e = 0; e < original_.edge_count(); ++e) {
        const Edge& ed = original_.edge(e);
        if (deleted_[e]) {
            constant += ed.weight;
            continue;
        }
        bool flipped = parity_[ed.u] != parity_[ed.v];
        if (flipped) constant += ed.weight;
        NodeId a = node_map_[ed.u], b = node_map_[ed.v];
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        keys[e] = {a, b};
        edges.push_back({a, b, flipped ? -ed.weight : ed.weight});
    }
    current_ = ProblemInstance::from_edges(original_.kind(), class_root_.size(), std::move(edges),
                                           constant);
    current_edge_.assign(original_.edge_count(), kNoEdge);
    originals_.assign(current_.edge_count(), {});
    representative_.assign(current_.edge_count(), kNoEdge);
    for (EdgeId e = 0; e < original_.edge_count(); ++e) {
        if (keys[e].first == kNoNode) continue;
        EdgeId c = *current_.find_edge(keys[e].first, keys[e].second);
        current_edge_[e] = c;
        originals_[c].push_back(e);
        if (representative_[c] == kNoEdge) representative_[c] = e;
    }
    ++version_;
}

EdgeStatus ShrinkState::edge_status(EdgeId e) const {
    EdgeStatus s;
    if (deleted_[e]) {
        s.kind = EdgeStatus::Kind::deleted;
        s.value = 1;
    } else if (current_edge_[e] != kNoEdge) {
        s.kind = EdgeStatus::Kind::live;
        s.current = current_edge_[e];
    } else {
        const Edge& ed = original_.edge(e);
        s.kind = EdgeStatus::Kind::contracted;
        s.value = parity_[ed.u] ^ parity_[ed.v];
    }
    return s;
}

std::vector<NodeId> ShrinkState::preimage(const NodeSet& current_nodes) const {
    std::vector<NodeId> out;
    for (NodeId c = 0; c < class_root_.size(); ++c)
        if (current_nodes.contains(c))
            out.insert(out.end(), members_[class_root_[c]].begin(), members_[class_root_[c]].end());
    std::sort(out.begin(), out.end());
    return out;
}

NodeSet ShrinkState::image(std::span<const NodeId> original_nodes) const {
    NodeSet s(current_.node_count());
    for (NodeId v : original_nodes) {
        if (v >= node_map_.size()) throw ContractViolation("witness node out of range");
        s.insert(node_map_[v]);
    }
    return s;
}

std::uint8_t ShrinkState::to_original(EdgeId e, std::uint8_t current_value) const {
    const Edge& ed = original_.edge(e);
    return current_value ^ parity_[ed.u] ^ parity_[ed.v];
}

NodeSet ShrinkState::current_side(const NodeSet& original_side) const {
    NodeSet s(current_.node_count());
    for (NodeId c = 0; c < class_root_.size(); ++c) {
        NodeId r = min_member_[class_root_[c]];
        if (original_side.contains(r) != (parity_[r] != 0)) s.insert(c);
    }
    return s;
}

NodeSet ShrinkState::original_side(const NodeSet& current_side) const {
    NodeSet s(original_.node_count());
    for (NodeId v = 0; v < original_.node_count(); ++v)
        if (current_side.contains(node_map_[v]) != (parity_[v] != 0)) s.insert(v);
    return s;
}

std::vector<PersistencyCertificate> ShrinkState::certificates() const {
    std::vector<PersistencyCertificate> out;
    for (const auto& step : steps_)
        for (const auto& fe : step.edges) {
            PersistencyCertificate c;
            c.edge = fe.edge;
            c.beta = fe.beta;
            c.criterion = step.criterion;
            c.witness = step.witness;
            c.round = step.round;
            out.push_back(std::move(c));
        }
    return out;
}

bool ShrinkState::fix(EdgeId e, std::uint8_t beta) {
    if (e >= original_.edge_count()) throw ContractViolation("fix: no such edge");
    const Edge& ed = original_.edge(e);
    if (deleted_[e]) return beta == 1;
    NodeId a = find(ed.u), b = find(ed.v);
    if (original_.kind() == ProblemKind::multicut) {
        if (beta == 1) {
            if (a == b) return false;
            EdgeId c = current_edge_[e];
            if (c == kNoEdge) throw ContractViolation("fix: deletion needs a committed state");
            for (EdgeId o : originals_[c]) deleted_[o] = 1;
            return true;
        }
    } else {
        if (a == b) return (parity_[ed.u] ^ parity_[ed.v]) == beta;
        if ((parity_[ed.u] ^ parity_[ed.v]) != beta) {
            // switch the class with the smaller current id
            NodeId flip = min_member_[a] < min_member_[b] ? a : b;
            SwitchRecord rec{NodeSet::from_nodes(original_.node_count(), members_[flip]), 0.0};
            for (NodeId x : members_[flip])
                for (const auto& inc : original_.neighbors(x)) {
                    if (rec.switched_cut.contains(inc.neighbor)) continue;
                    double w = original_.weight(inc.edge);
                    rec.constant_delta += parity_[x] != parity_[inc.neighbor] ? -w : w;
                }
            for (NodeId x : members_[flip]) parity_[x] ^= 1;
            switch_log_.push_back(std::move(rec));
        }
    }
    if (a == b) return true;
    if (members_[a].size() < members_[b].size()) std::swap(a, b);
    parent_[b] = a;
    members_[a].insert(members_[a].end(), members_[b].begin(), members_[b].end());
    members_[b].clear();
    members_[b].shrink_to_fit();
    min_member_[a] = std::min(min_member_[a], min_member_[b]);
    return true;
}

EdgeLabeling ShrinkState::lift(const EdgeLabeling& y) const {
    if (y.size() != current_.edge_count() || !is_feasible(current_, y))
        throw ContractViolation("lift: labeling is not feasible for the current instance");
    const std::size_t n = original_.node_count();
    if (original_.kind() == ProblemKind::multicut) {
        auto comp = connected_components(current_, [&](EdgeId e) { return y[e] == 0; });
        std::vector<NodeId> labels(n);
        for (NodeId v = 0; v < n; ++v) labels[v] = comp[node_map_[v]];
        EdgeLabeling x = partition_labeling(original_, labels);
        for (EdgeId e = 0; e < original_.edge_count(); ++e)
            if (deleted_[e] && !x[e]) throw ContractViolation("lift: deleted edge inside a cluster");
        return x;
    }
    NodeSet side = cut_side(current_, y);
    return cut_labeling(original_, original_side(side));
}

EdgeLabeling lift(const ShrinkState& state, const EdgeLabeling& y) { return state.lift(y); }

// ---- primal heuristics and candidates ----------------------------------------------------

namespace {

void flip(const ProblemInstance& inst, NodeSet& side, std::vector<double>& gain, NodeId v) {
    for (const auto& inc : inst.neighbors(v)) {
        bool cut = side.contains(v) != side.contains(inc.neighbor);
        double term = cut ? -inst.weight(inc.edge) : inst.weight(inc.edge);
        gain[inc.neighbor] -= 2.0 * term;
    }
    gain[v] = -gain[v];
    if (side.contains(v))
        side.erase(v);
    else
        side.insert(v);
}

}  // namespace

namespace {

double cut_value(const ProblemInstance& inst, const NodeSet& side) {
    double v = 0.0;
    for (const auto& e : inst.edges())
        if (side.contains(e.u) != side.contains(e.v)) v += e.weight;
    return v;
}

// Greedy improving flips, then Fiduccia-Mattheyses passes (flip every node once in best-gain
// order, keep the best prefix).
NodeSet improve_cut(const ProblemInstance& inst, NodeSet side) {
    const std::size_t n = inst.node_count();
    // gain[v]: change of the objective when v changes sides
    std::vector<double> gain(n, 0.0);
    for (const auto& e : inst.edges()) {
        double term = side.contains(e.u) != side.contains(e.v) ? -e.weight : e.weight;
        gain[e.u] += term;
        gain[e.v] += term;
    }
    while (n > 0) {
        NodeId best = 0;
        for (NodeId v = 1; v < n; ++v)
            if (gain[v] < gain[best]) best = v;
        if (!(gain[best] < -1e-12)) break;
        flip(inst, side, gain, best);
    }
    for (int pass = 0; pass < 50 && n > 1; ++pass) {
        std::vector<std::uint8_t> locked(n, 0);
        std::vector<NodeId> order;
        double total = 0.0, best_total = 0.0;
        std::size_t best_len = 0;
        for (std::size_t k = 0; k < n; ++k) {
            NodeId best = kNoNode;
            for (NodeId v = 0; v < n; ++v)
                if (!locked[v] && (best == kNoNode || gain[v] < gain[best])) best = v;
            total += gain[best];
            locked[best] = 1;
            order.push_back(best);
            flip(inst, side, gain, best);
            if (total < best_total - 1e-12) {
                best_total = total;
                best_len = order.size();
            }
        }
        for (std::size_t k = order.size(); k > best_len; --k) flip(inst, side, gain, order[k - 1]);
        if (best_len == 0) break;
    }
    return side;
}

}  // namespace

constexpr int kLocalSearchIterations = 400;

NodeSet maxcut_local_search(const ProblemInstance& inst, const NodeSet* warm_start) {
    const std::size_t n = inst.node_count();
    NodeSet best = improve_cut(inst, NodeSet(n));
    double best_value = cut_value(inst, best);
    auto consider = [&](NodeSet start) {
        NodeSet side = improve_cut(inst, std::move(start));
        double v = cut_value(inst, side);
        if (v < best_value - 1e-12) {
            best = std::move(side);
            best_value = v;
        }
    };
    if (warm_start && warm_start->universe() == n) consider(*warm_start);
    // iterated local search: perturb the incumbent, re-optimize, keep improvements. The generator
    // seed is fixed so runs are reproducible.
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL ^ n);
    const std::size_t kick = std::max<std::size_t>(2, n / 5);
    for (int r = 0; r < kLocalSearchIterations && n > 2; ++r) {
        NodeSet start = best;
        for (std::size_t k = 0; k < kick; ++k) {
            NodeId v = static_cast<NodeId>(rng() % n);
            if (start.contains(v))
                start.erase(v);
            else
                start.insert(v);
        }
        consider(std::move(start));
    }
    return best;
}

EdgeLabeling gaec_primal(const ProblemInstance& inst) {
    if (inst.kind() == ProblemKind::maxcut) return cut_labeling(inst, maxcut_local_search(inst));
    const std::size_t n = inst.node_count();
    std::vector<std::unordered_map<NodeId, double>> adj(n);
    for (const auto& e : inst.edges()) {
        adj[e.u][e.v] += e.weight;
        adj[e.v][e.u] += e.weight;
    }
    using Item = std::tuple<double, NodeId, NodeId>;
    auto worse = [](const Item& x, const Item& y) {
        if (std::get<0>(x) != std::get<0>(y)) return std::get<0>(x) < std::get<0>(y);
        return std::tie(std::get<1>(x), std::get<2>(x)) > std::tie(std::get<1>(y), std::get<2>(y));
    };
    std::priority_queue<Item, std::vector<Item>, decltype(worse)> queue(worse);
    for (const auto& e : inst.edges())
        if (e.weight > 0.0) queue.push({e.weight, e.u, e.v});
    DisjointSets sets(n);
    std::vector<std::uint8_t> alive(n, 1);
    while (!queue.empty()) {
        auto [w, a, b] = queue.top();
        queue.pop();
        if (!alive[a] || !alive[b]) continue;
        auto it = adj[a].find(b);
        if (it == adj[a].end() || it->second != w) continue;
        // keep the node with the larger adjacency
        NodeId keep = adj[a].size() >= adj[b].size() ? a : b;
        NodeId gone = keep == a ? b : a;
        alive[gone] = 0;
        sets.unite(keep, gone);
        adj[keep].erase(gone);
        for (const auto& [x, wx] : adj[gone]) {
            if (x == keep) continue;
            double merged = (adj[keep][x] += wx);
            adj[x].erase(gone);
            adj[x][keep] = merged;
            if (merged > 0.0) queue.push({merged, std::min(keep, x), std::max(keep, x)});
        }
        adj[gone].clear();
    }
    std::vector<NodeId> labels(n);
    for (NodeId v = 0; v < n; ++v) labels[v] = sets.find(v);
    return partition_labeling(inst, labels);
}

std::vector<Subgraph> generate_candidates(const ProblemInstance& inst, const EdgeLabeling& primal,
                                          const DualPacking& packing) {
    std::vector<std::vector<NodeId>> groups;
    if (inst.kind() == ProblemKind::multicut) {
        if (!is_feasible(inst, primal)) throw ContractViolation("candidates: infeasible primal");
        auto labels = connected_components(inst, [&](EdgeId e) { return primal[e] == 0; });
        for (auto& g : component_groups(labels)) groups.push_back(std::move(g));
    }
    const auto reduced = reduced_costs(inst, packing);
    auto labels = connected_components(inst, [&](EdgeId e) { return reduced[e] > 0.0; });
    for (auto& g : component_groups(labels)) groups.push_back(std::move(g));

    std::vector<Subgraph> out;
    std::vector<std::vector<NodeId>> seen;
    for (auto& g : groups) {
        if (g.size() < 2) continue;
        std::sort(g.begin(), g.end());
        if (std::find(seen.begin(), seen.end(), g) != seen.end()) continue;
        seen.push_back(g);
        out.push_back(induced_subgraph(inst, g));
    }
    return out;
}

// ---- stage evaluation --------------------------------------------------------------------

namespace {

template <class Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn fn) {
    threads = std::max<std::size_t>(1, std::min(threads, count));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = next++; i < count; i = next++) fn(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

struct Proposal {
    ShrinkStep step;
    bool hint = false;
};

// Instance switched on the cut with the given side, and the cut labeling itself.
struct Switched {
    ProblemInstance inst;
    EdgeLabeling cut;
};

Switched switched(const ProblemInstance& inst, const NodeSet& side) {
    EdgeLabeling y = cut_labeling(inst, side);
    return {switch_instance(inst, y).first, y};
}

std::vector<NodeId> to_original_nodes(const ShrinkState& st, const std::vector<NodeId>& nodes) {
    return st.preimage(NodeSet::from_nodes(st.current().node_count(), nodes));
}

NodeId to_original_node(const ShrinkState& st, NodeId c) {
    return st.preimage(NodeSet(st.current().node_count(), {c})).front();
}

FixedEdge fixed_edge(const ShrinkState& st, EdgeId current_edge, std::uint8_t current_beta,
                     double value) {
    EdgeId rep = st.representative(current_edge);
    return {rep, st.to_original(rep, current_beta), value};
}

ShrinkStep single_step(const ShrinkState& st, const PersistencyCertificate& c, Stage stage,
                       std::size_t round) {
    ShrinkStep s;
    s.criterion = c.criterion;
    s.stage = stage;
    s.round = round;
    if (auto* cw = std::get_if<CutWitness>(&c.witness)) {
        s.witness = CutWitness{to_original_nodes(st, cw->side)};
    } else if (auto* tw = std::get_if<TriangleWitness>(&c.witness)) {
        s.witness = TriangleWitness{to_original_node(st, tw->u), to_original_node(st, tw->v),
                                    to_original_node(st, tw->w), to_original_nodes(st, tw->cut_u),
                                    to_original_nodes(st, tw->cut_w)};
    } else {
        throw ContractViolation("single_step: unexpected witness");
    }
    s.edges.push_back(fixed_edge(st, c.edge, c.beta, 0.0));
    return s;
}

std::vector<NodeId> primal_cluster_labels(const ShrinkState& st, const EdgeLabeling& primal) {
    auto comp = connected_components(st.current(), [&](EdgeId e) { return primal[e] == 0; });
    std::vector<NodeId> out(st.original().node_count());
    for (NodeId v = 0; v < out.size(); ++v) out[v] = to_original_node(st, comp[st.node_map(v)]);
    return out;
}

ShrinkStep rcf_step(const ShrinkState& st, const std::vector<PersistencyCertificate>& certs,
                    const EdgeLabeling& cut, std::vector<NodeId> primal, std::size_t round) {
    ShrinkStep s;
    s.criterion = Criterion::rcf;
    s.stage = Stage::icp_subgraph;
    s.round = round;
    const auto& gap = std::get<GapWitness>(certs.front().witness);
    s.witness = GapWitness{gap.gamma, 0.0, std::move(primal)};
    for (const auto& c : certs) {
        std::uint8_t beta = cut.empty() ? c.beta : static_cast<std::uint8_t>(c.beta ^ cut[c.edge]);
        s.edges.push_back(fixed_edge(st, c.edge, beta, std::get<GapWitness>(c.witness).reduced_cost));
    }
    return s;
}

ShrinkStep subgraph_step(const ShrinkState& st, const Subgraph& h, const SubgraphResult& res,
                         const EdgeLabeling& cut, std::vector<NodeId> switch_side, Stage stage,
                         std::size_t round) {
    ShrinkStep s;
    s.criterion = res.certificates.front().criterion;
    s.stage = stage;
    s.round = round;
    const auto& first = std::get<SubgraphWitness>(res.certificates.front().witness);
    SubgraphWitness w{to_original_nodes(st, h.nodes), std::move(switch_side), first.lhs, first.rhs,
                      first.alpha};
    for (const auto& c : res.certificates) {
        const auto& cw = std::get<SubgraphWitness>(c.witness);
        w.lhs = std::min(w.lhs, cw.lhs);
        std::uint8_t beta = cut.empty() ? c.beta : static_cast<std::uint8_t>(c.beta ^ cut[c.edge]);
        s.edges.push_back(fixed_edge(st, c.edge, beta, cw.lhs));
    }
    s.witness = std::move(w);
    return s;
}

std::vector<Proposal> compute_stage(const ShrinkState& st, Stage stage, const PipelineConfig& config,
                                    std::size_t round, NodeSet& incumbent) {
    const ProblemInstance& cur = st.current();
    const bool multicut = cur.kind() == ProblemKind::multicut;
    std::vector<Proposal> out;
    switch (stage) {
        case Stage::gplus: {
            if (!multicut) break;
            auto res = gplus_decomposition(cur);
            if (res.certificates.empty()) break;
            ShrinkStep s;
            s.criterion = Criterion::gplus_decomp;
            s.stage = stage;
            s.round = round;
            std::vector<NodeId> labels(st.original().node_count());
            for (NodeId v = 0; v < labels.size(); ++v)
                labels[v] = to_original_node(st, res.labels[st.node_map(v)]);
            s.witness = ComponentWitness{std::move(labels)};
            for (const auto& c : res.certificates) s.edges.push_back(fixed_edge(st, c.edge, 1, 0.0));
            out.push_back({std::move(s), false});
            break;
        }
        case Stage::edge: {
            for (const auto& c : edge_criterion_all(cur))
                out.push_back({single_step(st, c, stage, round), c.criterion == Criterion::edge_e2});
            break;
        }
        case Stage::triangle: {
            auto mode = config.exact_triangle_flow ? TriangleCuts::exact_flow : TriangleCuts::simple;
            for (const auto& c : triangle_criterion_all(cur, mode))
                out.push_back({single_step(st, c, stage, round), false});
            break;
        }
        case Stage::greedy_subgraph:
        case Stage::icp_subgraph: {
            if (stage == Stage::greedy_subgraph && !multicut) break;
            std::optional<Switched> sw;
            EdgeLabeling primal;
            std::vector<NodeId> primal_witness;
            if (multicut) {
                primal = gaec_primal(cur);
                primal_witness = primal_cluster_labels(st, primal);
            } else {
                NodeSet warm = st.incumbent().universe() == st.original().node_count()
                                   ? st.current_side(st.incumbent())
                                   : NodeSet(cur.node_count());
                NodeSet side = maxcut_local_search(cur, &warm);
                incumbent = st.original_side(side);
                sw = switched(cur, side);
                primal.assign(cur.edge_count(), 0);
                primal_witness = st.original_side(side).nodes();
            }
            const ProblemInstance& work = sw ? sw->inst : cur;
            const EdgeLabeling no_cut;
            const EdgeLabeling& cut = sw ? sw->cut : no_cut;
            std::vector<Subgraph> candidates;
            if (stage == Stage::greedy_subgraph) {
                auto labels = connected_components(cur, [&](EdgeId e) { return primal[e] == 0; });
                for (auto& g : component_groups(labels))
                    if (g.size() >= 2) candidates.push_back(induced_subgraph(cur, g));
            } else {
                DualPacking packing = icp(work);
                auto fixed = reduced_cost_fixing(work, primal, packing);
                if (!fixed.empty())
                    out.push_back({rcf_step(st, fixed, cut, primal_witness, round), false});
                candidates = generate_candidates(work, primal, packing);
            }
            std::vector<SubgraphResult> results(candidates.size());
            parallel_for(candidates.size(), config.threads, [&](std::size_t i) {
                DualPacking local = icp(work, candidates[i]);
                if (!multicut)
                    results[i] = maxcut_subgraph_criterion_all(work, candidates[i], local);
                else if (stage == Stage::greedy_subgraph)
                    results[i] = multicut_subgraph_criterion(work, candidates[i], local);
                else
                    results[i] = boundary_refined_criterion(work, candidates[i], local);
            });
            std::vector<NodeId> switch_side = multicut ? std::vector<NodeId>{} : primal_witness;
            for (std::size_t i = 0; i < candidates.size(); ++i)
                if (!results[i].certificates.empty())
                    out.push_back({subgraph_step(st, candidates[i], results[i], cut, switch_side,
                                                 stage, round),
                                   false});
            break;
        }
    }
    return out;
}

}  // namespace

std::optional<ShrinkStep> evaluate_step(const ShrinkState& st, const ShrinkStep& step,
                                        const PipelineConfig& config) {
    const ProblemInstance& cur = st.current();
    const std::size_t n = cur.node_count();
    const bool multicut = cur.kind() == ProblemKind::multicut;
    ShrinkStep out = step;
    out.edges.clear();
    auto live = [&](EdgeId f) -> std::optional<EdgeId> {
        if (f >= st.original().edge_count()) return std::nullopt;
        auto status = st.edge_status(f);
        if (status.kind != EdgeStatus::Kind::live) return std::nullopt;
        return status.current;
    };

    switch (step.criterion) {
        case Criterion::edge_e1:
        case Criterion::edge_e2:
        case Criterion::edge_e3: {
            const auto* w = std::get_if<CutWitness>(&step.witness);
            if (!w || step.edges.size() != 1) return std::nullopt;
            auto e = live(step.edges[0].edge);
            if (!e) return std::nullopt;
            auto [crit, beta] = edge_criterion_kind(cur, *e);
            if (crit != step.criterion || !check_edge_criterion(cur, *e, st.image(w->side)))
                return std::nullopt;
            out.edges.push_back({step.edges[0].edge, st.to_original(step.edges[0].edge, beta), 0.0});
            break;
        }
        case Criterion::triangle: {
            const auto* w = std::get_if<TriangleWitness>(&step.witness);
            if (!w || step.edges.size() != 1) return std::nullopt;
            auto e = live(step.edges[0].edge);
            if (!e) return std::nullopt;
            NodeId u = st.node_map(w->u), v = st.node_map(w->v), x = st.node_map(w->w);
            const Edge& ce = cur.edge(*e);
            if (!((ce.u == u && ce.v == x) || (ce.u == x && ce.v == u))) return std::nullopt;
            auto mode = config.exact_triangle_flow ? TriangleCuts::exact_flow : TriangleCuts::simple;
            (void)mode;
            if (!check_triangle_criterion(cur, u, v, x, st.image(w->cut_u), st.image(w->cut_w)))
                return std::nullopt;
            out.edges.push_back({step.edges[0].edge, st.to_original(step.edges[0].edge, 0), 0.0});
            break;
        }
        case Criterion::subgraph_mc:
        case Criterion::boundary_edge:
        case Criterion::boundary_subgraph:
        case Criterion::subgraph_maxcut: {
            const auto* w = std::get_if<SubgraphWitness>(&step.witness);
            if (!w) return std::nullopt;
            auto nodes = st.image(w->nodes).nodes();
            if (nodes.size() < 2) return std::nullopt;
            Subgraph h = induced_subgraph(cur, nodes);
            if (!is_connected_set(cur, NodeSet::from_nodes(n, h.nodes))) return std::nullopt;
            std::optional<Switched> sw;
            if (step.criterion == Criterion::subgraph_maxcut) {
                if (multicut) return std::nullopt;
                sw = switched(cur, st.current_side(NodeSet::from_nodes(st.original().node_count(),
                                                                       w->switch_side)));
            } else if (!multicut) {
                return std::nullopt;
            }
            const ProblemInstance& work = sw ? sw->inst : cur;
            DualPacking packing = icp(work, h);
            SubgraphResult res = step.criterion == Criterion::subgraph_maxcut
                                     ? maxcut_subgraph_criterion_all(work, h, packing)
                                 : step.criterion == Criterion::subgraph_mc
                                     ? multicut_subgraph_criterion(work, h, packing)
                                     : boundary_refined_criterion(work, h, packing);
            std::vector<double> certified(cur.edge_count(), std::nan(""));
            for (const auto& c : res.certificates)
                certified[c.edge] = std::get<SubgraphWitness>(c.witness).lhs;
            for (const auto& fe : step.edges) {
                auto e = live(fe.edge);
                if (!e || std::isnan(certified[*e])) continue;
                std::uint8_t beta = sw ? sw->cut[*e] : 0;
                out.edges.push_back({fe.edge, st.to_original(fe.edge, beta), certified[*e]});
            }
            break;
        }
        case Criterion::rcf: {
            const auto* w = std::get_if<GapWitness>(&step.witness);
            if (!w) return std::nullopt;
            std::optional<Switched> sw;
            EdgeLabeling primal;
            if (multicut) {
                if (w->primal.size() != st.original().node_count()) return std::nullopt;
                std::vector<NodeId> labels(n);
                for (NodeId v = 0; v < st.original().node_count(); ++v)
                    labels[st.node_map(v)] = w->primal[v];
                primal = partition_labeling(cur, labels);
            } else {
                sw = switched(cur, st.current_side(NodeSet::from_nodes(st.original().node_count(),
                                                                       w->primal)));
                primal.assign(cur.edge_count(), 0);
            }
            const ProblemInstance& work = sw ? sw->inst : cur;
            auto fixed = reduced_cost_fixing(work, primal, icp(work));
            std::vector<double> certified(cur.edge_count(), std::nan(""));
            double gamma = w->gamma;
            for (const auto& c : fixed) {
                const auto& g = std::get<GapWitness>(c.witness);
                certified[c.edge] = g.reduced_cost;
                gamma = g.gamma;
            }
            out.witness = GapWitness{gamma, 0.0, w->primal};
            for (const auto& fe : step.edges) {
                auto e = live(fe.edge);
                if (!e || std::isnan(certified[*e])) continue;
                std::uint8_t beta = sw ? sw->cut[*e] : 0;
                out.edges.push_back({fe.edge, st.to_original(fe.edge, beta), certified[*e]});
            }
            break;
        }
        case Criterion::gplus_decomp: {
            if (!multicut) return std::nullopt;
            auto labels = connected_components(cur, [&](EdgeId e) { return cur.weight(e) >= 0.0; });
            for (const auto& fe : step.edges) {
                auto e = live(fe.edge);
                if (!e) continue;
                const Edge& ce = cur.edge(*e);
                if (labels[ce.u] != labels[ce.v]) out.edges.push_back({fe.edge, 1, 0.0});
            }
            break;
        }
    }
    if (out.edges.empty()) return std::nullopt;
    return out;
}

bool apply_step(ShrinkState& state, const ShrinkStep& step) {
    for (const auto& fe : step.edges)
        if (!state.fix(fe.edge, fe.beta)) return false;
    state.commit();
    return true;
}

void run_rounds(ShrinkState& state, const PipelineConfig& config, RunReport& report) {
    using Clock = std::chrono::steady_clock;
    for (std::size_t round = 1; round <= config.max_rounds; ++round) {
        std::size_t applied_in_round = 0;
        for (Stage stage : full_ladder()) {
            if (std::find(config.stages.begin(), config.stages.end(), stage) == config.stages.end())
                continue;
            auto t0 = Clock::now();
            StageRecord rec;
            rec.round = report.rounds + 1;
            rec.stage = stage;
            NodeSet incumbent;
            auto proposals = compute_stage(state, stage, config, rec.round, incumbent);
            if (incumbent.universe() > 0) state.set_incumbent(std::move(incumbent));
            const std::size_t snapshot = state.version();
            for (auto& p : proposals) {
                std::optional<ShrinkStep> step;
                if (state.version() == snapshot)
                    step = std::move(p.step);
                else
                    step = evaluate_step(state, p.step, config);
                if (!step) continue;
                if (p.hint) {
                    ++report.hints;
                    state.record_hint(std::move(*step));
                    continue;
                }
                if (!apply_step(state, *step))
                    throw ContractViolation("conflicting persistency certificates");
                ++rec.steps;
                rec.certificates += step->edges.size();
                report.criterion_counts[step->criterion] += step->edges.size();
                state.record(std::move(*step));
            }
            applied_in_round += rec.steps;
            rec.nodes = state.current().node_count();
            rec.edges = state.current().edge_count();
            rec.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
            report.stages.push_back(rec);
        }
        ++report.rounds;
        if (applied_in_round == 0) break;
    }
    report.final_nodes = state.current().node_count();
    report.final_edges = state.current().edge_count();
}

RunResult run(const ProblemInstance& inst, const PipelineConfig& config) {
    auto t0 = std::chrono::steady_clock::now();
    RunResult res{ShrinkState(inst), RunReport{}};
    res.report.kind = inst.kind();
    res.report.config = config;
    res.report.original_nodes = inst.node_count();
    res.report.original_edges = inst.edge_count();
    res.report.final_nodes = inst.node_count();
    res.report.final_edges = inst.edge_count();
    run_rounds(res.state, config, res.report);
    res.report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

ReplayResult replay_steps(ShrinkState& state, const std::vector<ShrinkStep>& steps,
                          const PipelineConfig& config, const std::vector<Hint>& hints) {
    ReplayResult res;
    auto same = [](const ShrinkStep& a, const ShrinkStep& b) {
        if (a.edges.size() != b.edges.size()) return false;
        for (std::size_t i = 0; i < a.edges.size(); ++i)
            if (a.edges[i].edge != b.edges[i].edge || a.edges[i].beta != b.edges[i].beta) return false;
        return true;
    };
    auto check_hints = [&](std::size_t applied) {
        for (const auto& h : hints) {
            if (h.after_step != applied) continue;
            auto ev = evaluate_step(state, h.certificate, config);
            if (!ev || !same(*ev, h.certificate)) return false;
        }
        return true;
    };
    for (std::size_t i = 0; i <= steps.size(); ++i) {
        if (!check_hints(i)) {
            res.ok = false;
            res.failed_step = i;
            res.message = "hint recorded after step " + std::to_string(i) + " does not replay";
            return res;
        }
        if (i == steps.size()) break;
        auto ev = evaluate_step(state, steps[i], config);
        if (!ev || !same(*ev, steps[i])) {
            res.ok = false;
            res.failed_step = i;
            res.message = "step " + std::to_string(i) + " (" + to_string(steps[i].criterion) +
                          ") does not replay";
            return res;
        }
        if (!apply_step(state, *ev)) {
            res.ok = false;
            res.failed_step = i;
            res.message = "step " + std::to_string(i) + " conflicts with earlier steps";
            return res;
        }
        state.record(*ev);
    }
    return res;
}

std::vector<AblationPoint> ablate(const ProblemInstance& inst, const PipelineConfig& config) {
    ShrinkState state(inst);
    RunReport report;
    report.original_nodes = inst.node_count();
    report.original_edges = inst.edge_count();
    std::vector<AblationPoint> points{{{}, inst.node_count(), inst.edge_count()}};
    std::vector<Stage> ladder;
    for (Stage s : full_ladder())
        if (std::find(config.stages.begin(), config.stages.end(), s) != config.stages.end())
            ladder.push_back(s);
    PipelineConfig cfg = config;
    for (std::size_t k = 1; k <= ladder.size(); ++k) {
        cfg.stages.assign(ladder.begin(), ladder.begin() + static_cast<std::ptrdiff_t>(k));
        run_rounds(state, cfg, report);
        points.push_back({cfg.stages, state.current().node_count(), state.current().edge_count()});
    }
    return points;
}

}  // namespace persist
