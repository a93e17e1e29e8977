#include "persist/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace persist {

FlowNetwork::LinkId FlowNetwork::add_link(NodeId a, NodeId b, double forward, double backward) {
    if (a >= node_count() || b >= node_count()) throw ContractViolation("link endpoint out of range");
    if (!(forward >= 0.0) || !(backward >= 0.0) || !std::isfinite(forward) ||
        !std::isfinite(backward))
        throw ContractViolation("capacities must be finite and non-negative");
    head_.push_back(b);
    cap_.push_back(forward);
    head_.push_back(a);
    cap_.push_back(backward);
    indexed_ = false;
    return link_count() - 1;
}

void FlowNetwork::set_capacity(LinkId link, double forward, double backward) {
    if (link >= link_count()) throw ContractViolation("no such link");
    if (!(forward >= 0.0) || !(backward >= 0.0) || !std::isfinite(forward) ||
        !std::isfinite(backward))
        throw ContractViolation("capacities must be finite and non-negative");
    cap_[2 * link] = forward;
    cap_[2 * link + 1] = backward;
}

void FlowNetwork::build_index() const {
    if (indexed_) return;
    const std::size_t n = node_count();
    std::fill(first_.begin(), first_.end(), 0);
    for (std::size_t arc = 0; arc < head_.size(); ++arc) ++first_[head_[arc ^ 1] + 1];
    for (std::size_t i = 0; i < n; ++i) first_[i + 1] += first_[i];
    arcs_by_tail_.resize(head_.size());
    std::vector<std::size_t> fill(first_.begin(), first_.end() - 1);
    for (std::size_t arc = 0; arc < head_.size(); ++arc) arcs_by_tail_[fill[head_[arc ^ 1]]++] = arc;
    indexed_ = true;
}

double FlowNetwork::cut_capacity(const NodeSet& side) const {
    double total = 0.0;
    for (std::size_t arc = 0; arc < head_.size(); ++arc)
        if (side.contains(head_[arc ^ 1]) && !side.contains(head_[arc])) total += cap_[arc];
    return total;
}

MaxFlowSolver::MaxFlowSolver(FlowNetwork net)
    : net_(std::move(net)), flow_(net_.head_.size(), 0.0), level_(net_.node_count()),
      cursor_(net_.node_count()) {
    net_.build_index();
}

void MaxFlowSolver::set_capacity(FlowNetwork::LinkId link, double forward, double backward) {
    net_.set_capacity(link, forward, backward);
}

void MaxFlowSolver::reset_flow() { std::fill(flow_.begin(), flow_.end(), 0.0); }

bool MaxFlowSolver::rebalance(NodeId s, NodeId t) {
    const std::size_t n = net_.node_count();
    std::vector<double> excess(n, 0.0);
    // clamp arcs whose flow exceeds the (possibly lowered) capacity
    for (std::size_t arc = 0; arc < flow_.size(); ++arc) {
        double over = flow_[arc] - net_.cap_[arc];
        if (over > 0.0) {
            push(arc, -over);
            excess[net_.head_[arc ^ 1]] += over;  // tail keeps what it can no longer send
            excess[net_.head_[arc]] -= over;
        }
    }
    excess[s] = excess[t] = 0.0;

    std::vector<std::size_t> pred(n);
    std::vector<NodeId> queue;
    // Route imbalances through the residual graph: surplus towards a deficit or a terminal,
    // deficits are filled from a terminal.
    auto route = [&](NodeId start, bool forward) -> bool {
        while (std::abs(excess[start]) > kResidualEps) {
            std::fill(pred.begin(), pred.end(), std::numeric_limits<std::size_t>::max());
            queue.assign(1, start);
            pred[start] = flow_.size();
            NodeId target = kNoNode;
            for (std::size_t head = 0; head < queue.size() && target == kNoNode; ++head) {
                NodeId x = queue[head];
                for (std::size_t i = net_.first_[x]; i < net_.first_[x + 1]; ++i) {
                    std::size_t arc = net_.arcs_by_tail_[i];
                    // forward search walks residual arcs x->y, backward walks arcs y->x
                    std::size_t use = forward ? arc : (arc ^ 1);
                    NodeId y = net_.head_[arc];
                    if (pred[y] != std::numeric_limits<std::size_t>::max()) continue;
                    if (residual(use) <= kResidualEps) continue;
                    pred[y] = use;
                    bool goal = y == s || y == t || (forward ? excess[y] < -kResidualEps : false);
                    if (goal) {
                        target = y;
                        break;
                    }
                    queue.push_back(y);
                }
            }
            if (target == kNoNode) return false;
            double amount = std::abs(excess[start]);
            if (forward && target != s && target != t) amount = std::min(amount, -excess[target]);
            for (NodeId y = target; y != start;) {
                std::size_t arc = pred[y];
                amount = std::min(amount, residual(arc));
                y = forward ? net_.head_[arc ^ 1] : net_.head_[arc];
            }
            for (NodeId y = target; y != start;) {
                std::size_t arc = pred[y];
                push(arc, amount);
                y = forward ? net_.head_[arc ^ 1] : net_.head_[arc];
            }
            if (forward) {
                excess[start] -= amount;
                if (target != s && target != t) excess[target] += amount;
            } else {
                excess[start] += amount;
            }
        }
        return true;
    };
    for (NodeId v = 0; v < n; ++v)
        if (excess[v] > kResidualEps && !route(v, true)) return false;
    for (NodeId v = 0; v < n; ++v)
        if (excess[v] < -kResidualEps && !route(v, false)) return false;
    return true;
}

bool MaxFlowSolver::bfs_levels(NodeId s, NodeId t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::vector<NodeId> queue{s};
    level_[s] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        NodeId x = queue[head];
        for (std::size_t i = net_.first_[x]; i < net_.first_[x + 1]; ++i) {
            std::size_t arc = net_.arcs_by_tail_[i];
            NodeId y = net_.head_[arc];
            if (level_[y] >= 0 || residual(arc) <= kResidualEps) continue;
            level_[y] = level_[x] + 1;
            queue.push_back(y);
        }
    }
    return level_[t] >= 0;
}

double MaxFlowSolver::augment(NodeId v, NodeId t, double limit) {
    if (v == t) return limit;
    for (std::size_t& i = cursor_[v]; i < net_.first_[v + 1]; ++i) {
        std::size_t arc = net_.arcs_by_tail_[i];
        NodeId y = net_.head_[arc];
        double r = residual(arc);
        if (level_[y] != level_[v] + 1 || r <= kResidualEps) continue;
        double pushed = augment(y, t, std::min(limit, r));
        if (pushed > 0.0) {
            push(arc, pushed);
            return pushed;
        }
    }
    return 0.0;
}

MinCut MaxFlowSolver::solve(NodeId s, NodeId t) {
    const std::size_t n = net_.node_count();
    if (s >= n || t >= n || s == t) throw ContractViolation("min cut needs distinct terminals");
    if (s != last_s_ || t != last_t_ || !rebalance(s, t)) {
        reset_flow();
    }
    last_s_ = s;
    last_t_ = t;

    while (bfs_levels(s, t)) {
        for (NodeId v = 0; v < n; ++v) cursor_[v] = net_.first_[v];
        while (augment(s, t, std::numeric_limits<double>::infinity()) > 0.0) {
        }
    }

    MinCut cut;
    cut.source_side = NodeSet(n);
    for (NodeId v = 0; v < n; ++v)
        if (level_[v] >= 0) cut.source_side.insert(v);
    cut.value = net_.cut_capacity(cut.source_side);
    return cut;
}

MinCut min_cut(const FlowNetwork& net, NodeId s, NodeId t) {
    MaxFlowSolver solver(net);
    return solver.solve(s, t);
}

MinCut min_cut_incremental(MaxFlowSolver& solver, NodeId s, NodeId t,
                           const std::vector<CapacityUpdate>& updates) {
    for (const auto& u : updates) solver.set_capacity(u.link, u.forward, u.backward);
    return solver.solve(s, t);
}

namespace {

std::vector<int> tree_depths(const std::vector<NodeId>& parent) {
    std::vector<int> depth(parent.size(), -1);
    for (NodeId v = 0; v < parent.size(); ++v) {
        std::vector<NodeId> chain;
        NodeId x = v;
        while (depth[x] < 0 && parent[x] != x) {
            chain.push_back(x);
            x = parent[x];
        }
        if (depth[x] < 0) depth[x] = 0;
        for (auto it = chain.rbegin(); it != chain.rend(); ++it) depth[*it] = depth[parent[*it]] + 1;
    }
    return depth;
}

}  // namespace

NodeId GomoryHuTree::bottleneck(NodeId u, NodeId v) const {
    if (u == v) throw ContractViolation("bottleneck of identical nodes");
    auto depth = tree_depths(parent);
    NodeId best = kNoNode;
    double best_value = std::numeric_limits<double>::infinity();
    auto consider = [&](NodeId child) {
        if (flow_value[child] < best_value || (flow_value[child] == best_value && child < best)) {
            best_value = flow_value[child];
            best = child;
        }
    };
    while (u != v) {
        if (depth[u] >= depth[v]) {
            consider(u);
            u = parent[u];
        } else {
            consider(v);
            v = parent[v];
        }
    }
    return best;
}

double GomoryHuTree::min_cut_value(NodeId u, NodeId v) const {
    return flow_value[bottleneck(u, v)];
}

NodeSet GomoryHuTree::min_cut_side(NodeId u, NodeId v) const {
    NodeId child = bottleneck(u, v);
    const std::size_t n = parent.size();
    // subtree of `child`
    NodeSet sub(n);
    std::vector<std::int8_t> state(n, -1);  // -1 unknown, 0 outside, 1 inside
    state[child] = 1;
    for (NodeId x = 0; x < n; ++x) {
        std::vector<NodeId> chain;
        NodeId y = x;
        while (state[y] < 0 && parent[y] != y) {
            chain.push_back(y);
            y = parent[y];
        }
        std::int8_t s = state[y] < 0 ? 0 : state[y];
        state[y] = s;
        for (NodeId c : chain) state[c] = s;
    }
    for (NodeId x = 0; x < n; ++x)
        if (state[x] == 1) sub.insert(x);
    return sub.contains(u) ? sub : sub.complement();
}

GomoryHuTree gomory_hu(const FlowNetwork& net) {
    const std::size_t n = net.node_count();
    GomoryHuTree tree;
    tree.parent.assign(n, 0);
    tree.flow_value.assign(n, 0.0);
    if (n == 0) return tree;
    MaxFlowSolver solver(net);
    for (NodeId s = 1; s < n; ++s) {
        NodeId t = tree.parent[s];
        solver.reset_flow();
        MinCut cut = solver.solve(s, t);
        tree.flow_value[s] = cut.value;
        for (NodeId i = 0; i < n; ++i)
            if (i != s && cut.source_side.contains(i) && tree.parent[i] == t) tree.parent[i] = s;
        if (cut.source_side.contains(tree.parent[t])) {
            tree.parent[s] = tree.parent[t];
            tree.parent[t] = s;
            tree.flow_value[s] = tree.flow_value[t];
            tree.flow_value[t] = cut.value;
        }
    }
    return tree;
}

}  // namespace persist
