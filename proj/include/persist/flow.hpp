#pragma once

#include <cstddef>
#include <vector>

#include "persist/graph.hpp"

namespace persist {

/// Residual capacities below this are treated as saturated.
inline constexpr double kResidualEps = 1e-12;

/**
 * Capacitated network over nodes 0..n-1. Each link is a pair of opposite arcs;
 * an undirected edge is a link with equal capacity in both directions.
 */
class FlowNetwork {
public:
    using LinkId = std::size_t;

    explicit FlowNetwork(std::size_t node_count = 0) : first_(node_count + 1, 0) {}

    std::size_t node_count() const { return first_.size() - 1; }
    std::size_t link_count() const { return head_.size() / 2; }

    LinkId add_edge(NodeId a, NodeId b, double capacity) { return add_link(a, b, capacity, capacity); }
    LinkId add_arc(NodeId a, NodeId b, double capacity) { return add_link(a, b, capacity, 0.0); }
    LinkId add_link(NodeId a, NodeId b, double forward, double backward);

    void set_capacity(LinkId link, double forward, double backward);
    double forward_capacity(LinkId link) const { return cap_[2 * link]; }
    double backward_capacity(LinkId link) const { return cap_[2 * link + 1]; }
    NodeId tail(LinkId link) const { return head_[2 * link + 1]; }
    NodeId head(LinkId link) const { return head_[2 * link]; }

    /// Total capacity of arcs leaving `side`.
    double cut_capacity(const NodeSet& side) const;

private:
    friend class MaxFlowSolver;
    void build_index() const;

    std::vector<NodeId> head_;   // arc -> head node; arc ^ 1 is the reverse arc
    std::vector<double> cap_;    // arc capacity
    mutable std::vector<std::size_t> first_;
    mutable std::vector<std::size_t> arcs_by_tail_;
    mutable bool indexed_ = false;
};

/// Network on the instance graph with capacity(e) per edge (both directions).
template <class CapacityFn>
FlowNetwork network_from(const ProblemInstance& inst, CapacityFn capacity) {
    FlowNetwork net(inst.node_count());
    for (EdgeId e = 0; e < inst.edge_count(); ++e)
        net.add_edge(inst.edge(e).u, inst.edge(e).v, capacity(e));
    return net;
}

struct MinCut {
    double value = 0.0;
    NodeSet source_side;  // the inclusion-minimal source side
};

/**
 * Exact s-t min cut that keeps its flow between solves. After capacity updates the
 * previous flow is clamped and rebalanced, then augmented to optimality, so repeated
 * queries on slowly changing networks reuse most of the work.
 */
class MaxFlowSolver {
public:
    explicit MaxFlowSolver(FlowNetwork net);

    const FlowNetwork& network() const { return net_; }
    void set_capacity(FlowNetwork::LinkId link, double forward, double backward);
    void reset_flow();

    MinCut solve(NodeId s, NodeId t);

private:
    bool rebalance(NodeId s, NodeId t);
    bool bfs_levels(NodeId s, NodeId t);
    double augment(NodeId v, NodeId t, double limit);
    double residual(std::size_t arc) const { return net_.cap_[arc] - flow_[arc]; }
    void push(std::size_t arc, double amount) {
        flow_[arc] += amount;
        flow_[arc ^ 1] -= amount;
    }

    FlowNetwork net_;
    std::vector<double> flow_;
    std::vector<int> level_;
    std::vector<std::size_t> cursor_;
    NodeId last_s_ = kNoNode;
    NodeId last_t_ = kNoNode;
};

MinCut min_cut(const FlowNetwork& net, NodeId s, NodeId t);

struct CapacityUpdate {
    FlowNetwork::LinkId link;
    double forward;
    double backward;
};

/// Applies the updates to `solver` and re-solves, reusing the flow it already holds.
MinCut min_cut_incremental(MaxFlowSolver& solver, NodeId s, NodeId t,
                           const std::vector<CapacityUpdate>& updates);

/// Cut tree: removing edge (v, parent[v]) splits the nodes into a minimum v-parent cut.
struct GomoryHuTree {
    std::vector<NodeId> parent;      // parent[root] == root
    std::vector<double> flow_value;  // min-cut value to the parent

    NodeId root() const { return 0; }
    /// Minimum u-v cut value (min over the tree path).
    double min_cut_value(NodeId u, NodeId v) const;
    /// Side containing u of the minimum u-v cut encoded by the tree.
    NodeSet min_cut_side(NodeId u, NodeId v) const;

    /// Tree edge (child node) of minimum value on the u-v path.
    NodeId bottleneck(NodeId u, NodeId v) const;
};

/// Gusfield's algorithm: n - 1 max-flow calls, no contraction. Expects an undirected network.
GomoryHuTree gomory_hu(const FlowNetwork& net);

}  // namespace persist
