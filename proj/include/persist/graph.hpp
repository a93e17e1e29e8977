#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace persist {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr NodeId kNoNode = static_cast<NodeId>(-1);
inline constexpr EdgeId kNoEdge = static_cast<EdgeId>(-1);

/// Slack used when comparing the two sides of a persistency inequality.
inline constexpr double kCriterionEps = 1e-9;

/// A caller broke a documented precondition.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Operation not defined for the instance kind (e.g. switching a multicut instance).
class UnsupportedKind : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Malformed user input (files, parameters).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ProblemKind { multicut, maxcut };

std::string to_string(ProblemKind kind);
ProblemKind problem_kind_from_string(const std::string& s);

struct Edge {
    NodeId u;
    NodeId v;
    double weight;
};

struct Incidence {
    NodeId neighbor;
    EdgeId edge;
};

/// 0/1 label per edge, indexed like ProblemInstance::edges().
using EdgeLabeling = std::vector<std::uint8_t>;

/**
 * Weighted undirected simple graph together with the problem it encodes.
 *
 * Edges are stored canonically (u < v, sorted lexicographically), so an edge id
 * is the position in that sorted list. Parallel input edges are merged by
 * summing their weights; self-loops and non-finite weights are rejected.
 * Instances are immutable values; "mutating" operations return new instances.
 */
class ProblemInstance {
public:
    ProblemInstance() = default;

    static ProblemInstance from_edges(ProblemKind kind, std::size_t node_count,
                                      std::vector<Edge> edges, double objective_constant = 0.0);

    ProblemKind kind() const { return kind_; }
    std::size_t node_count() const { return node_count_; }
    std::size_t edge_count() const { return edges_.size(); }
    double objective_constant() const { return objective_constant_; }

    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(EdgeId e) const { return edges_.at(e); }
    double weight(EdgeId e) const { return edges_[e].weight; }

    std::span<const Incidence> neighbors(NodeId u) const {
        return {adjacency_.data() + offsets_[u], adjacency_.data() + offsets_[u + 1]};
    }
    std::size_t degree(NodeId u) const { return offsets_[u + 1] - offsets_[u]; }

    std::optional<EdgeId> find_edge(NodeId u, NodeId v) const;

    /// <theta, x>, without the objective constant.
    double objective(const EdgeLabeling& x) const;

    ProblemInstance with_weights(std::vector<double> weights, double objective_constant) const;

private:
    void build_adjacency();

    ProblemKind kind_ = ProblemKind::multicut;
    std::size_t node_count_ = 0;
    std::vector<Edge> edges_;
    double objective_constant_ = 0.0;
    std::vector<std::size_t> offsets_{0};
    std::vector<Incidence> adjacency_;
};

/// Membership set over the node ids of one instance.
class NodeSet {
public:
    NodeSet() = default;
    explicit NodeSet(std::size_t node_count) : member_(node_count, 0) {}
    NodeSet(std::size_t node_count, std::initializer_list<NodeId> nodes);
    static NodeSet from_nodes(std::size_t node_count, std::span<const NodeId> nodes);

    std::size_t universe() const { return member_.size(); }
    bool contains(NodeId v) const { return v < member_.size() && member_[v] != 0; }
    void insert(NodeId v) { member_.at(v) = 1; }
    void erase(NodeId v) { member_.at(v) = 0; }
    std::size_t size() const;
    bool empty() const { return size() == 0; }
    std::vector<NodeId> nodes() const;
    NodeSet complement() const;

    friend bool operator==(const NodeSet&, const NodeSet&) = default;

private:
    std::vector<std::uint8_t> member_;
};

/// Connected subgraph H = (V_H, E_H). Criteria require E_H to be the induced edge set.
struct Subgraph {
    std::vector<NodeId> nodes;  // sorted
    std::vector<EdgeId> edges;  // sorted
};

Subgraph induced_subgraph(const ProblemInstance& inst, std::vector<NodeId> nodes);
bool is_induced(const ProblemInstance& inst, const Subgraph& h);

/// Edges with one endpoint in `a` and the other in `b`, ascending id. Throws if a, b overlap.
std::vector<EdgeId> delta(const ProblemInstance& inst, const NodeSet& a, const NodeSet& b);
/// delta(a, V \ a).
std::vector<EdgeId> delta(const ProblemInstance& inst, const NodeSet& a);

bool is_feasible(const ProblemInstance& inst, const EdgeLabeling& x);
bool is_feasible(const ProblemInstance& inst, ProblemKind kind, const EdgeLabeling& x);

/// Incidence vector of delta(U).
EdgeLabeling cut_labeling(const ProblemInstance& inst, const NodeSet& u);
/// Multicut induced by a node labeling (labels[v] = cluster id).
EdgeLabeling partition_labeling(const ProblemInstance& inst, std::span<const NodeId> labels);

/// One side of a feasible cut labeling, node 0 of every connected component on side 0.
NodeSet cut_side(const ProblemInstance& inst, const EdgeLabeling& x);

struct ContractionRecord {
    std::vector<NodeId> node_map;  // old node -> new node
    std::vector<EdgeId> edge_map;  // old edge -> new edge, kNoEdge when it became a self-loop
    double dropped_self_loop_weight = 0.0;
};

/// Merge the endpoints of `e`; the merged node keeps the smaller id, later ids shift down.
std::pair<ProblemInstance, ContractionRecord> contract_edge(const ProblemInstance& inst, EdgeId e);

/// Quotient by an arbitrary node labeling (labels need not be dense).
std::pair<ProblemInstance, ContractionRecord> contract_partition(const ProblemInstance& inst,
                                                                 std::span<const NodeId> labels);

struct Triangle {
    EdgeId ab;
    EdgeId ac;
    EdgeId bc;
    NodeId a;
    NodeId b;
    NodeId c;  // a < b < c
};

std::vector<Triangle> enumerate_triangles(const ProblemInstance& inst);

/// Component label per node; the label is the smallest node id in the component.
std::vector<NodeId> connected_components(const ProblemInstance& inst,
                                         const std::function<bool(EdgeId)>& keep_edge);

/// Groups nodes by component label, groups ordered by representative.
std::vector<std::vector<NodeId>> component_groups(std::span<const NodeId> labels);

/// Nodes of `set` reachable from `start` through edges with both ends in `set`.
NodeSet component_within(const ProblemInstance& inst, const NodeSet& set, NodeId start);
bool is_connected_set(const ProblemInstance& inst, const NodeSet& set);

/// Union-find with path halving and union by size.
class DisjointSets {
public:
    explicit DisjointSets(std::size_t n);
    NodeId find(NodeId x);
    bool unite(NodeId a, NodeId b);
    std::size_t set_size(NodeId x) { return size_[find(x)]; }

private:
    std::vector<NodeId> parent_;
    std::vector<std::size_t> size_;
};

}  // namespace persist
