#include "persist/graph.hpp"

#include <algorithm>
#include <array>
#include <tuple>
#include <cmath>
#include <numeric>
#include <queue>

namespace persist {

std::string to_string(ProblemKind kind) {
    return kind == ProblemKind::multicut ? "multicut" : "maxcut";
}

ProblemKind problem_kind_from_string(const std::string& s) {
    if (s == "multicut") return ProblemKind::multicut;
    if (s == "maxcut") return ProblemKind::maxcut;
    throw InputError("unknown problem kind '" + s + "'");
}

ProblemInstance ProblemInstance::from_edges(ProblemKind kind, std::size_t node_count,
                                            std::vector<Edge> edges, double objective_constant) {
    if (node_count >= kNoNode) throw ContractViolation("node count too large");
    for (auto& e : edges) {
        if (e.u >= node_count || e.v >= node_count)
            throw ContractViolation("edge endpoint out of range");
        if (e.u == e.v) throw ContractViolation("self-loop at node " + std::to_string(e.u));
        if (!std::isfinite(e.weight)) throw ContractViolation("non-finite edge weight");
        if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::stable_sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    std::vector<Edge> merged;
    merged.reserve(edges.size());
    for (const auto& e : edges) {
        if (!merged.empty() && merged.back().u == e.u && merged.back().v == e.v)
            merged.back().weight += e.weight;
        else
            merged.push_back(e);
    }

    ProblemInstance inst;
    inst.kind_ = kind;
    inst.node_count_ = node_count;
    inst.edges_ = std::move(merged);
    inst.objective_constant_ = objective_constant;
    inst.build_adjacency();
    return inst;
}

void ProblemInstance::build_adjacency() {
    offsets_.assign(node_count_ + 1, 0);
    for (const auto& e : edges_) {
        ++offsets_[e.u + 1];
        ++offsets_[e.v + 1];
    }
    for (std::size_t i = 0; i < node_count_; ++i) offsets_[i + 1] += offsets_[i];
    adjacency_.resize(2 * edges_.size());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (EdgeId id = 0; id < edges_.size(); ++id) {
        const auto& e = edges_[id];
        adjacency_[fill[e.u]++] = {e.v, id};
        adjacency_[fill[e.v]++] = {e.u, id};
    }
    // edges are sorted by (u, v), so each list is already ordered by neighbor except for the
    // interleaving of lower and higher neighbors
    for (std::size_t i = 0; i < node_count_; ++i) {
        std::sort(adjacency_.begin() + offsets_[i], adjacency_.begin() + offsets_[i + 1],
                  [](const Incidence& a, const Incidence& b) { return a.neighbor < b.neighbor; });
    }
}

std::optional<EdgeId> ProblemInstance::find_edge(NodeId u, NodeId v) const {
    if (u >= node_count_ || v >= node_count_ || u == v) return std::nullopt;
    auto nb = neighbors(u);
    auto it = std::lower_bound(nb.begin(), nb.end(), v,
                               [](const Incidence& a, NodeId x) { return a.neighbor < x; });
    if (it != nb.end() && it->neighbor == v) return it->edge;
    return std::nullopt;
}

double ProblemInstance::objective(const EdgeLabeling& x) const {
    if (x.size() != edges_.size()) throw ContractViolation("labeling size mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < edges_.size(); ++i)
        if (x[i]) total += edges_[i].weight;
    return total;
}

ProblemInstance ProblemInstance::with_weights(std::vector<double> weights,
                                              double objective_constant) const {
    if (weights.size() != edges_.size()) throw ContractViolation("weight vector size mismatch");
    ProblemInstance copy = *this;
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        if (!std::isfinite(weights[i])) throw ContractViolation("non-finite edge weight");
        copy.edges_[i].weight = weights[i];
    }
    copy.objective_constant_ = objective_constant;
    return copy;
}

NodeSet::NodeSet(std::size_t node_count, std::initializer_list<NodeId> nodes)
    : member_(node_count, 0) {
    for (NodeId v : nodes) insert(v);
}

NodeSet NodeSet::from_nodes(std::size_t node_count, std::span<const NodeId> nodes) {
    NodeSet s(node_count);
    for (NodeId v : nodes) s.insert(v);
    return s;
}

std::size_t NodeSet::size() const {
    return static_cast<std::size_t>(std::count(member_.begin(), member_.end(), 1));
}

std::vector<NodeId> NodeSet::nodes() const {
    std::vector<NodeId> out;
    for (NodeId v = 0; v < member_.size(); ++v)
        if (member_[v]) out.push_back(v);
    return out;
}

NodeSet NodeSet::complement() const {
    NodeSet c(member_.size());
    for (NodeId v = 0; v < member_.size(); ++v)
        if (!member_[v]) c.insert(v);
    return c;
}

Subgraph induced_subgraph(const ProblemInstance& inst, std::vector<NodeId> nodes) {
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    NodeSet in = NodeSet::from_nodes(inst.node_count(), nodes);
    Subgraph h;
    for (NodeId u : nodes)
        for (const auto& inc : inst.neighbors(u))
            if (inc.neighbor > u && in.contains(inc.neighbor)) h.edges.push_back(inc.edge);
    std::sort(h.edges.begin(), h.edges.end());
    h.nodes = std::move(nodes);
    return h;
}

bool is_induced(const ProblemInstance& inst, const Subgraph& h) {
    return induced_subgraph(inst, h.nodes).edges == h.edges;
}

std::vector<EdgeId> delta(const ProblemInstance& inst, const NodeSet& a, const NodeSet& b) {
    std::vector<EdgeId> out;
    for (NodeId v = 0; v < inst.node_count(); ++v)
        if (a.contains(v) && b.contains(v)) throw ContractViolation("delta: node sets overlap");
    for (EdgeId id = 0; id < inst.edge_count(); ++id) {
        const auto& e = inst.edge(id);
        if ((a.contains(e.u) && b.contains(e.v)) || (a.contains(e.v) && b.contains(e.u)))
            out.push_back(id);
    }
    return out;
}

std::vector<EdgeId> delta(const ProblemInstance& inst, const NodeSet& a) {
    std::vector<EdgeId> out;
    for (EdgeId id = 0; id < inst.edge_count(); ++id) {
        const auto& e = inst.edge(id);
        if (a.contains(e.u) != a.contains(e.v)) out.push_back(id);
    }
    return out;
}

namespace {

// Component id of every node w.r.t. the 0-labeled edges.
std::vector<NodeId> zero_components(const ProblemInstance& inst, const EdgeLabeling& x) {
    return connected_components(inst, [&](EdgeId e) { return x[e] == 0; });
}

}  // namespace

bool is_feasible(const ProblemInstance& inst, ProblemKind kind, const EdgeLabeling& x) {
    if (x.size() != inst.edge_count()) throw ContractViolation("labeling size mismatch");
    if (kind == ProblemKind::multicut) {
        auto comp = zero_components(inst, x);
        for (EdgeId id = 0; id < inst.edge_count(); ++id) {
            const auto& e = inst.edge(id);
            if (x[id] && comp[e.u] == comp[e.v]) return false;
        }
        return true;
    }
    // maxcut: propagate parity along a BFS forest, then check every edge
    std::vector<int> side(inst.node_count(), -1);
    std::vector<NodeId> queue;
    for (NodeId root = 0; root < inst.node_count(); ++root) {
        if (side[root] >= 0) continue;
        side[root] = 0;
        queue.assign(1, root);
        for (std::size_t head = 0; head < queue.size(); ++head) {
            NodeId a = queue[head];
            for (const auto& inc : inst.neighbors(a)) {
                if (side[inc.neighbor] >= 0) continue;
                side[inc.neighbor] = side[a] ^ (x[inc.edge] ? 1 : 0);
                queue.push_back(inc.neighbor);
            }
        }
    }
    for (EdgeId id = 0; id < inst.edge_count(); ++id) {
        const auto& e = inst.edge(id);
        if ((side[e.u] != side[e.v]) != (x[id] != 0)) return false;
    }
    return true;
}

bool is_feasible(const ProblemInstance& inst, const EdgeLabeling& x) {
    return is_feasible(inst, inst.kind(), x);
}

EdgeLabeling cut_labeling(const ProblemInstance& inst, const NodeSet& u) {
    EdgeLabeling x(inst.edge_count(), 0);
    for (EdgeId id = 0; id < inst.edge_count(); ++id) {
        const auto& e = inst.edge(id);
        x[id] = u.contains(e.u) != u.contains(e.v) ? 1 : 0;
    }
    return x;
}

EdgeLabeling partition_labeling(const ProblemInstance& inst, std::span<const NodeId> labels) {
    if (labels.size() != inst.node_count()) throw ContractViolation("partition size mismatch");
    EdgeLabeling x(inst.edge_count(), 0);
    for (EdgeId id = 0; id < inst.edge_count(); ++id) {
        const auto& e = inst.edge(id);
        x[id] = labels[e.u] != labels[e.v] ? 1 : 0;
    }
    return x;
}

NodeSet cut_side(const ProblemInstance& inst, const EdgeLabeling& x) {
    if (!is_feasible(inst, ProblemKind::maxcut, x))
        throw ContractViolation("cut_side: labeling is not a cut");
    NodeSet side(inst.node_count());
    std::vector<std::uint8_t> seen(inst.node_count(), 0);
    std::vector<NodeId> queue;
    for (NodeId root = 0; root < inst.node_count(); ++root) {
        if (seen[root]) continue;
        seen[root] = 1;
        queue.assign(1, root);
        for (std::size_t head = 0; head < queue.size(); ++head) {
            NodeId a = queue[head];
            for (const auto& inc : inst.neighbors(a)) {
                if (seen[inc.neighbor]) continue;
                seen[inc.neighbor] = 1;
                if (side.contains(a) != (x[inc.edge] != 0)) side.insert(inc.neighbor);
                queue.push_back(inc.neighbor);
            }
        }
    }
    return side;
}

std::pair<ProblemInstance, ContractionRecord> contract_partition(const ProblemInstance& inst,
                                                                 std::span<const NodeId> labels) {
    if (labels.size() != inst.node_count()) throw ContractViolation("partition size mismatch");
    // dense relabeling in order of each block's smallest member
    std::vector<NodeId> sorted_labels(labels.begin(), labels.end());
    std::sort(sorted_labels.begin(), sorted_labels.end());
    sorted_labels.erase(std::unique(sorted_labels.begin(), sorted_labels.end()),
                        sorted_labels.end());
    std::vector<NodeId> first_member(sorted_labels.size(), kNoNode);
    auto index_of = [&](NodeId label) {
        return static_cast<std::size_t>(
            std::lower_bound(sorted_labels.begin(), sorted_labels.end(), label) -
            sorted_labels.begin());
    };
    for (NodeId v = 0; v < inst.node_count(); ++v) {
        auto i = index_of(labels[v]);
        if (first_member[i] == kNoNode) first_member[i] = v;
    }
    std::vector<std::size_t> by_first(sorted_labels.size());
    std::iota(by_first.begin(), by_first.end(), 0);
    std::sort(by_first.begin(), by_first.end(),
              [&](std::size_t a, std::size_t b) { return first_member[a] < first_member[b]; });
    std::vector<NodeId> new_id(sorted_labels.size());
    for (std::size_t rank = 0; rank < by_first.size(); ++rank)
        new_id[by_first[rank]] = static_cast<NodeId>(rank);

    ContractionRecord rec;
    rec.node_map.resize(inst.node_count());
    for (NodeId v = 0; v < inst.node_count(); ++v) rec.node_map[v] = new_id[index_of(labels[v])];

    std::vector<Edge> edges;
    std::vector<std::pair<NodeId, NodeId>> keys(inst.edge_count());
    for (EdgeId id = 0; id < inst.edge_count(); ++id) {
        const auto& e = inst.edge(id);
        NodeId a = rec.node_map[e.u], b = rec.node_map[e.v];
        if (a == b) {
            rec.dropped_self_loop_weight += e.weight;
            keys[id] = {kNoNode, kNoNode};
            continue;
        }
        if (a > b) std::swap(a, b);
        keys[id] = {a, b};
        edges.push_back({a, b, e.weight});
    }
    auto out = ProblemInstance::from_edges(inst.kind(), sorted_labels.size(), std::move(edges),
                                           inst.objective_constant());
    rec.edge_map.resize(inst.edge_count());
    for (EdgeId id = 0; id < inst.edge_count(); ++id) {
        if (keys[id].first == kNoNode)
            rec.edge_map[id] = kNoEdge;
        else
            rec.edge_map[id] = *out.find_edge(keys[id].first, keys[id].second);
    }
    return {std::move(out), std::move(rec)};
}

std::pair<ProblemInstance, ContractionRecord> contract_edge(const ProblemInstance& inst, EdgeId e) {
    if (e >= inst.edge_count()) throw ContractViolation("contract_edge: no such edge");
    std::vector<NodeId> labels(inst.node_count());
    std::iota(labels.begin(), labels.end(), 0);
    labels[inst.edge(e).v] = inst.edge(e).u;
    return contract_partition(inst, labels);
}

std::vector<Triangle> enumerate_triangles(const ProblemInstance& inst) {
    // orient each edge towards the endpoint of higher (degree, id) rank; every triangle is then
    // found exactly once from its lowest-ranked node
    const std::size_t n = inst.node_count();
    auto rank_less = [&](NodeId a, NodeId b) {
        auto da = inst.degree(a), db = inst.degree(b);
        return da != db ? da < db : a < b;
    };
    std::vector<std::vector<Incidence>> out(n);
    for (NodeId u = 0; u < n; ++u)
        for (const auto& inc : inst.neighbors(u))
            if (rank_less(u, inc.neighbor)) out[u].push_back(inc);

    std::vector<EdgeId> mark(n, kNoEdge);
    std::vector<Triangle> tris;
    for (NodeId u = 0; u < n; ++u) {
        for (const auto& inc : out[u]) mark[inc.neighbor] = inc.edge;
        for (const auto& vw : out[u]) {
            NodeId v = vw.neighbor;
            for (const auto& wx : out[v]) {
                NodeId w = wx.neighbor;
                if (mark[w] == kNoEdge) continue;
                // edges: uv = vw.edge, vw = wx.edge, uw = mark[w]
                auto edge_of = [&](NodeId x, NodeId y) -> EdgeId {
                    if ((x == u && y == v) || (x == v && y == u)) return vw.edge;
                    if ((x == v && y == w) || (x == w && y == v)) return wx.edge;
                    return mark[w];
                };
                std::array<NodeId, 3> s{u, v, w};
                std::sort(s.begin(), s.end());
                tris.push_back({edge_of(s[0], s[1]), edge_of(s[0], s[2]), edge_of(s[1], s[2]),
                                s[0], s[1], s[2]});
            }
        }
        for (const auto& inc : out[u]) mark[inc.neighbor] = kNoEdge;
    }
    std::sort(tris.begin(), tris.end(), [](const Triangle& x, const Triangle& y) {
        return std::tie(x.a, x.b, x.c) < std::tie(y.a, y.b, y.c);
    });
    return tris;
}

std::vector<NodeId> connected_components(const ProblemInstance& inst,
                                         const std::function<bool(EdgeId)>& keep_edge) {
    const std::size_t n = inst.node_count();
    std::vector<NodeId> label(n, kNoNode);
    std::vector<NodeId> queue;
    for (NodeId root = 0; root < n; ++root) {
        if (label[root] != kNoNode) continue;
        label[root] = root;
        queue.assign(1, root);
        for (std::size_t head = 0; head < queue.size(); ++head) {
            NodeId a = queue[head];
            for (const auto& inc : inst.neighbors(a)) {
                if (label[inc.neighbor] != kNoNode || !keep_edge(inc.edge)) continue;
                label[inc.neighbor] = root;
                queue.push_back(inc.neighbor);
            }
        }
    }
    return label;
}

std::vector<std::vector<NodeId>> component_groups(std::span<const NodeId> labels) {
    std::vector<std::vector<NodeId>> groups;
    std::vector<std::size_t> slot(labels.size(), static_cast<std::size_t>(-1));
    for (NodeId v = 0; v < labels.size(); ++v) {
        NodeId rep = labels[v];
        if (slot[rep] == static_cast<std::size_t>(-1)) {
            slot[rep] = groups.size();
            groups.emplace_back();
        }
        groups[slot[rep]].push_back(v);
    }
    return groups;
}

NodeSet component_within(const ProblemInstance& inst, const NodeSet& set, NodeId start) {
    NodeSet comp(inst.node_count());
    if (!set.contains(start)) return comp;
    comp.insert(start);
    std::vector<NodeId> queue{start};
    for (std::size_t head = 0; head < queue.size(); ++head) {
        for (const auto& inc : inst.neighbors(queue[head])) {
            if (!set.contains(inc.neighbor) || comp.contains(inc.neighbor)) continue;
            comp.insert(inc.neighbor);
            queue.push_back(inc.neighbor);
        }
    }
    return comp;
}

bool is_connected_set(const ProblemInstance& inst, const NodeSet& set) {
    auto nodes = set.nodes();
    if (nodes.empty()) return true;
    return component_within(inst, set, nodes.front()).size() == nodes.size();
}

DisjointSets::DisjointSets(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), 0);
}

NodeId DisjointSets::find(NodeId x) {
    while (parent_[x] != x) {
        parent_[x] = parent_[parent_[x]];
        x = parent_[x];
    }
    return x;
}

bool DisjointSets::unite(NodeId a, NodeId b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
}

}  // namespace persist
