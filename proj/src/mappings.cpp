#include "persist/mappings.hpp"

namespace persist {

namespace {

void require_multicut_premise(const ProblemInstance& inst, const EdgeLabeling& x,
                              const NodeSet& u) {
    if (!is_feasible(inst, ProblemKind::multicut, x))
        throw ContractViolation("mapping input is not a multicut");
    if (u.universe() != inst.node_count()) throw ContractViolation("node set size mismatch");
    if (!is_connected_set(inst, u)) throw ContractViolation("node set is not connected");
}

}  // namespace

EdgeLabeling cut_mapping(const ProblemInstance& inst, const EdgeLabeling& x, const NodeSet& u) {
    require_multicut_premise(inst, x, u);
    EdgeLabeling out = x;
    for (EdgeId e : delta(inst, u)) out[e] = 1;
    return out;
}

EdgeLabeling join_mapping(const ProblemInstance& inst, const EdgeLabeling& x, const NodeSet& u) {
    require_multicut_premise(inst, x, u);
    DisjointSets sets(inst.node_count());
    for (EdgeId id = 0; id < inst.edge_count(); ++id) {
        const auto& e = inst.edge(id);
        if (x[id] == 0 || (u.contains(e.u) && u.contains(e.v))) sets.unite(e.u, e.v);
    }
    EdgeLabeling out = x;
    for (EdgeId id = 0; id < inst.edge_count(); ++id) {
        const auto& e = inst.edge(id);
        if (sets.find(e.u) == sets.find(e.v)) out[id] = 0;
    }
    return out;
}

EdgeLabeling sym_diff_mapping(const ProblemInstance& inst, const EdgeLabeling& x,
                              const NodeSet& u) {
    if (!is_feasible(inst, ProblemKind::maxcut, x))
        throw ContractViolation("mapping input is not a cut");
    if (u.universe() != inst.node_count()) throw ContractViolation("node set size mismatch");
    EdgeLabeling out = x;
    for (EdgeId e : delta(inst, u)) out[e] ^= 1;
    return out;
}

std::pair<ProblemInstance, SwitchRecord> switch_instance(const ProblemInstance& inst,
                                                         const EdgeLabeling& y) {
    if (inst.kind() != ProblemKind::maxcut)
        throw UnsupportedKind("switching is only defined for max-cut instances");
    if (!is_feasible(inst, ProblemKind::maxcut, y))
        throw ContractViolation("switching labeling is not a cut");
    std::vector<double> w(inst.edge_count());
    SwitchRecord rec{cut_side(inst, y), 0.0};
    for (EdgeId e = 0; e < inst.edge_count(); ++e) {
        w[e] = y[e] ? -inst.weight(e) : inst.weight(e);
        if (y[e]) rec.constant_delta += inst.weight(e);
    }
    auto out = inst.with_weights(std::move(w), inst.objective_constant() + rec.constant_delta);
    return {std::move(out), std::move(rec)};
}

}  // namespace persist
