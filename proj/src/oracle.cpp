#include "persist/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "persist/mappings.hpp"

namespace persist {

double oracle_tolerance(double value) { return 1e-9 * (1.0 + std::abs(value)); }

namespace {

Optima collect(const ProblemInstance& inst, const std::vector<EdgeLabeling>& feasible) {
    Optima out;
    bool first = true;
    for (const auto& x : feasible) {
        double v = inst.objective(x);
        if (first || v < out.value - oracle_tolerance(out.value)) {
            out.value = v;
            first = false;
        }
    }
    for (const auto& x : feasible)
        if (inst.objective(x) <= out.value + oracle_tolerance(out.value)) out.solutions.push_back(x);
    std::sort(out.solutions.begin(), out.solutions.end());
    out.solutions.erase(std::unique(out.solutions.begin(), out.solutions.end()), out.solutions.end());
    return out;
}

}  // namespace

std::vector<EdgeLabeling> enumerate_feasible(const ProblemInstance& inst) {
    const std::size_t n = inst.node_count();
    std::vector<EdgeLabeling> out;
    if (inst.kind() == ProblemKind::multicut) {
        if (n > kOracleMaxMulticutNodes) throw ContractViolation("oracle: too many nodes for multicut");
        if (n == 0) return {EdgeLabeling{}};
        // restricted growth strings a[0] = 0, a[i] <= 1 + max(a[0..i-1])
        std::vector<NodeId> a(n, 0), maxima(n, 0);
        while (true) {
            out.push_back(partition_labeling(inst, a));
            std::size_t i = n - 1;
            while (i > 0 && a[i] == maxima[i - 1] + 1) --i;
            if (i == 0) break;
            ++a[i];
            maxima[i] = std::max(maxima[i - 1], a[i]);
            for (std::size_t j = i + 1; j < n; ++j) {
                a[j] = 0;
                maxima[j] = maxima[i];
            }
        }
    } else {
        if (n > kOracleMaxMaxcutNodes) throw ContractViolation("oracle: too many nodes for max-cut");
        if (n == 0) return {EdgeLabeling{}};
        const std::uint64_t count = std::uint64_t{1} << (n - 1);
        for (std::uint64_t mask = 0; mask < count; ++mask) {
            NodeSet side(n);
            for (NodeId v = 1; v < n; ++v)
                if (mask >> (v - 1) & 1) side.insert(v);
            out.push_back(cut_labeling(inst, side));
        }
    }
    // different partitions of disconnected graphs can induce the same labeling
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Optima enumerate_optima(const ProblemInstance& inst) { return collect(inst, enumerate_feasible(inst)); }

Optima enumerate_optima_by_labelings(const ProblemInstance& inst) {
    const std::size_t m = inst.edge_count();
    if (m > 24) throw ContractViolation("oracle: too many edges for labeling enumeration");
    std::vector<EdgeLabeling> feasible;
    EdgeLabeling x(m, 0);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        for (std::size_t e = 0; e < m; ++e) x[e] = mask >> e & 1;
        if (is_feasible(inst, x)) feasible.push_back(x);
    }
    return collect(inst, feasible);
}

bool verify_certificate(const ProblemInstance& inst, const Optima& optima,
                        const PersistencyCertificate& cert) {
    if (cert.edge >= inst.edge_count()) return false;
    auto has = [&](const EdgeLabeling& x) { return x[cert.edge] == cert.beta; };
    if (cert.criterion == Criterion::rcf)
        return std::all_of(optima.solutions.begin(), optima.solutions.end(), has);
    return std::any_of(optima.solutions.begin(), optima.solutions.end(), has);
}

bool verify_certificate(const ProblemInstance& inst, const PersistencyCertificate& cert) {
    return verify_certificate(inst, enumerate_optima(inst), cert);
}

bool verify_joint(const ProblemInstance& inst, const Optima& optima,
                  const std::vector<std::pair<EdgeId, std::uint8_t>>& fixed) {
    for (const auto& [e, b] : fixed)
        if (e >= inst.edge_count()) return false;
    return std::any_of(optima.solutions.begin(), optima.solutions.end(), [&](const EdgeLabeling& x) {
        return std::all_of(fixed.begin(), fixed.end(),
                           [&](const auto& fb) { return x[fb.first] == fb.second; });
    });
}

bool verify_improving(const ProblemInstance& inst, const LabelingMap& p, EdgeId f, std::uint8_t beta) {
    for (const auto& x : enumerate_feasible(inst)) {
        if (x[f] == beta) continue;
        EdgeLabeling z = p(x);
        if (z.size() != x.size() || !is_feasible(inst, z)) return false;
        if (z[f] != beta) return false;
        double before = inst.objective(x), after = inst.objective(z);
        if (after > before + oracle_tolerance(before)) return false;
    }
    return true;
}

namespace {

// p_U: the elementary join of U.
EdgeLabeling join(const ProblemInstance& inst, const EdgeLabeling& x, std::initializer_list<NodeId> nodes) {
    return join_mapping(inst, x, NodeSet(inst.node_count(), nodes));
}

}  // namespace

LabelingMap edge_proof_mapping(const ProblemInstance& inst, EdgeId f, const NodeSet& u) {
    auto [crit, beta] = edge_criterion_kind(inst, f);
    return [&inst, f, u, crit = crit, beta = beta](const EdgeLabeling& x) {
        if (x[f] == beta) return x;
        const Edge& e = inst.edge(f);
        switch (crit) {
            case Criterion::edge_e1: return join(inst, cut_mapping(inst, x, u), {e.u, e.v});
            case Criterion::edge_e2: return cut_mapping(inst, x, u);
            default: return sym_diff_mapping(inst, x, u);
        }
    };
}

LabelingMap triangle_proof_mapping(const ProblemInstance& inst, NodeId u, NodeId v, NodeId w,
                                   const NodeSet& cut_u, const NodeSet& cut_w) {
    EdgeId uw = *inst.find_edge(u, w), uv = *inst.find_edge(u, v), vw = *inst.find_edge(v, w);
    return [&inst, u, v, w, uw, uv, vw, cut_u, cut_w](const EdgeLabeling& x) {
        if (x[uw] == 0) return x;
        const bool multicut = inst.kind() == ProblemKind::multicut;
        if (x[uv] == 1 && x[vw] == 0) {
            if (!multicut) return sym_diff_mapping(inst, x, cut_u);
            return join(inst, cut_mapping(inst, x, cut_u), {u, w});
        }
        if (x[uv] == 0 && x[vw] == 1) {
            if (!multicut) return sym_diff_mapping(inst, x, cut_w);
            return join(inst, cut_mapping(inst, x, cut_w), {u, w});
        }
        // all three cut (only feasible for multicut)
        NodeSet tri(inst.node_count(), {u, v, w});
        return join(inst, cut_mapping(inst, x, tri), {u, v, w});
    };
}

LabelingMap multicut_subgraph_proof_mapping(const ProblemInstance& inst, const Subgraph& h,
                                            EdgeId uv) {
    NodeSet vh = NodeSet::from_nodes(inst.node_count(), h.nodes);
    return [&inst, vh, uv](const EdgeLabeling& x) {
        if (x[uv] == 0) return x;
        return join_mapping(inst, cut_mapping(inst, x, vh), vh);
    };
}

LabelingMap maxcut_subgraph_proof_mapping(const ProblemInstance& inst, const Subgraph& h, EdgeId uv) {
    NodeSet vh = NodeSet::from_nodes(inst.node_count(), h.nodes);
    return [&inst, vh, uv](const EdgeLabeling& x) {
        if (x[uv] == 0) return x;
        const std::size_t n = inst.node_count();
        NodeSet side = cut_side(inst, x);
        NodeId u = inst.edge(uv).u;
        NodeSet in_u(n), rest(n);  // U and V_H \ U
        for (NodeId a = 0; a < n; ++a) {
            if (!vh.contains(a)) continue;
            (side.contains(a) == side.contains(u) ? in_u : rest).insert(a);
        }
        double inner = 0.0, outer_u = 0.0;
        for (EdgeId e : delta(inst, in_u)) {
            const Edge& ed = inst.edge(e);
            NodeId other = in_u.contains(ed.u) ? ed.v : ed.u;
            if (vh.contains(other))
                inner += inst.weight(e);
            else
                outer_u += std::abs(inst.weight(e));
        }
        return sym_diff_mapping(inst, x, inner >= outer_u ? in_u : rest);
    };
}

}  // namespace persist
