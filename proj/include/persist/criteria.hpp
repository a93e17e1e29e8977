#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "persist/graph.hpp"
#include "persist/packing.hpp"

namespace persist {

enum class Criterion {
    edge_e1,            // multicut, theta_f >= 0, beta = 0
    edge_e2,            // multicut, theta_f < 0, beta = 1
    edge_e3,            // max-cut, beta = (1 - sign theta_f) / 2
    triangle,
    subgraph_mc,
    subgraph_maxcut,
    boundary_edge,      // positive-closure criterion on a single edge
    boundary_subgraph,  // positive-closure criterion on a larger subgraph
    gplus_decomp,
    rcf
};

std::string to_string(Criterion c);
Criterion criterion_from_string(const std::string& s);

/// Node set U with f in delta(U).
struct CutWitness {
    std::vector<NodeId> side;
};

/// The triangle (edge uw certified, v the third node) and the cuts U, W used for it.
struct TriangleWitness {
    NodeId u = kNoNode;
    NodeId v = kNoNode;
    NodeId w = kNoNode;
    std::vector<NodeId> cut_u;  // U with uv, uw in delta(U)
    std::vector<NodeId> cut_w;  // W with uw, vw in delta(W)
};

/// Subgraph H (by nodes, induced). For max-cut the instance is first switched on switch_side.
struct SubgraphWitness {
    std::vector<NodeId> nodes;
    std::vector<NodeId> switch_side;
    double lhs = 0.0;    // min cut (or max_alpha g) after the negative-slack correction
    double rhs = 0.0;    // the outer bound it is compared against
    double alpha = 0.0;  // bisection maximizer (max-cut only)
};

/// Reduced cost fixing: duality gap gamma and the reduced cost of the fixed edge.
struct GapWitness {
    double gamma = 0.0;
    double reduced_cost = 0.0;
    std::vector<NodeId> primal;  // multicut: cluster label per node; max-cut: switch side
};

/// Component label (smallest member) of every node in G+.
struct ComponentWitness {
    std::vector<NodeId> labels;
};

using Witness =
    std::variant<CutWitness, TriangleWitness, SubgraphWitness, GapWitness, ComponentWitness>;

struct PersistencyCertificate {
    EdgeId edge = kNoEdge;
    std::uint8_t beta = 0;
    Criterion criterion = Criterion::edge_e1;
    Witness witness;
    std::size_t round = 0;
};

/// Deterministic merge order: (edge id, criterion).
void sort_certificates(std::vector<PersistencyCertificate>& certs);

// ---- edge criterion ----------------------------------------------------------------------

/**
 * Edge criterion for every edge: first with U in {{u}, {v}}, then for the remaining edges with
 * the minimum u-v cut from a Gomory-Hu tree (|theta| weights, or G+ for the negative multicut
 * case). Witness cuts are reduced to the component of u, so they are connected.
 */
std::vector<PersistencyCertificate> edge_criterion_all(const ProblemInstance& inst);

/// Only the single-node cuts U in {{u}, {v}}.
std::vector<PersistencyCertificate> edge_criterion_simple(const ProblemInstance& inst);

/// Criterion tag and beta the edge criterion would use for f.
std::pair<Criterion, std::uint8_t> edge_criterion_kind(const ProblemInstance& inst, EdgeId f);

/// Replays the edge criterion for f with witness U (checks f in delta(U) and, for multicut,
/// connectivity of U).
bool check_edge_criterion(const ProblemInstance& inst, EdgeId f, const NodeSet& u);

// ---- triangle criterion ------------------------------------------------------------------

enum class TriangleCuts { simple, exact_flow };

/// Certificates x_e = 0 for the edges of one triangle.
std::vector<PersistencyCertificate> triangle_criterion(const ProblemInstance& inst,
                                                       const Triangle& t,
                                                       TriangleCuts mode = TriangleCuts::simple);

std::vector<PersistencyCertificate> triangle_criterion_all(const ProblemInstance& inst,
                                                           TriangleCuts mode = TriangleCuts::simple);

/// Replays a triangle witness for the edge uw.
bool check_triangle_criterion(const ProblemInstance& inst, NodeId u, NodeId v, NodeId w,
                              const NodeSet& cut_u, const NodeSet& cut_w);

// ---- subgraph criteria ---------------------------------------------------------------------

struct SubgraphResult {
    std::vector<PersistencyCertificate> certificates;
    std::string skipped;  // non-empty when the subgraph was not usable
};

/// Sum of |theta~| over the negative edges of h, subtracted from every packing based lower bound.
double negative_slack(const ProblemInstance& inst, const Subgraph& h, const ReducedCosts& reduced);

/// sum of theta over delta(V_H) intersected with E+.
double positive_boundary(const ProblemInstance& inst, const Subgraph& h);

/// Multicut subgraph criterion via a Gomory-Hu tree of (V_H, E_H, max(theta~, 0)).
SubgraphResult multicut_subgraph_criterion(const ProblemInstance& inst, const Subgraph& h,
                                           const DualPacking& packing);

/// Positive-closure refinement: the Gomory-Hu tree is built on H plus its positive boundary edges.
SubgraphResult boundary_refined_criterion(const ProblemInstance& inst, const Subgraph& h,
                                          const DualPacking& packing);

/// Explicit single-edge form of the refinement (no packing needed on a single edge).
std::optional<PersistencyCertificate> boundary_edge_criterion(const ProblemInstance& inst, EdgeId f);

struct MaxcutRelaxation {
    double best = 0.0;   // max over alpha of g(alpha) found by bisection
    double alpha = 0.0;  // where it was attained
    double outer = 0.0;  // B = sum of |theta| over delta(V_H)
    double slack = 0.0;  // negative_slack
    int evaluations = 0;
};

/// g(alpha) for the max-cut relaxation on h and edge uv.
double maxcut_relaxation_value(const ProblemInstance& inst, const Subgraph& h,
                               const ReducedCosts& reduced, EdgeId uv, double alpha);

/// Maximizes g over [0, 1] by bisection on the subgradient.
MaxcutRelaxation maxcut_relaxation(const ProblemInstance& inst, const Subgraph& h,
                                   const ReducedCosts& reduced, EdgeId uv);

std::optional<PersistencyCertificate> maxcut_subgraph_criterion(const ProblemInstance& inst,
                                                                const Subgraph& h,
                                                                const DualPacking& packing,
                                                                EdgeId uv);

/// All edges of h, with cheap Gomory-Hu based accept/reject tests before the bisection.
SubgraphResult maxcut_subgraph_criterion_all(const ProblemInstance& inst, const Subgraph& h,
                                             const DualPacking& packing);

// ---- G+ decomposition and reduced cost fixing ----------------------------------------------

struct GplusResult {
    std::vector<PersistencyCertificate> certificates;
    std::vector<NodeId> labels;  // component of (V, E+) per node
};

GplusResult gplus_decomposition(const ProblemInstance& inst);

/// x_f = 0 for every f in E+ with theta~_f > gamma + eps. Holds for all optima.
std::vector<PersistencyCertificate> reduced_cost_fixing(const ProblemInstance& inst,
                                                        const EdgeLabeling& primal,
                                                        const DualPacking& packing);

}  // namespace persist
