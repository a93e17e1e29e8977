#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "persist/criteria.hpp"
#include "persist/graph.hpp"

namespace persist {

inline constexpr std::size_t kOracleMaxMulticutNodes = 10;
inline constexpr std::size_t kOracleMaxMaxcutNodes = 20;

struct Optima {
    double value = 0.0;                   // min <theta, x> (without the objective constant)
    std::vector<EdgeLabeling> solutions;  // all optimal labelings, lexicographically sorted
};

/// Tolerance used to decide whether two objective values tie.
double oracle_tolerance(double value);

/// Exhaustive optimum: restricted-growth partitions (multicut) or 2^(n-1) cuts (max-cut).
Optima enumerate_optima(const ProblemInstance& inst);

/// Second path: every 0/1 labeling filtered by is_feasible. Needs m <= 24.
Optima enumerate_optima_by_labelings(const ProblemInstance& inst);

/// Every feasible labeling of the instance (multicut partitions or cuts), deduplicated.
std::vector<EdgeLabeling> enumerate_feasible(const ProblemInstance& inst);

/// Some optimum has x_f = beta; for reduced cost fixing every optimum must.
bool verify_certificate(const ProblemInstance& inst, const PersistencyCertificate& cert);
bool verify_certificate(const ProblemInstance& inst, const Optima& optima,
                        const PersistencyCertificate& cert);

/// Some optimum satisfies every (edge, beta) pair simultaneously.
bool verify_joint(const ProblemInstance& inst, const Optima& optima,
                  const std::vector<std::pair<EdgeId, std::uint8_t>>& fixed);

using LabelingMap = std::function<EdgeLabeling(const EdgeLabeling&)>;

/**
 * For every feasible x with x_f != beta: p(x) is feasible, <theta, p(x)> <= <theta, x> and
 * p(x)_f = beta. Exhaustive over the feasible set.
 */
bool verify_improving(const ProblemInstance& inst, const LabelingMap& p, EdgeId f, std::uint8_t beta);

// Mappings used in the persistency proofs. Each acts only on labelings with x_f != beta
// (or, for subgraph mappings, on labelings that cut a certified edge) and is the identity
// otherwise.

/// Edge criterion: p_f o p_delta(U) (multicut, beta 0), p_delta(U) (multicut, beta 1),
/// symmetric difference with delta(U) (max-cut).
LabelingMap edge_proof_mapping(const ProblemInstance& inst, EdgeId f, const NodeSet& u);

/// Triangle criterion for edge uw with cuts U, W (case analysis of the proof).
LabelingMap triangle_proof_mapping(const ProblemInstance& inst, NodeId u, NodeId v, NodeId w,
                                   const NodeSet& cut_u, const NodeSet& cut_w);

/// Multicut subgraph criteria (plain and positive closure): p_{V_H} o p_delta(V_H).
LabelingMap multicut_subgraph_proof_mapping(const ProblemInstance& inst, const Subgraph& h,
                                            EdgeId uv);

/// Max-cut subgraph criterion: symmetric difference with delta(U) or delta(V_H \ U), U the side
/// of u inside H.
LabelingMap maxcut_subgraph_proof_mapping(const ProblemInstance& inst, const Subgraph& h, EdgeId uv);

}  // namespace persist
