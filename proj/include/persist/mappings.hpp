#pragma once

#include <utility>

#include "persist/graph.hpp"

namespace persist {

/// Result of switching a max-cut instance on a cut y = 1_{delta(U)}.
struct SwitchRecord {
    NodeSet switched_cut;  // U
    double constant_delta = 0.0;
};

/// x OR 1_{delta(U)}. Requires a feasible multicut x and a connected U.
EdgeLabeling cut_mapping(const ProblemInstance& inst, const EdgeLabeling& x, const NodeSet& u);

/// Merges every component of x that touches U. Requires a feasible multicut x and a connected U.
EdgeLabeling join_mapping(const ProblemInstance& inst, const EdgeLabeling& x, const NodeSet& u);

/// x XOR 1_{delta(U)}. Requires a feasible cut x; U is arbitrary.
EdgeLabeling sym_diff_mapping(const ProblemInstance& inst, const EdgeLabeling& x, const NodeSet& u);

/**
 * Negates theta on the edges with y_e = 1 and adds sum_{y_e=1} theta_e to the objective
 * constant, so that objective(x XOR y) + constant' == objective(x) + constant for every cut x.
 */
std::pair<ProblemInstance, SwitchRecord> switch_instance(const ProblemInstance& inst,
                                                         const EdgeLabeling& y);

}  // namespace persist
