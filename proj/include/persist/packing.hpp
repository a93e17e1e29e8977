#pragma once

#include <utility>
#include <vector>

#include "persist/graph.hpp"

namespace persist {

/// Tolerance for "the packing bound reaches zero".
inline constexpr double kDualBoundEps = 1e-9;

struct PackedCycle {
    std::vector<EdgeId> edges;  // the negative edge first, then the positive path from u to v
    double lambda = 0.0;
};

/**
 * Feasible solution of the cycle packing dual: multipliers on conflicted cycles
 * (exactly one negative edge) with per-edge load at most |theta_e|.
 */
struct DualPacking {
    std::vector<PackedCycle> cycles;
    std::vector<double> load;  // per edge of the instance the packing was built on
    double dual_bound = 0.0;   // sum lambda + sum of negative weights
};

/// Reduced cost per edge: (|theta_e| - load_e) * sign(theta_e).
using ReducedCosts = std::vector<double>;

/**
 * Iterative cycle packing. Conflicted cycles are packed in order of increasing length
 * (triangles first); among equal lengths the negative edge with the smaller id goes first.
 * Each packed cycle receives the minimum remaining slack on it. Stops when no negative
 * edge with slack closes a cycle through positive edges with slack.
 */
DualPacking icp(const ProblemInstance& inst);

/// ICP restricted to the induced subgraph h; load and cycles refer to the ids of `inst`.
DualPacking icp(const ProblemInstance& inst, const Subgraph& h);

/// Throws if the packing overloads an edge or a stored cycle is not conflicted.
void validate_packing(const ProblemInstance& inst, const DualPacking& packing);

ReducedCosts reduced_costs(const ProblemInstance& inst, const DualPacking& packing);

/// True iff the packing on h proves that the multicut optimum on h is zero.
bool assumption1_check(const ProblemInstance& inst, const Subgraph& h, const DualPacking& packing);

/// (sum of reduced costs over delta_H(U), sum of weights over delta_H(U)).
std::pair<double, double> lemma8_bound(const ProblemInstance& inst, const Subgraph& h,
                                       const DualPacking& packing, const NodeSet& u);

}  // namespace persist
