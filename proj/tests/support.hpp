#pragma once

// Hand-rolled generators for property tests.

#include <cmath>
#include <vector>

#include "persist/graph.hpp"
#include "persist/io.hpp"

namespace testing_support {

using namespace persist;

enum class Weights { integer, gaussian, mixed, skewed };

inline double draw_weight(Rng& rng, Weights w) {
    switch (w) {
        case Weights::integer: {
            double v = static_cast<double>(static_cast<int>(rng.below(11)) - 5);
            return v == 0.0 ? 1.0 : v;
        }
        case Weights::gaussian: return rng.normal();
        case Weights::skewed: {
            // a few heavy edges among light ones
            double v = rng.uniform() < 0.2 ? 4.0 + 4.0 * rng.uniform() : rng.uniform();
            return rng.coin() ? v : -v;
        }
        case Weights::mixed: break;
    }
    return draw_weight(rng, static_cast<Weights>(rng.below(3)));
}

inline Weights any_weights(Rng& rng) { return static_cast<Weights>(rng.below(4)); }

/// Random graph on n nodes; every pair is an edge with probability p.
inline ProblemInstance random_instance(Rng& rng, ProblemKind kind, std::size_t n, double p,
                                       Weights w) {
    std::vector<Edge> edges;
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j)
            if (rng.uniform() < p) edges.push_back({i, j, draw_weight(rng, w)});
    return ProblemInstance::from_edges(kind, n, std::move(edges));
}

/// Random instance whose graph is connected (a random spanning tree plus extra edges).
inline ProblemInstance random_connected(Rng& rng, ProblemKind kind, std::size_t n, double p,
                                        Weights w) {
    std::vector<Edge> edges;
    std::vector<std::vector<std::uint8_t>> used(n, std::vector<std::uint8_t>(n, 0));
    for (NodeId i = 1; i < n; ++i) {
        NodeId j = static_cast<NodeId>(rng.below(i));
        used[i][j] = used[j][i] = 1;
        edges.push_back({j, i, draw_weight(rng, w)});
    }
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j)
            if (!used[i][j] && rng.uniform() < p) edges.push_back({i, j, draw_weight(rng, w)});
    return ProblemInstance::from_edges(kind, n, std::move(edges));
}

inline ProblemKind any_kind(Rng& rng) { return rng.coin() ? ProblemKind::multicut : ProblemKind::maxcut; }

/// Uniformly random subset.
inline NodeSet random_subset(Rng& rng, std::size_t n) {
    NodeSet s(n);
    for (NodeId v = 0; v < n; ++v)
        if (rng.coin()) s.insert(v);
    return s;
}

/// Random feasible labeling: a random partition (multicut) or a random cut (max-cut).
inline EdgeLabeling random_feasible(Rng& rng, const ProblemInstance& inst) {
    const std::size_t n = inst.node_count();
    if (inst.kind() == ProblemKind::maxcut) return cut_labeling(inst, random_subset(rng, n));
    std::vector<NodeId> labels(n);
    std::size_t k = 1 + rng.below(std::max<std::size_t>(1, n));
    for (auto& l : labels) l = static_cast<NodeId>(rng.below(k));
    return partition_labeling(inst, labels);
}

/// Brute force <theta, x> over the edges with both ends in different parts of the set.
inline double cut_weight(const ProblemInstance& inst, const NodeSet& u) {
    double s = 0.0;
    for (const auto& e : inst.edges())
        if (u.contains(e.u) != u.contains(e.v)) s += e.weight;
    return s;
}

inline bool close(double a, double b, double rel = 1e-9) {
    return std::abs(a - b) <= rel * (1.0 + std::abs(a) + std::abs(b));
}

}  // namespace testing_support
