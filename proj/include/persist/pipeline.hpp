#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "persist/criteria.hpp"
#include "persist/graph.hpp"
#include "persist/mappings.hpp"
#include "persist/packing.hpp"

namespace persist {

/// Stages of the criterion ladder, cheapest first.
enum class Stage { gplus, edge, triangle, greedy_subgraph, icp_subgraph };

std::string to_string(Stage s);
Stage stage_from_string(const std::string& s);
const std::vector<Stage>& full_ladder();

struct PipelineConfig {
    std::vector<Stage> stages = full_ladder();
    std::size_t max_rounds = 10;
    std::uint64_t seed = 0;  // recorded in reports; every stage is deterministic
    bool exact_triangle_flow = false;
    std::size_t threads = 1;
};

struct FixedEdge {
    EdgeId edge = kNoEdge;  // original edge id
    std::uint8_t beta = 0;  // value in the original instance
    double value = 0.0;     // per-edge witness value (criterion left-hand side, or theta~ for rcf)
};

/**
 * One application of a criterion. All edges of a step are certified jointly by the same
 * witness; node ids inside the witness refer to the original instance.
 */
struct ShrinkStep {
    Criterion criterion = Criterion::edge_e1;
    Stage stage = Stage::edge;
    std::size_t round = 0;
    Witness witness;
    std::vector<FixedEdge> edges;
};

/// Persistent x_f = 1 for a multicut edge that cannot be exploited by contraction.
struct Hint {
    ShrinkStep certificate;
    std::size_t after_step = 0;  // number of steps applied when it was found
};

struct EdgeStatus {
    enum class Kind { live, contracted, deleted } kind = Kind::live;
    EdgeId current = kNoEdge;  // for live edges
    std::uint8_t value = 0;    // fixed value for contracted / deleted edges
};

/**
 * Reduced instance together with the bookkeeping that maps it back to the original:
 * every original node belongs to one current node (a union-find class) and, for max-cut,
 * carries a parity bit recording the switches applied to it. Multicut instances may also
 * have deleted edges (fixed to 1).
 */
class ShrinkState {
public:
    explicit ShrinkState(ProblemInstance original);

    const ProblemInstance& original() const { return original_; }
    const ProblemInstance& current() const { return current_; }
    double constant() const { return current_.objective_constant(); }
    std::size_t version() const { return version_; }

    NodeId node_map(NodeId original_node) const { return node_map_[original_node]; }
    std::uint8_t parity(NodeId original_node) const { return parity_[original_node]; }
    EdgeStatus edge_status(EdgeId original_edge) const;

    /// Original nodes of the given current nodes, ascending.
    std::vector<NodeId> preimage(const NodeSet& current_nodes) const;
    /// Current nodes that contain at least one of the original nodes.
    NodeSet image(std::span<const NodeId> original_nodes) const;
    /// Smallest original edge mapped onto a current edge.
    EdgeId representative(EdgeId current_edge) const { return representative_[current_edge]; }
    /// Converts an edge value between current and original terms (switch parities).
    std::uint8_t to_original(EdgeId original_edge, std::uint8_t current_value) const;
    /// Current side of a cut given as a side of the original instance.
    NodeSet current_side(const NodeSet& original_side) const;
    /// Original side of a cut of the current instance (inverse of current_side).
    NodeSet original_side(const NodeSet& current_side) const;

    const std::vector<ShrinkStep>& steps() const { return steps_; }
    const std::vector<Hint>& hints() const { return hints_; }
    const std::vector<SwitchRecord>& switch_log() const { return switch_log_; }
    /// One certificate per fixed edge of every step, in application order.
    std::vector<PersistencyCertificate> certificates() const;

    /**
     * Fixes x_f = beta for an original edge: contraction for beta = 0 (and for max-cut
     * beta = 1, after switching the class of the lower current endpoint), deletion of the whole
     * current edge for multicut beta = 1. Returns false if the state already forces the
     * opposite value. The current instance is rebuilt by commit().
     */
    bool fix(EdgeId original_edge, std::uint8_t beta);
    void commit();

    /// Best max-cut primal seen so far, as a side of the original instance (empty if none).
    const NodeSet& incumbent() const { return incumbent_; }
    void set_incumbent(NodeSet original_side) { incumbent_ = std::move(original_side); }

    void record(ShrinkStep step) { steps_.push_back(std::move(step)); }
    void record_hint(ShrinkStep step) { hints_.push_back({std::move(step), steps_.size()}); }

    /// Labeling of the original instance from a feasible labeling of the current one.
    EdgeLabeling lift(const EdgeLabeling& y) const;

private:
    NodeId find(NodeId x) const;

    ProblemInstance original_;
    ProblemInstance current_;
    std::vector<NodeId> parent_;
    std::vector<std::vector<NodeId>> members_;  // per union-find root
    std::vector<NodeId> min_member_;            // per union-find root
    std::vector<std::uint8_t> parity_;
    std::vector<std::uint8_t> deleted_;
    std::vector<NodeId> node_map_;
    std::vector<NodeId> class_root_;             // current node -> union-find root
    std::vector<EdgeId> current_edge_;           // original edge -> current edge or kNoEdge
    std::vector<EdgeId> representative_;
    std::vector<std::vector<EdgeId>> originals_; // current edge -> original edges
    std::vector<ShrinkStep> steps_;
    std::vector<Hint> hints_;
    std::vector<SwitchRecord> switch_log_;
    NodeSet incumbent_;
    std::size_t version_ = 0;
};

struct StageRecord {
    std::size_t round = 0;
    Stage stage = Stage::edge;
    std::size_t steps = 0;
    std::size_t certificates = 0;
    std::size_t nodes = 0;  // after the stage
    std::size_t edges = 0;
    double seconds = 0.0;
};

struct RunReport {
    ProblemKind kind = ProblemKind::multicut;
    PipelineConfig config;
    std::size_t original_nodes = 0;
    std::size_t original_edges = 0;
    std::size_t final_nodes = 0;
    std::size_t final_edges = 0;
    std::size_t rounds = 0;
    std::vector<StageRecord> stages;
    std::map<Criterion, std::size_t> criterion_counts;
    std::size_t hints = 0;
    double seconds = 0.0;

    double node_fraction() const;
    double edge_fraction() const;
};

struct RunResult {
    ShrinkState state;
    RunReport report;
};

/// Multicut: greedy additive edge contraction. Max-cut: greedy single-node flips from the empty cut.
EdgeLabeling gaec_primal(const ProblemInstance& inst);

/// Best cut of local search (greedy flips plus Fiduccia-Mattheyses passes) from the empty cut,
/// the optional warm start and a few fixed pseudo-random starts. Returns one side.
NodeSet maxcut_local_search(const ProblemInstance& inst, const NodeSet* warm_start = nullptr);

/// Components of the primal (multicut only) and of the positive residual graph, size >= 2.
std::vector<Subgraph> generate_candidates(const ProblemInstance& inst, const EdgeLabeling& primal,
                                          const DualPacking& packing);

RunResult run(const ProblemInstance& inst, const PipelineConfig& config);

/// Continues shrinking `state` with the stages of `config`, appending to `report`.
void run_rounds(ShrinkState& state, const PipelineConfig& config, RunReport& report);

EdgeLabeling lift(const ShrinkState& state, const EdgeLabeling& y);

/**
 * Re-evaluates a recorded step on the state it is about to be applied to. Returns the step
 * restricted to the edges whose criterion still holds, or nothing if none does.
 */
std::optional<ShrinkStep> evaluate_step(const ShrinkState& state, const ShrinkStep& step,
                                        const PipelineConfig& config);

/// Applies the edges of an evaluated step. Returns false if a fixed value conflicts.
bool apply_step(ShrinkState& state, const ShrinkStep& step);

struct ReplayResult {
    bool ok = true;
    std::size_t failed_step = 0;
    std::string message;
};

/// Replays a step log from the original instance, re-verifying every witness.
ReplayResult replay_steps(ShrinkState& state, const std::vector<ShrinkStep>& steps,
                          const PipelineConfig& config, const std::vector<Hint>& hints = {});

struct AblationPoint {
    std::vector<Stage> stages;  // ladder prefix that was enabled
    std::size_t nodes = 0;
    std::size_t edges = 0;
};

/// Runs the ladder prefix by prefix on one state; the first point is the untouched instance.
std::vector<AblationPoint> ablate(const ProblemInstance& inst, const PipelineConfig& config);

}  // namespace persist
