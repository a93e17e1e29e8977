#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "persist/graph.hpp"
#include "persist/pipeline.hpp"

namespace persist {

// ---- text instance format ----------------------------------------------------------------
//
//   c comment
//   p <multicut|maxcut> <n> <m>
//   u v w          (m lines, 0-based node ids)

/// Parses an instance. With `negate`, max-form weights are turned into the stored min form.
ProblemInstance parse_instance(std::istream& in, bool negate = false);
ProblemInstance parse_instance_file(const std::string& path, bool negate = false);

/// Writes weights with 17 significant digits, so parsing gives the same doubles back.
std::string serialize_instance(const ProblemInstance& inst);
void write_instance_file(const ProblemInstance& inst, const std::string& path);

// ---- generators --------------------------------------------------------------------------

/// mt19937_64 with a fixed uniform and Gaussian transform, so instances do not depend on the
/// standard library's distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform in [0, 1) from the top 53 bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    /// Box-Muller: two uniforms u1, u2 give cos then sin.
    double normal();
    bool coin() { return (engine_() >> 63) != 0; }
    std::size_t below(std::size_t bound) { return static_cast<std::size_t>(uniform() * bound); }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Complete graph, theta_ij = s_ij * rho^(|i-j|-1) with random signs s_ij (max-cut).
ProblemInstance generate_ising_chain(std::size_t n, double rho, std::uint64_t seed);
/// Toroidal grid with N(0,1) weights (max-cut). Every side needs at least 3 nodes.
ProblemInstance generate_torus2d(std::size_t width, std::size_t height, std::uint64_t seed);
ProblemInstance generate_torus3d(std::size_t a, std::size_t b, std::size_t c, std::uint64_t seed);
/// k positive cliques of the given size, joined by negative edges (multicut).
ProblemInstance generate_gplus_blocks(std::size_t blocks, std::size_t block_size, std::uint64_t seed);

struct GeneratorSpec {
    std::string family;           // ising_chain | torus2d | torus3d | gplus_blocks
    std::vector<std::size_t> dims;  // n | w h | a b c | blocks size
    double rho = 0.5;
    std::uint64_t seed = 0;
};

ProblemInstance generate(const GeneratorSpec& spec);

// ---- reports -----------------------------------------------------------------------------

nlohmann::json witness_to_json(const Witness& w);
Witness witness_from_json(const nlohmann::json& j);
nlohmann::json step_to_json(const ShrinkStep& step, const ProblemInstance& original);
ShrinkStep step_from_json(const nlohmann::json& j);

/// Versioned ("schema": 1) report with counts, the stage series and every replayable step.
nlohmann::json report_json(const RunResult& result);

/// The parts of a report needed to re-verify a run.
struct ParsedReport {
    ProblemKind kind = ProblemKind::multicut;
    PipelineConfig config;
    std::size_t original_nodes = 0;
    std::size_t original_edges = 0;
    std::size_t final_nodes = 0;
    std::size_t final_edges = 0;
    double constant = 0.0;
    std::vector<ShrinkStep> steps;
    std::vector<Hint> hints;
};

/// Throws InputError when the document does not follow the schema.
ParsedReport parse_report(const nlohmann::json& j);

/// One row per (round, stage): the remaining-size series.
std::string report_csv(const RunReport& report);
std::string ablation_csv(const std::vector<AblationPoint>& points, std::size_t original_nodes,
                         std::size_t original_edges);

}  // namespace persist
