// Command line driver: generate instances, shrink them, re-verify reports.
#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "persist/io.hpp"
#include "persist/oracle.hpp"
#include "persist/pipeline.hpp"

using namespace persist;

namespace {

struct Common {
    std::string instance;
    bool negate = false;
    std::string criteria = "all";
    std::size_t max_rounds = 10;
    std::uint64_t seed = 0;
    std::size_t threads = 1;
    bool exact_triangle = false;
    std::string report;
    std::string format = "json";
};

PipelineConfig make_config(const Common& c) {
    PipelineConfig cfg;
    cfg.max_rounds = c.max_rounds;
    cfg.seed = c.seed;
    cfg.threads = std::max<std::size_t>(1, c.threads);
    cfg.exact_triangle_flow = c.exact_triangle;
    if (c.criteria != "all") {
        cfg.stages.clear();
        std::stringstream ss(c.criteria);
        for (std::string tok; std::getline(ss, tok, ',');)
            if (!tok.empty()) cfg.stages.push_back(stage_from_string(tok));
    }
    return cfg;
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << text;
}

void add_pipeline_flags(CLI::App* app, Common& c) {
    app->add_option("--criteria", c.criteria,
                    "comma separated stages (gplus,edge,triangle,greedy_subgraph,icp_subgraph) or all");
    app->add_option("--max-rounds", c.max_rounds, "rounds over the ladder")->check(CLI::PositiveNumber);
    app->add_option("--seed", c.seed, "recorded in the report");
    app->add_option("--threads", c.threads, "workers for candidate subgraphs");
    app->add_flag("--exact-triangle-flow", c.exact_triangle, "min-cut witnesses for triangles");
    app->add_option("--report", c.report, "report path (default stdout)");
    app->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

int cmd_shrink(const Common& c, const std::string& output) {
    auto inst = parse_instance_file(c.instance, c.negate);
    auto res = run(inst, make_config(c));
    if (!output.empty()) write_instance_file(res.state.current(), output);
    emit(c.report, c.format == "csv" ? report_csv(res.report) : report_json(res).dump(2) + "\n");
    std::cerr << "remaining " << res.report.final_nodes << "/" << res.report.original_nodes << " nodes, "
              << res.report.final_edges << "/" << res.report.original_edges << " edges\n";
    return 0;
}

int cmd_verify(const Common& c, const std::string& report_path, bool with_oracle) {
    auto inst = parse_instance_file(c.instance, c.negate);
    std::ifstream in(report_path);
    if (!in) throw InputError("cannot open '" + report_path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("report is not valid JSON: ") + e.what());
    }
    auto rep = parse_report(j);
    if (rep.kind != inst.kind() || rep.original_nodes != inst.node_count() ||
        rep.original_edges != inst.edge_count())
        throw InputError("report does not belong to this instance");
    ShrinkState state(inst);
    auto replay = replay_steps(state, rep.steps, rep.config, rep.hints);
    if (!replay.ok) {
        std::cout << "FAIL " << replay.message << "\n";
        return 2;
    }
    if (state.current().node_count() != rep.final_nodes || state.current().edge_count() != rep.final_edges) {
        std::cout << "FAIL replayed size differs from the report\n";
        return 2;
    }
    if (with_oracle) {
        auto a = enumerate_optima(inst);
        auto b = enumerate_optima(state.current());
        double lhs = a.value + inst.objective_constant();
        double rhs = b.value + state.constant();
        if (std::abs(lhs - rhs) > 1e-6 * (1.0 + std::abs(lhs))) {
            std::cout << "FAIL optimum " << lhs << " vs shrunk " << rhs << "\n";
            return 2;
        }
    }
    std::cout << "OK " << rep.steps.size() << " steps replayed\n";
    return 0;
}

int cmd_oracle(const Common& c) {
    auto inst = parse_instance_file(c.instance, c.negate);
    const std::size_t cap = inst.kind() == ProblemKind::multicut ? kOracleMaxMulticutNodes
                                                                  : kOracleMaxMaxcutNodes;
    if (inst.node_count() > cap)
        throw InputError("oracle: at most " + std::to_string(cap) + " nodes for " + to_string(inst.kind()));
    auto opt = enumerate_optima(inst);
    std::cout << std::setprecision(17) << "optimum " << opt.value + inst.objective_constant() << "\n"
              << "optimal labelings " << opt.solutions.size() << "\n";
    if (!opt.solutions.empty()) {
        std::cout << "x";
        for (auto b : opt.solutions.front()) std::cout << ' ' << int(b);
        std::cout << "\n";
    }
    return 0;
}

int cmd_ablate(const Common& c) {
    auto inst = parse_instance_file(c.instance, c.negate);
    auto points = ablate(inst, make_config(c));
    if (c.format == "csv") {
        emit(c.report, ablation_csv(points, inst.node_count(), inst.edge_count()));
        return 0;
    }
    nlohmann::json series = nlohmann::json::array();
    for (const auto& p : points)
        series.push_back({{"stage", p.stages.empty() ? "none" : to_string(p.stages.back())},
                          {"nodes", p.nodes},
                          {"edges", p.edges}});
    nlohmann::json out{{"schema", 1},
                       {"original", {{"nodes", inst.node_count()}, {"edges", inst.edge_count()}}},
                       {"series", series}};
    emit(c.report, out.dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"persistency based shrinking for multicut and max-cut"};
    app.require_subcommand(1);
    Common c;

    auto* shrink = app.add_subcommand("shrink", "shrink an instance and write a report");
    std::string output;
    shrink->add_option("instance", c.instance)->required();
    shrink->add_flag("--negate", c.negate, "input weights are in max form");
    shrink->add_option("--output", output, "write the shrunk instance here");
    add_pipeline_flags(shrink, c);

    auto* verify = app.add_subcommand("verify", "replay every step of a JSON report");
    std::string report_path;
    bool with_oracle = false;
    verify->add_option("instance", c.instance)->required();
    verify->add_option("report", report_path)->required();
    verify->add_flag("--negate", c.negate, "input weights are in max form");
    verify->add_flag("--oracle", with_oracle, "also compare optima by enumeration (small instances)");

    auto* oracle = app.add_subcommand("oracle", "exact solution by enumeration");
    oracle->add_option("instance", c.instance)->required();
    oracle->add_flag("--negate", c.negate, "input weights are in max form");

    auto* ablation = app.add_subcommand("ablate", "remaining size after each prefix of the ladder");
    ablation->add_option("instance", c.instance)->required();
    ablation->add_flag("--negate", c.negate, "input weights are in max form");
    add_pipeline_flags(ablation, c);

    auto* gen = app.add_subcommand("generate", "synthetic instance");
    GeneratorSpec spec;
    std::string gen_out;
    gen->add_option("family", spec.family, "ising_chain | torus2d | torus3d | gplus_blocks")->required();
    gen->add_option("dims", spec.dims, "n | w [h] | a [b c] | blocks size")->required();
    gen->add_option("--rho", spec.rho, "decay for ising_chain");
    gen->add_option("--seed", spec.seed, "generator seed");
    gen->add_option("--output,-o", gen_out, "default stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*shrink) return cmd_shrink(c, output);
        if (*verify) return cmd_verify(c, report_path, with_oracle);
        if (*oracle) return cmd_oracle(c);
        if (*ablation) return cmd_ablate(c);
        if (*gen) {
            emit(gen_out, serialize_instance(generate(spec)));
            return 0;
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
