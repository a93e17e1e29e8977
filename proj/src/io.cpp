#include "persist/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

namespace persist {

using nlohmann::json;

// ---- text format -------------------------------------------------------------------------

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    for (std::string tok; ss >> tok;) out.push_back(tok);
    return out;
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
    throw InputError("line " + std::to_string(line) + ": " + what);
}

std::uint64_t parse_count(const std::string& tok, std::size_t line) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size()) fail(line, "expected a count, got '" + tok + "'");
    return v;
}

double parse_weight(const std::string& tok, std::size_t line) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size()) fail(line, "expected a weight, got '" + tok + "'");
    if (!std::isfinite(v)) fail(line, "non-finite weight");
    return v;
}

}  // namespace

ProblemInstance parse_instance(std::istream& in, bool negate) {
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    ProblemKind kind = ProblemKind::multicut;
    std::uint64_t n = 0, m = 0;
    std::vector<Edge> edges;
    while (std::getline(in, line)) {
        ++lineno;
        auto tok = split(line);
        if (tok.empty() || tok[0] == "c") continue;
        if (tok[0] == "p") {
            if (header) fail(lineno, "second header line");
            if (tok.size() != 4) fail(lineno, "header must be 'p <multicut|maxcut> <n> <m>'");
            if (tok[1] != "multicut" && tok[1] != "maxcut") fail(lineno, "unknown kind '" + tok[1] + "'");
            kind = problem_kind_from_string(tok[1]);
            n = parse_count(tok[2], lineno);
            m = parse_count(tok[3], lineno);
            if (n >= kNoNode) fail(lineno, "too many nodes");
            header = true;
            edges.reserve(m);
            continue;
        }
        if (!header) fail(lineno, "edge before the 'p' header");
        if (tok.size() != 3) fail(lineno, "expected 'u v w'");
        std::uint64_t u = parse_count(tok[0], lineno), v = parse_count(tok[1], lineno);
        double w = parse_weight(tok[2], lineno);
        if (u >= n || v >= n) fail(lineno, "node id out of range");
        if (u == v) fail(lineno, "self-loop");
        edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v), negate ? -w : w});
    }
    if (!header) throw InputError("missing 'p' header");
    if (edges.size() != m)
        throw InputError("header announces " + std::to_string(m) + " edges, found " +
                         std::to_string(edges.size()));
    return ProblemInstance::from_edges(kind, n, std::move(edges));
}

ProblemInstance parse_instance_file(const std::string& path, bool negate) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    return parse_instance(in, negate);
}

std::string serialize_instance(const ProblemInstance& inst) {
    std::ostringstream out;
    out << std::setprecision(17);
    if (inst.objective_constant() != 0.0) out << "c constant " << inst.objective_constant() << '\n';
    out << "p " << to_string(inst.kind()) << ' ' << inst.node_count() << ' ' << inst.edge_count() << '\n';
    for (const auto& e : inst.edges()) out << e.u << ' ' << e.v << ' ' << e.weight << '\n';
    return out.str();
}

void write_instance_file(const ProblemInstance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << serialize_instance(inst);
}

// ---- generators --------------------------------------------------------------------------

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
}

ProblemInstance generate_ising_chain(std::size_t n, double rho, std::uint64_t seed) {
    if (n < 2) throw InputError("ising_chain needs n >= 2");
    if (!(rho > 0.0 && rho < 1.0)) throw InputError("ising_chain needs rho in (0, 1)");
    Rng rng(seed);
    std::vector<Edge> edges;
    edges.reserve(n * (n - 1) / 2);
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j) {
            double s = rng.coin() ? 1.0 : -1.0;
            edges.push_back({i, j, s * std::pow(rho, static_cast<double>(j - i - 1))});
        }
    return ProblemInstance::from_edges(ProblemKind::maxcut, n, std::move(edges));
}

namespace {

ProblemInstance torus(const std::vector<std::size_t>& dims, std::uint64_t seed) {
    std::size_t n = 1;
    for (std::size_t d : dims) {
        if (d < 3) throw InputError("torus sides need at least 3 nodes");
        n *= d;
    }
    Rng rng(seed);
    std::vector<Edge> edges;
    edges.reserve(n * dims.size());
    std::vector<std::size_t> coord(dims.size(), 0);
    for (std::size_t v = 0; v < n; ++v) {
        // coordinates, first dimension fastest
        std::size_t rest = v, stride = 1;
        for (std::size_t k = 0; k < dims.size(); ++k) {
            coord[k] = rest % dims[k];
            rest /= dims[k];
        }
        for (std::size_t k = 0; k < dims.size(); ++k) {
            std::size_t next = coord[k] + 1 == dims[k] ? v - coord[k] * stride : v + stride;
            edges.push_back({static_cast<NodeId>(v), static_cast<NodeId>(next), rng.normal()});
            stride *= dims[k];
        }
    }
    return ProblemInstance::from_edges(ProblemKind::maxcut, n, std::move(edges));
}

}  // namespace

ProblemInstance generate_torus2d(std::size_t width, std::size_t height, std::uint64_t seed) {
    return torus({width, height}, seed);
}

ProblemInstance generate_torus3d(std::size_t a, std::size_t b, std::size_t c, std::uint64_t seed) {
    return torus({a, b, c}, seed);
}

ProblemInstance generate_gplus_blocks(std::size_t blocks, std::size_t block_size, std::uint64_t seed) {
    if (blocks < 1 || block_size < 1) throw InputError("gplus_blocks needs blocks, size >= 1");
    Rng rng(seed);
    const std::size_t n = blocks * block_size;
    std::vector<Edge> edges;
    for (std::size_t b = 0; b < blocks; ++b)
        for (std::size_t i = 0; i < block_size; ++i)
            for (std::size_t j = i + 1; j < block_size; ++j)
                edges.push_back({static_cast<NodeId>(b * block_size + i),
                                 static_cast<NodeId>(b * block_size + j), 0.5 + rng.uniform()});
    // a negative chain between consecutive blocks plus a few random negative links
    for (std::size_t b = 0; b + 1 < blocks; ++b) {
        NodeId u = static_cast<NodeId>(b * block_size + rng.below(block_size));
        NodeId v = static_cast<NodeId>((b + 1) * block_size + rng.below(block_size));
        edges.push_back({u, v, -(0.5 + rng.uniform())});
    }
    for (std::size_t k = 0; k < blocks; ++k) {
        NodeId u = static_cast<NodeId>(rng.below(n)), v = static_cast<NodeId>(rng.below(n));
        if (u / block_size == v / block_size) continue;
        edges.push_back({u, v, -(0.5 + rng.uniform())});
    }
    // parallel negative links merge into one negative edge
    return ProblemInstance::from_edges(ProblemKind::multicut, n, std::move(edges));
}

ProblemInstance generate(const GeneratorSpec& spec) {
    auto need = [&](std::size_t k) {
        if (spec.dims.size() != k)
            throw InputError(spec.family + " expects " + std::to_string(k) + " size parameter(s)");
    };
    if (spec.family == "ising_chain") {
        need(1);
        return generate_ising_chain(spec.dims[0], spec.rho, spec.seed);
    }
    if (spec.family == "torus2d") {
        if (spec.dims.size() == 1) return generate_torus2d(spec.dims[0], spec.dims[0], spec.seed);
        need(2);
        return generate_torus2d(spec.dims[0], spec.dims[1], spec.seed);
    }
    if (spec.family == "torus3d") {
        if (spec.dims.size() == 1)
            return generate_torus3d(spec.dims[0], spec.dims[0], spec.dims[0], spec.seed);
        need(3);
        return generate_torus3d(spec.dims[0], spec.dims[1], spec.dims[2], spec.seed);
    }
    if (spec.family == "gplus_blocks") {
        need(2);
        return generate_gplus_blocks(spec.dims[0], spec.dims[1], spec.seed);
    }
    throw InputError("unknown generator family '" + spec.family + "'");
}

// ---- reports -----------------------------------------------------------------------------

namespace {

// JSON has no infinities
json number(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

double read_number(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    throw InputError("expected a number, got " + j.dump());
}

template <class T>
T field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw InputError(std::string("report: missing '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw InputError(std::string("report: bad '") + key + "': " + e.what());
    }
}

}  // namespace

json witness_to_json(const Witness& w) {
    return std::visit(
        [](const auto& x) -> json {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, CutWitness>) {
                return {{"type", "cut"}, {"side", x.side}};
            } else if constexpr (std::is_same_v<T, TriangleWitness>) {
                return {{"type", "triangle"}, {"u", x.u},         {"v", x.v},
                        {"w", x.w},           {"cut_u", x.cut_u}, {"cut_w", x.cut_w}};
            } else if constexpr (std::is_same_v<T, SubgraphWitness>) {
                return {{"type", "subgraph"},        {"nodes", x.nodes}, {"switch_side", x.switch_side},
                        {"lhs", number(x.lhs)},     {"rhs", number(x.rhs)},
                        {"alpha", number(x.alpha)}};
            } else if constexpr (std::is_same_v<T, GapWitness>) {
                return {{"type", "gap"},
                        {"gamma", number(x.gamma)},
                        {"reduced_cost", number(x.reduced_cost)},
                        {"primal", x.primal}};
            } else {
                return {{"type", "components"}, {"labels", x.labels}};
            }
        },
        w);
}

Witness witness_from_json(const json& j) {
    auto type = field<std::string>(j, "type");
    auto nodes = [&](const char* key) { return field<std::vector<NodeId>>(j, key); };
    if (type == "cut") return CutWitness{nodes("side")};
    if (type == "triangle")
        return TriangleWitness{field<NodeId>(j, "u"), field<NodeId>(j, "v"), field<NodeId>(j, "w"),
                               nodes("cut_u"), nodes("cut_w")};
    if (type == "subgraph")
        return SubgraphWitness{nodes("nodes"), nodes("switch_side"), read_number(j.at("lhs")),
                               read_number(j.at("rhs")), read_number(j.at("alpha"))};
    if (type == "gap")
        return GapWitness{read_number(j.at("gamma")), read_number(j.at("reduced_cost")), nodes("primal")};
    if (type == "components") return ComponentWitness{nodes("labels")};
    throw InputError("report: unknown witness type '" + type + "'");
}

json step_to_json(const ShrinkStep& step, const ProblemInstance& original) {
    json edges = json::array();
    for (const auto& fe : step.edges) {
        const Edge& e = original.edge(fe.edge);
        edges.push_back({{"edge", fe.edge}, {"u", e.u}, {"v", e.v}, {"beta", fe.beta},
                         {"value", number(fe.value)}});
    }
    return {{"criterion", to_string(step.criterion)},
            {"stage", to_string(step.stage)},
            {"round", step.round},
            {"witness", witness_to_json(step.witness)},
            {"edges", edges}};
}

ShrinkStep step_from_json(const json& j) {
    ShrinkStep s;
    s.criterion = criterion_from_string(field<std::string>(j, "criterion"));
    s.stage = stage_from_string(field<std::string>(j, "stage"));
    s.round = field<std::size_t>(j, "round");
    if (!j.contains("witness")) throw InputError("report: step without witness");
    s.witness = witness_from_json(j.at("witness"));
    for (const auto& e : field<json>(j, "edges")) {
        auto beta = field<int>(e, "beta");
        if (beta != 0 && beta != 1) throw InputError("report: beta must be 0 or 1");
        s.edges.push_back({field<EdgeId>(e, "edge"), static_cast<std::uint8_t>(beta),
                           read_number(e.at("value"))});
    }
    return s;
}

json report_json(const RunResult& result) {
    const RunReport& r = result.report;
    const ShrinkState& st = result.state;
    json stages = json::array();
    for (Stage s : r.config.stages) stages.push_back(to_string(s));
    json counts = json::object();
    for (const auto& [c, k] : r.criterion_counts) counts[to_string(c)] = k;
    json series = json::array();
    for (const auto& s : r.stages)
        series.push_back({{"round", s.round},
                          {"stage", to_string(s.stage)},
                          {"steps", s.steps},
                          {"certificates", s.certificates},
                          {"nodes", s.nodes},
                          {"edges", s.edges},
                          {"node_fraction", r.original_nodes ? double(s.nodes) / r.original_nodes : 0.0},
                          {"edge_fraction", r.original_edges ? double(s.edges) / r.original_edges : 0.0},
                          {"seconds", s.seconds}});
    json steps = json::array();
    json certs = json::array();
    for (std::size_t i = 0; i < st.steps().size(); ++i) {
        const auto& step = st.steps()[i];
        steps.push_back(step_to_json(step, st.original()));
        for (const auto& fe : step.edges)
            certs.push_back({{"edge", fe.edge},
                             {"beta", fe.beta},
                             {"criterion", to_string(step.criterion)},
                             {"step", i}});
    }
    json hints = json::array();
    for (const auto& h : st.hints())
        hints.push_back({{"after_step", h.after_step}, {"step", step_to_json(h.certificate, st.original())}});
    return {{"schema", 1},
            {"kind", to_string(r.kind)},
            {"config",
             {{"stages", stages},
              {"max_rounds", r.config.max_rounds},
              {"seed", r.config.seed},
              {"exact_triangle_flow", r.config.exact_triangle_flow},
              {"threads", r.config.threads}}},
            {"original", {{"nodes", r.original_nodes}, {"edges", r.original_edges}}},
            {"final",
             {{"nodes", r.final_nodes}, {"edges", r.final_edges}, {"constant", number(st.constant())}}},
            {"fractions", {{"nodes", r.node_fraction()}, {"edges", r.edge_fraction()}}},
            {"rounds", r.rounds},
            {"seconds", r.seconds},
            {"criterion_counts", counts},
            {"stages", series},
            {"steps", steps},
            {"certificates", certs},
            {"hints", hints}};
}

ParsedReport parse_report(const json& j) {
    if (!j.is_object()) throw InputError("report: not a JSON object");
    if (field<int>(j, "schema") != 1) throw InputError("report: unsupported schema version");
    ParsedReport p;
    p.kind = problem_kind_from_string(field<std::string>(j, "kind"));
    auto cfg = field<json>(j, "config");
    p.config.stages.clear();
    for (const auto& s : field<std::vector<std::string>>(cfg, "stages")) p.config.stages.push_back(stage_from_string(s));
    p.config.max_rounds = field<std::size_t>(cfg, "max_rounds");
    p.config.seed = field<std::uint64_t>(cfg, "seed");
    p.config.exact_triangle_flow = field<bool>(cfg, "exact_triangle_flow");
    p.config.threads = field<std::size_t>(cfg, "threads");
    auto orig = field<json>(j, "original");
    p.original_nodes = field<std::size_t>(orig, "nodes");
    p.original_edges = field<std::size_t>(orig, "edges");
    auto fin = field<json>(j, "final");
    p.final_nodes = field<std::size_t>(fin, "nodes");
    p.final_edges = field<std::size_t>(fin, "edges");
    p.constant = read_number(fin.at("constant"));
    for (const auto& s : field<json>(j, "steps")) p.steps.push_back(step_from_json(s));
    for (const auto& h : field<json>(j, "hints"))
        p.hints.push_back({step_from_json(field<json>(h, "step")), field<std::size_t>(h, "after_step")});
    return p;
}

std::string report_csv(const RunReport& r) {
    std::ostringstream out;
    out << "round,stage,steps,certificates,nodes,edges,node_fraction,edge_fraction,seconds\n";
    out << "0,none,0,0," << r.original_nodes << ',' << r.original_edges << ",1,1,0\n";
    for (const auto& s : r.stages) {
        double nf = r.original_nodes ? double(s.nodes) / r.original_nodes : 0.0;
        double ef = r.original_edges ? double(s.edges) / r.original_edges : 0.0;
        out << s.round << ',' << to_string(s.stage) << ',' << s.steps << ',' << s.certificates << ','
            << s.nodes << ',' << s.edges << ',' << nf << ',' << ef << ',' << s.seconds << '\n';
    }
    return out.str();
}

std::string ablation_csv(const std::vector<AblationPoint>& points, std::size_t original_nodes,
                         std::size_t original_edges) {
    std::ostringstream out;
    out << "ladder,nodes,edges,node_fraction,edge_fraction\n";
    for (const auto& p : points) {
        std::string name = p.stages.empty() ? "none" : to_string(p.stages.back());
        out << name << ',' << p.nodes << ',' << p.edges << ','
            << (original_nodes ? double(p.nodes) / original_nodes : 0.0) << ','
            << (original_edges ? double(p.edges) / original_edges : 0.0) << '\n';
    }
    return out.str();
}

}  // namespace persist
