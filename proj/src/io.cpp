#include "pathid/io.hpp"

#include <nlohmann/json.hpp>

#include <cinttypes>
#include <cstdio>
#include <sstream>

namespace pathid {

using json = nlohmann::json;

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

// Serialization goes through a hand-rolled writer so field order and number
// formatting are fixed; parsing uses nlohmann::json.

std::string int_list(const std::vector<int>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(v[i]);
    }
    return s + "]";
}

std::string amp_pair(const cplx& a) {
    return "[" + format_double(a.real()) + ", " + format_double(a.imag()) + "]";
}

std::string terms_block(const TargetState& t, const std::string& indent) {
    std::string s = "[\n";
    bool first = true;
    for (const auto& [ket, amp] : t.terms) {
        if (!first) s += ",\n";
        first = false;
        s += indent + "  {\"ket\": " + int_list(ket_decode(ket, t.n_particles)) +
             ", \"amp\": " + amp_pair(amp) + "}";
    }
    s += "\n" + indent + "]";
    return s;
}

void expect_object(const json& j, const std::string& where, std::vector<std::string>& errs) {
    if (!j.is_object()) errs.push_back(where + ": expected an object");
}

std::vector<int> get_int_list(const json& j, const std::string& key, const std::string& where,
                              std::vector<std::string>& errs) {
    std::vector<int> out;
    if (!j.contains(key)) {
        errs.push_back(where + ": missing field '" + key + "'");
        return out;
    }
    if (!j[key].is_array()) {
        errs.push_back(where + "." + key + ": expected a list of integers");
        return out;
    }
    for (const auto& e : j[key]) {
        if (!e.is_number_integer()) {
            errs.push_back(where + "." + key + ": expected a list of integers");
            return {};
        }
        out.push_back(e.get<int>());
    }
    return out;
}

cplx get_amp(const json& j, const std::string& where, std::vector<std::string>& errs) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        errs.push_back(where + ": amplitude must be a [re, im] pair");
        return {0.0, 0.0};
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

TargetState parse_terms(const json& j, const std::vector<int>& dims, const std::string& where,
                        std::vector<std::string>& errs) {
    TargetState t;
    t.n_particles = static_cast<int>(dims.size());
    t.dims = dims;
    if (!j.is_array()) {
        errs.push_back(where + ": expected a list of terms");
        return t;
    }
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string tag = where + "[" + std::to_string(i) + "]";
        const auto& term = j[i];
        if (!term.is_object() || !term.contains("ket") || !term.contains("amp")) {
            errs.push_back(tag + ": term needs 'ket' and 'amp'");
            continue;
        }
        std::vector<std::string> sub;
        auto ket = get_int_list(term, "ket", tag, sub);
        auto amp = get_amp(term["amp"], tag, sub);
        errs.insert(errs.end(), sub.begin(), sub.end());
        if (!sub.empty()) continue;
        if (ket.size() != dims.size()) {
            errs.push_back(tag + ": ket length does not match dims");
            continue;
        }
        bool in_range = true;
        for (std::size_t v = 0; v < ket.size(); ++v)
            if (ket[v] < 0 || ket[v] >= dims[v]) in_range = false;
        if (!in_range) {
            errs.push_back(tag + ": mode out of range for dims");
            continue;
        }
        t.terms[ket_encode(ket)] += amp;
    }
    return t;
}

void check_schema(const json& j, const std::string& expected, std::vector<std::string>& errs) {
    if (!j.contains("schema") || !j["schema"].is_string()) {
        errs.push_back("missing 'schema' field (expected \"" + expected + "\")");
        return;
    }
    const std::string got = j["schema"].get<std::string>();
    if (got != expected)
        errs.push_back("schema version mismatch: document has \"" + got + "\", this tool reads \"" +
                       expected + "\"");
}

[[noreturn]] void fail(const std::vector<std::string>& errs) {
    std::string msg;
    for (const auto& e : errs) {
        if (!msg.empty()) msg += "\n";
        msg += e;
    }
    throw ParseError(msg);
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("not valid JSON: ") + e.what());
    }
}

}  // namespace

TargetState TargetDescriptor::resolve() const {
    if (name == "ghz") return ghz_state(n, d);
    if (name == "w") return w_state(n);
    if (name == "srv422") return srv_422_state();
    if (name == "logical-bell") return logical_bell(logical_code_from_name(code));
    if (name == "custom") return custom;
    throw ParseError("unknown target name: " + name);
}

SpecDocument parse_spec(const std::string& text) {
    const json j = parse_json(text);
    std::vector<std::string> errs;
    expect_object(j, "document", errs);
    if (!errs.empty()) fail(errs);
    check_schema(j, kSpecSchema, errs);
    if (!errs.empty()) fail(errs);

    SpecDocument doc;
    ExperimentSpec& spec = doc.spec;
    spec.dims = get_int_list(j, "dims", "document", errs);

    if (!j.contains("groups") || !j["groups"].is_array()) {
        errs.push_back("document: missing 'groups' list");
    } else {
        for (std::size_t gi = 0; gi < j["groups"].size(); ++gi) {
            const auto& g = j["groups"][gi];
            const std::string tag = "groups[" + std::to_string(gi) + "]";
            if (!g.is_object() || !g.contains("name") || !g["name"].is_string()) {
                errs.push_back(tag + ": needs a string 'name'");
                continue;
            }
            auto verts = get_int_list(g, "vertices", tag, errs);
            spec.layout.groups.emplace_back(g["name"].get<std::string>(), std::move(verts));
        }
    }
    if (j.contains("ancillas")) {
        doc.ancillas_specified = true;
        spec.layout.ancillas = get_int_list(j, "ancillas", "document", errs);
    } else {
        doc.ancillas_specified = false;
    }
    if (j.contains("ancilla_mode")) {
        if (!j["ancilla_mode"].is_number_integer())
            errs.push_back("ancilla_mode: expected an integer");
        else
            spec.ancilla_mode = j["ancilla_mode"].get<int>();
    }
    if (j.contains("constraint")) {
        const std::string c = j["constraint"].is_string() ? j["constraint"].get<std::string>() : "";
        if (c == "forbid-cross")
            spec.forbid_cross_edges = true;
        else if (c == "none")
            spec.forbid_cross_edges = false;
        else
            errs.push_back("constraint: expected \"forbid-cross\" or \"none\"");
    }

    if (!j.contains("target") || !j["target"].is_object()) {
        errs.push_back("document: missing 'target' object");
    } else {
        const auto& tj = j["target"];
        if (!tj.contains("name") || !tj["name"].is_string()) {
            errs.push_back("target: needs a string 'name'");
        } else {
            doc.target.name = tj["name"].get<std::string>();
            if (tj.contains("n")) doc.target.n = tj["n"].get<int>();
            if (tj.contains("d")) doc.target.d = tj["d"].get<int>();
            if (tj.contains("code")) doc.target.code = tj["code"].get<std::string>();
            if (doc.target.name == "custom") {
                auto tdims = get_int_list(tj, "dims", "target", errs);
                if (!tj.contains("terms"))
                    errs.push_back("target: custom target needs a 'terms' list");
                else if (errs.empty())
                    doc.target.custom = parse_terms(tj["terms"], tdims, "target.terms", errs);
            }
            if (errs.empty()) {
                try {
                    spec.target = doc.target.resolve();
                } catch (const std::exception& e) {
                    errs.push_back(std::string("target: ") + e.what());
                }
            }
        }
    }

    if (j.contains("optimizer")) {
        const auto& oj = j["optimizer"];
        if (!oj.is_object()) {
            errs.push_back("optimizer: expected an object");
        } else {
            auto& o = spec.opt;
            if (oj.contains("seed")) o.seed = oj["seed"].get<std::uint64_t>();
            if (oj.contains("restarts")) o.restarts = oj["restarts"].get<int>();
            if (oj.contains("threshold")) o.loss_threshold = oj["threshold"].get<double>();
            if (oj.contains("triage_threshold")) o.triage_threshold = oj["triage_threshold"].get<double>();
            if (oj.contains("max_iterations")) o.max_iterations = oj["max_iterations"].get<int>();
            if (oj.contains("weight_bound")) o.weight_bound = oj["weight_bound"].get<double>();
            if (oj.contains("complex_weights")) o.complex_weights = oj["complex_weights"].get<bool>();
            if (oj.contains("matching_limit")) o.matching_limit = oj["matching_limit"].get<std::uint64_t>();
            if (oj.contains("allow_large")) o.allow_large = oj["allow_large"].get<bool>();
        }
    }

    if (errs.empty() && doc.ancillas_specified) {
        auto violations = spec.validate();
        errs.insert(errs.end(), violations.begin(), violations.end());
    }
    if (!errs.empty()) fail(errs);
    return doc;
}

std::string serialize_spec(const SpecDocument& doc) {
    const ExperimentSpec& spec = doc.spec;
    std::string s = "{\n";
    s += "  \"schema\": \"" + std::string(kSpecSchema) + "\",\n";
    s += "  \"dims\": " + int_list(spec.dims) + ",\n";
    s += "  \"groups\": [\n";
    for (std::size_t gi = 0; gi < spec.layout.groups.size(); ++gi) {
        s += "    {\"name\": \"" + spec.layout.groups[gi].first +
             "\", \"vertices\": " + int_list(spec.layout.groups[gi].second) + "}";
        s += (gi + 1 < spec.layout.groups.size()) ? ",\n" : "\n";
    }
    s += "  ],\n";
    if (doc.ancillas_specified)
        s += "  \"ancillas\": " + int_list(spec.layout.ancillas) + ",\n";
    s += "  \"ancilla_mode\": " + std::to_string(spec.ancilla_mode) + ",\n";
    s += "  \"constraint\": \"" + std::string(spec.forbid_cross_edges ? "forbid-cross" : "none") +
         "\",\n";

    s += "  \"target\": {";
    const TargetDescriptor& t = doc.target;
    s += "\"name\": \"" + t.name + "\"";
    if (t.name == "ghz") s += ", \"n\": " + std::to_string(t.n) + ", \"d\": " + std::to_string(t.d);
    if (t.name == "w") s += ", \"n\": " + std::to_string(t.n);
    if (t.name == "logical-bell") s += ", \"code\": \"" + t.code + "\"";
    if (t.name == "custom") {
        s += ", \"dims\": " + int_list(t.custom.dims) + ", \"terms\": " + terms_block(t.custom, "    ");
    }
    s += "},\n";

    const auto& o = spec.opt;
    s += "  \"optimizer\": {\n";
    s += "    \"seed\": " + std::to_string(o.seed) + ",\n";
    s += "    \"restarts\": " + std::to_string(o.restarts) + ",\n";
    s += "    \"threshold\": " + format_double(o.loss_threshold) + ",\n";
    s += "    \"triage_threshold\": " + format_double(o.triage_threshold) + ",\n";
    s += "    \"max_iterations\": " + std::to_string(o.max_iterations) + ",\n";
    s += "    \"weight_bound\": " + format_double(o.weight_bound) + ",\n";
    s += "    \"complex_weights\": " + std::string(o.complex_weights ? "true" : "false") + ",\n";
    s += "    \"matching_limit\": " + std::to_string(o.matching_limit) + ",\n";
    s += "    \"allow_large\": " + std::string(o.allow_large ? "true" : "false") + "\n";
    s += "  }\n";
    s += "}\n";
    return s;
}

SolutionDocument parse_solution(const std::string& text) {
    const json j = parse_json(text);
    std::vector<std::string> errs;
    expect_object(j, "document", errs);
    if (!errs.empty()) fail(errs);
    check_schema(j, kSolutionSchema, errs);
    if (!errs.empty()) fail(errs);

    SolutionDocument doc;
    if (!j.contains("n_vertices") || !j["n_vertices"].is_number_integer())
        errs.push_back("document: missing integer 'n_vertices'");
    else
        doc.graph.n_vertices = j["n_vertices"].get<int>();
    doc.graph.dims = get_int_list(j, "dims", "document", errs);

    if (!j.contains("edges") || !j["edges"].is_array()) {
        errs.push_back("document: missing 'edges' list");
    } else {
        for (std::size_t i = 0; i < j["edges"].size(); ++i) {
            const auto& e = j["edges"][i];
            if (!e.is_array() || e.size() != 6) {
                errs.push_back("edges[" + std::to_string(i) + "]: expected [u, v, cu, cv, re, im]");
                continue;
            }
            doc.graph.add_edge(e[0].get<int>(), e[1].get<int>(), e[2].get<int>(), e[3].get<int>(),
                               cplx{e[4].get<double>(), e[5].get<double>()});
        }
    }
    if (j.contains("loss")) doc.loss = j["loss"].get<double>();
    if (j.contains("fidelity")) doc.fidelity = j["fidelity"].get<double>();

    if (j.contains("state") && j["state"].is_array()) {
        TargetState t = parse_terms(j["state"], doc.graph.dims, "state", errs);
        doc.state.n_vertices = doc.graph.n_vertices;
        doc.state.dims = doc.graph.dims;
        doc.state.amplitudes = t.terms;
    } else {
        errs.push_back("document: missing 'state' list");
    }
    if (j.contains("provenance") && j["provenance"].is_object()) {
        const auto& p = j["provenance"];
        if (p.contains("seed")) doc.seed = p["seed"].get<std::uint64_t>();
        if (p.contains("restarts_used")) doc.restarts_used = p["restarts_used"].get<int>();
        if (p.contains("tool_version")) doc.tool_version = p["tool_version"].get<std::string>();
    }
    if (errs.empty()) {
        auto violations = validate_graph(doc.graph);
        errs.insert(errs.end(), violations.begin(), violations.end());
    }
    if (!errs.empty()) fail(errs);
    doc.graph.sort_edges();
    return doc;
}

std::string serialize_solution(const SolutionDocument& doc) {
    Graph g = doc.graph;
    g.sort_edges();
    std::string s = "{\n";
    s += "  \"schema\": \"" + std::string(kSolutionSchema) + "\",\n";
    s += "  \"n_vertices\": " + std::to_string(g.n_vertices) + ",\n";
    s += "  \"dims\": " + int_list(g.dims) + ",\n";
    s += "  \"edges\": [\n";
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const Edge& e = g.edges[i];
        s += "    [" + std::to_string(e.u) + ", " + std::to_string(e.v) + ", " +
             std::to_string(e.color_u) + ", " + std::to_string(e.color_v) + ", " +
             format_double(e.weight.real()) + ", " + format_double(e.weight.imag()) + "]";
        s += (i + 1 < g.edges.size()) ? ",\n" : "\n";
    }
    s += "  ],\n";
    s += "  \"loss\": " + format_double(doc.loss) + ",\n";
    s += "  \"fidelity\": " + format_double(doc.fidelity) + ",\n";
    s += "  \"state\": [\n";
    {
        bool first = true;
        for (const auto& [ket, amp] : doc.state.amplitudes) {
            if (!first) s += ",\n";
            first = false;
            s += "    {\"ket\": " + int_list(ket_decode(ket, doc.state.n_vertices)) +
                 ", \"amp\": " + amp_pair(amp) + "}";
        }
        s += "\n  ],\n";
    }
    s += "  \"provenance\": {\"seed\": " + std::to_string(doc.seed) +
         ", \"restarts_used\": " + std::to_string(doc.restarts_used) + ", \"tool_version\": \"" +
         doc.tool_version + "\"}\n";
    s += "}\n";
    return s;
}

std::vector<std::string> reverify_solution(const SolutionDocument& doc, double tol) {
    std::vector<std::string> issues;
    StateVector recomputed = state_from_graph(doc.graph);
    for (const auto& [ket, amp] : recomputed.amplitudes) {
        auto it = doc.state.amplitudes.find(ket);
        if (it == doc.state.amplitudes.end()) {
            issues.push_back("ket " + ket_to_string(ket, recomputed.n_vertices) +
                             " missing from recorded state");
        } else if (std::abs(it->second - amp) > tol) {
            issues.push_back("amplitude mismatch at ket " + ket_to_string(ket, recomputed.n_vertices));
        }
    }
    for (const auto& [ket, amp] : doc.state.amplitudes)
        if (!recomputed.amplitudes.count(ket))
            issues.push_back("recorded ket " + ket_to_string(ket, recomputed.n_vertices) +
                             " not produced by the graph");
    return issues;
}

StateDocument parse_state(const std::string& text) {
    const json j = parse_json(text);
    std::vector<std::string> errs;
    expect_object(j, "document", errs);
    if (!errs.empty()) fail(errs);
    check_schema(j, kStateSchema, errs);
    if (!errs.empty()) fail(errs);
    StateDocument doc;
    doc.dims = get_int_list(j, "dims", "document", errs);
    if (errs.empty()) {
        if (!j.contains("terms"))
            errs.push_back("document: missing 'terms' list");
        else
            doc.state = parse_terms(j["terms"], doc.dims, "terms", errs);
    }
    if (!errs.empty()) fail(errs);
    return doc;
}

std::string serialize_state(const StateDocument& doc) {
    std::string s = "{\n";
    s += "  \"schema\": \"" + std::string(kStateSchema) + "\",\n";
    s += "  \"dims\": " + int_list(doc.dims) + ",\n";
    s += "  \"terms\": " + terms_block(doc.state, "  ") + "\n";
    s += "}\n";
    return s;
}

ExportFormat export_format_from_name(const std::string& name) {
    if (name == "dot") return ExportFormat::dot;
    if (name == "graphml") return ExportFormat::graphml;
    throw ParseError("unknown export format: " + name + " (expected dot or graphml)");
}

namespace {

const char* kModeColors[] = {"blue", "red", "green", "yellow", "purple",
                             "orange", "cyan", "magenta"};

std::string mode_color(int mode) {
    return kModeColors[mode % 8];
}

std::string vertex_label(int v, const std::optional<LocationLayout>& layout) {
    std::string label = std::to_string(v);
    if (layout) {
        for (const auto& [name, verts] : layout->groups)
            for (int gv : verts)
                if (gv == v) return label + ":" + name;
        for (std::size_t i = 0; i < layout->ancillas.size(); ++i)
            if (layout->ancillas[i] == v) return label + ":a" + std::to_string(i + 1);
    }
    return label;
}

}  // namespace

std::string export_graph(const Graph& g, ExportFormat format,
                         const std::optional<LocationLayout>& layout) {
    Graph sorted = g;
    sorted.sort_edges();
    std::ostringstream out;
    if (format == ExportFormat::dot) {
        out << "graph pathid {\n";
        out << "  node [shape=circle];\n";
        for (int v = 0; v < sorted.n_vertices; ++v)
            out << "  " << v << " [label=\"" << vertex_label(v, layout) << "\"];\n";
        for (const Edge& e : sorted.edges) {
            out << "  " << e.u << " -- " << e.v << " [color=\"" << mode_color(e.color_u) << ":"
                << mode_color(e.color_v) << "\", modes=\"" << e.color_u << "," << e.color_v
                << "\", weight_re=\"" << format_double(e.weight.real()) << "\", weight_im=\""
                << format_double(e.weight.imag()) << "\"";
            if (e.weight.real() < 0.0 && e.weight.imag() == 0.0) out << ", marker=\"square\"";
            out << "];\n";
        }
        out << "}\n";
    } else {
        out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
        out << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n";
        out << "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n";
        out << "  <key id=\"mode_u\" for=\"edge\" attr.name=\"mode_u\" attr.type=\"int\"/>\n";
        out << "  <key id=\"mode_v\" for=\"edge\" attr.name=\"mode_v\" attr.type=\"int\"/>\n";
        out << "  <key id=\"weight_re\" for=\"edge\" attr.name=\"weight_re\" attr.type=\"double\"/>\n";
        out << "  <key id=\"weight_im\" for=\"edge\" attr.name=\"weight_im\" attr.type=\"double\"/>\n";
        out << "  <key id=\"marker\" for=\"edge\" attr.name=\"marker\" attr.type=\"string\"/>\n";
        out << "  <graph id=\"pathid\" edgedefault=\"undirected\">\n";
        for (int v = 0; v < sorted.n_vertices; ++v)
            out << "    <node id=\"n" << v << "\"><data key=\"label\">" << vertex_label(v, layout)
                << "</data></node>\n";
        for (std::size_t i = 0; i < sorted.edges.size(); ++i) {
            const Edge& e = sorted.edges[i];
            out << "    <edge id=\"e" << i << "\" source=\"n" << e.u << "\" target=\"n" << e.v
                << "\">";
            out << "<data key=\"mode_u\">" << e.color_u << "</data>";
            out << "<data key=\"mode_v\">" << e.color_v << "</data>";
            out << "<data key=\"weight_re\">" << format_double(e.weight.real()) << "</data>";
            out << "<data key=\"weight_im\">" << format_double(e.weight.imag()) << "</data>";
            if (e.weight.real() < 0.0 && e.weight.imag() == 0.0)
                out << "<data key=\"marker\">square</data>";
            out << "</edge>\n";
        }
        out << "  </graph>\n";
        out << "</graphml>\n";
    }
    return out.str();
}

}  // namespace pathid
