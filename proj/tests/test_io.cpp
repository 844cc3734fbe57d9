#include <doctest.h>

#include <algorithm>
#include <random>

#include "pathid/io.hpp"
#include "pathid/matchings.hpp"

using namespace pathid;

namespace {

const char* kBellSpecText = R"({
  "schema": "pathid-spec/1",
  "dims": [2, 2, 2, 2],
  "groups": [
    {"name": "A", "vertices": [0]},
    {"name": "B", "vertices": [1]}
  ],
  "ancillas": [2, 3],
  "target": {"name": "ghz", "n": 2, "d": 2},
  "optimizer": {"seed": 1, "restarts": 10}
})";

SolutionDocument bell_solution() {
    SolutionDocument doc;
    doc.graph = Graph(4, 2);
    doc.graph.add_edge(0, 2, 1, 0);
    doc.graph.add_edge(1, 3, 1, 0);
    doc.graph.add_edge(0, 3, 0, 0);
    doc.graph.add_edge(1, 2, 0, 0);
    doc.graph.sort_edges();
    doc.state = state_from_graph(doc.graph);
    doc.loss = 0.0;
    doc.fidelity = 1.0;
    doc.seed = 7;
    doc.restarts_used = 1;
    return doc;
}

SpecDocument random_spec(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    SpecDocument doc;
    const int payoff = 2 + 2 * static_cast<int>(rng() % 2);  // 2 or 4
    const int anc = 2 * static_cast<int>(rng() % 2);
    std::vector<int> verts(static_cast<std::size_t>(payoff));
    for (int i = 0; i < payoff; ++i) verts[static_cast<std::size_t>(i)] = i;
    if (payoff == 4 && rng() % 2) {
        doc.spec.layout.groups = {{"A", {0, 1}}, {"B", {2, 3}}};
    } else {
        doc.spec.layout.groups = {{"A", verts}};
    }
    for (int a = 0; a < anc; ++a) doc.spec.layout.ancillas.push_back(payoff + a);
    doc.spec.dims.assign(static_cast<std::size_t>(payoff + anc), 2);
    doc.spec.forbid_cross_edges = rng() % 2 == 0;
    doc.spec.opt.seed = rng() % 1000;
    doc.spec.opt.restarts = 1 + static_cast<int>(rng() % 50);
    doc.spec.opt.loss_threshold = 1e-3 * (1.0 + std::abs(uni(rng)));
    doc.spec.opt.complex_weights = rng() % 2 == 0;

    switch (rng() % 3) {
        case 0:
            doc.target.name = "ghz";
            doc.target.n = payoff;
            doc.target.d = 2;
            break;
        case 1:
            doc.target.name = "w";
            doc.target.n = payoff;
            break;
        default: {
            doc.target.name = "custom";
            TargetState t;
            t.n_particles = payoff;
            t.dims.assign(static_cast<std::size_t>(payoff), 2);
            const int n_terms = 1 + static_cast<int>(rng() % 4);
            while (static_cast<int>(t.terms.size()) < n_terms) {
                std::vector<int> ket(static_cast<std::size_t>(payoff));
                for (auto& m : ket) m = static_cast<int>(rng() % 2);
                t.terms[ket_encode(ket)] = cplx{uni(rng), uni(rng)};
            }
            doc.target.custom = t;
            break;
        }
    }
    doc.spec.target = doc.target.resolve();
    return doc;
}

SolutionDocument random_solution(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    SolutionDocument doc;
    const int n = 2 + 2 * static_cast<int>(rng() % 3);
    doc.graph = Graph(n, 2);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            for (int c = 0; c < 2; ++c)
                if (rng() % 2) doc.graph.add_edge(u, v, c, rng() % 2 ? 1 : 0, cplx{uni(rng), uni(rng)});
    doc.graph.sort_edges();
    // deduplicate colored edges the generator may repeat
    doc.graph.edges.erase(std::unique(doc.graph.edges.begin(), doc.graph.edges.end()),
                          doc.graph.edges.end());
    doc.state = state_from_graph(doc.graph);
    doc.loss = std::abs(uni(rng));
    doc.fidelity = 1.0 - doc.loss;
    doc.seed = rng() % 100000;
    doc.restarts_used = static_cast<int>(rng() % 50);
    return doc;
}

}  // namespace

TEST_CASE("minimal Bell spec parses") {
    auto doc = parse_spec(kBellSpecText);
    CHECK(doc.spec.layout.total_vertices() == 4);
    CHECK(doc.spec.target.terms.size() == 2);
    CHECK(doc.spec.opt.restarts == 10);
    CHECK(doc.ancillas_specified);
}

TEST_CASE("named ghz target expands through the builder") {
    std::string text = kBellSpecText;
    auto doc = parse_spec(text);
    auto direct = ghz_state(2);
    CHECK(doc.spec.target.terms == direct.terms);
}

TEST_CASE("overlapping location groups are reported with the vertex") {
    std::string text = R"({
      "schema": "pathid-spec/1",
      "dims": [2, 2],
      "groups": [
        {"name": "A", "vertices": [0, 1]},
        {"name": "B", "vertices": [1]}
      ],
      "ancillas": [],
      "target": {"name": "ghz", "n": 2, "d": 2}
    })";
    CHECK_THROWS_WITH_AS(parse_spec(text),
                         doctest::Contains("vertex 1 listed more than once"), ParseError);
}

TEST_CASE("unknown target name is a schema violation") {
    std::string text = kBellSpecText;
    auto pos = text.find("ghz");
    text.replace(pos, 3, "ghx");
    CHECK_THROWS_AS(parse_spec(text), ParseError);
}

TEST_CASE("schema version mismatch names both versions") {
    std::string text = kBellSpecText;
    auto pos = text.find("pathid-spec/1");
    text.replace(pos, 13, "pathid-spec/0");
    CHECK_THROWS_WITH_AS(parse_spec(text), doctest::Contains("pathid-spec/0"), ParseError);
}

TEST_CASE("spec serialization round-trips byte-identically") {
    auto doc = parse_spec(kBellSpecText);
    const std::string s1 = serialize_spec(doc);
    const std::string s2 = serialize_spec(parse_spec(s1));
    CHECK(s1 == s2);
}

TEST_CASE("randomized spec documents round-trip") {
    std::mt19937_64 rng(404);
    for (int i = 0; i < 100; ++i) {
        auto doc = random_spec(rng);
        const std::string s1 = serialize_spec(doc);
        CAPTURE(s1);
        const std::string s2 = serialize_spec(parse_spec(s1));
        REQUIRE(s1 == s2);
    }
}

TEST_CASE("solution documents round-trip with exact weights") {
    auto doc = bell_solution();
    const std::string s1 = serialize_solution(doc);
    auto parsed = parse_solution(s1);
    REQUIRE(parsed.graph.edges.size() == doc.graph.edges.size());
    for (std::size_t i = 0; i < doc.graph.edges.size(); ++i) {
        CHECK(parsed.graph.edges[i].key() == doc.graph.edges[i].key());
        CHECK(parsed.graph.edges[i].weight == doc.graph.edges[i].weight);
    }
    CHECK(serialize_solution(parsed) == s1);
}

TEST_CASE("randomized solution documents round-trip") {
    std::mt19937_64 rng(808);
    for (int i = 0; i < 100; ++i) {
        auto doc = random_solution(rng);
        const std::string s1 = serialize_solution(doc);
        CAPTURE(s1);
        const std::string s2 = serialize_solution(parse_solution(s1));
        REQUIRE(s1 == s2);
    }
}

TEST_CASE("tampered amplitude tables are flagged on re-verification") {
    auto doc = bell_solution();
    CHECK(reverify_solution(doc).empty());
    doc.state.amplitudes.begin()->second += cplx{0.5, 0.0};
    CHECK(!reverify_solution(doc).empty());
}

TEST_CASE("solution schema version error reports both versions") {
    auto text = serialize_solution(bell_solution());
    auto pos = text.find("pathid-solution/1");
    text.replace(pos, 17, "pathid-solution/9");
    CHECK_THROWS_WITH_AS(parse_solution(text), doctest::Contains("pathid-solution/9"), ParseError);
}

TEST_CASE("dot export") {
    auto doc = bell_solution();
    const std::string dot = export_graph(doc.graph, ExportFormat::dot);
    CHECK(dot.find("graph pathid {") == 0);
    for (int v = 0; v < 4; ++v) CHECK(dot.find("  " + std::to_string(v) + " [label=") != std::string::npos);
    CHECK(std::count(dot.begin(), dot.end(), '-') >= 8);  // 4 "--" edges
    CHECK(dot.find("marker") == std::string::npos);       // all weights positive

    SUBCASE("negative weight carries a square marker") {
        Graph g = doc.graph;
        g.edges[0].weight = cplx{-1.0, 0.0};
        CHECK(export_graph(g, ExportFormat::dot).find("marker=\"square\"") != std::string::npos);
    }
    SUBCASE("export is deterministic") {
        CHECK(export_graph(doc.graph, ExportFormat::dot) == dot);
    }
    SUBCASE("empty-edge graph is still a valid document") {
        Graph g(2, 2);
        const std::string text = export_graph(g, ExportFormat::dot);
        CHECK(text.find("graph pathid {") == 0);
        CHECK(text.find("--") == std::string::npos);
    }
}

TEST_CASE("graphml export matches dot node and edge counts") {
    auto doc = bell_solution();
    const std::string xml = export_graph(doc.graph, ExportFormat::graphml);
    std::size_t nodes = 0, edges = 0, pos = 0;
    while ((pos = xml.find("<node ", pos)) != std::string::npos) {
        ++nodes;
        ++pos;
    }
    pos = 0;
    while ((pos = xml.find("<edge ", pos)) != std::string::npos) {
        ++edges;
        ++pos;
    }
    CHECK(nodes == 4);
    CHECK(edges == 4);
}

TEST_CASE("unknown export format throws") {
    CHECK_THROWS_AS(export_format_from_name("svg"), ParseError);
}
