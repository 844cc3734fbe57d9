#include <doctest.h>

#include "pathid/graph.hpp"

using namespace pathid;

namespace {

Graph bell_graph() {
    Graph g(4, 2);
    g.add_edge(0, 2, 1, 0);
    g.add_edge(1, 3, 1, 0);
    g.add_edge(0, 3, 0, 0);
    g.add_edge(1, 2, 0, 0);
    g.sort_edges();
    return g;
}

}  // namespace

TEST_CASE("edges canonicalize to u < v") {
    Edge e(3, 1, 0, 1, cplx{0.5, 0.0});
    CHECK(e.u == 1);
    CHECK(e.v == 3);
    CHECK(e.color_u == 1);
    CHECK(e.color_v == 0);
}

TEST_CASE("valid Bell graph has no violations") {
    CHECK(validate_graph(bell_graph()).empty());
}

TEST_CASE("color out of range is reported") {
    Graph g(2, 2);
    g.add_edge(0, 1, 2, 0);  // color_u == dims[0]
    auto v = validate_graph(g);
    REQUIRE(v.size() == 1);
    CHECK(v[0].find("color_u out of range") != std::string::npos);
}

TEST_CASE("duplicate colored edge is reported once") {
    Graph g(2, 2);
    g.add_edge(0, 1, 0, 0);
    g.add_edge(0, 1, 0, 0);
    auto v = validate_graph(g);
    REQUIRE(v.size() == 1);
    CHECK(v[0].find("duplicate") != std::string::npos);
}

TEST_CASE("parallel edges differing in colors are allowed") {
    Graph g(2, 2);
    g.add_edge(0, 1, 0, 0);
    g.add_edge(0, 1, 1, 1);
    CHECK(validate_graph(g).empty());
}

TEST_CASE("odd vertex count and self-loops are reported") {
    Graph g(3, 2);
    g.add_edge(1, 1, 0, 0);
    auto v = validate_graph(g);
    bool odd = false, loop = false;
    for (const auto& msg : v) {
        if (msg.find("odd") != std::string::npos) odd = true;
        if (msg.find("self-loop") != std::string::npos) loop = true;
    }
    CHECK(odd);
    CHECK(loop);
}
