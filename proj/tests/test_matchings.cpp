#include <doctest.h>

#include <algorithm>
#include <set>

#include "pathid/matchings.hpp"

using namespace pathid;

namespace {

Graph complete_single_color(int n) {
    Graph g(n, 2);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) g.add_edge(u, v, 0, 0);
    g.sort_edges();
    return g;
}

// Independent oracle: fix the lowest unpaired vertex, pair it with each
// remaining partner, recurse. Counts pairings of the vertex set.
std::uint64_t pairing_count_oracle(std::vector<int> verts) {
    if (verts.empty()) return 1;
    const int first = verts.front();
    std::uint64_t total = 0;
    for (std::size_t i = 1; i < verts.size(); ++i) {
        std::vector<int> rest;
        for (std::size_t j = 1; j < verts.size(); ++j)
            if (j != i) rest.push_back(verts[j]);
        total += pairing_count_oracle(rest);
        (void)first;
    }
    return total;
}

std::uint64_t pairing_count_oracle(int n) {
    std::vector<int> verts(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) verts[static_cast<std::size_t>(i)] = i;
    return pairing_count_oracle(verts);
}

}  // namespace

TEST_CASE("two vertices with a single edge have exactly one matching") {
    Graph g(2, 2);
    g.add_edge(0, 1, 0, 0);
    CHECK(enumerate_matchings(g).size() == 1);
}

TEST_CASE("complete single-color graph on 4 vertices has 3 matchings") {
    CHECK(enumerate_matchings(complete_single_color(4)).size() == 3);
}

TEST_CASE("complete single-color graph on 8 vertices has 105 matchings") {
    CHECK(enumerate_matchings(complete_single_color(8)).size() == 105);
    CHECK(pairing_count_oracle(8) == 105);
}

TEST_CASE("counts match the recursive pairing oracle up to 10 vertices") {
    for (int n = 2; n <= 10; n += 2)
        CHECK(enumerate_matchings(complete_single_color(n)).size() == pairing_count_oracle(n));
}

TEST_CASE("odd vertex count yields no matchings") {
    Graph g(3, 2);
    g.add_edge(0, 1, 0, 0);
    g.add_edge(1, 2, 0, 0);
    CHECK(enumerate_matchings(g).empty());
}

TEST_CASE("matchings cover every vertex exactly once and are unique") {
    Graph g = complete_single_color(6);
    auto matchings = enumerate_matchings(g);
    std::set<std::vector<std::int32_t>> seen;
    for (const auto& m : matchings) {
        CHECK(seen.insert(m.edge_indices).second);
        std::vector<int> covered(6, 0);
        for (auto ei : m.edge_indices) {
            ++covered[static_cast<std::size_t>(g.edges[static_cast<std::size_t>(ei)].u)];
            ++covered[static_cast<std::size_t>(g.edges[static_cast<std::size_t>(ei)].v)];
        }
        for (int c : covered) CHECK(c == 1);
    }
}

TEST_CASE("enumeration order is lexicographic and repeatable") {
    Graph g = complete_single_color(6);
    auto a = enumerate_matchings(g);
    auto b = enumerate_matchings(g);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].edge_indices == b[i].edge_indices);
    for (std::size_t i = 1; i < a.size(); ++i) CHECK(a[i - 1].edge_indices < a[i].edge_indices);
}

TEST_CASE("parallel colored edges are distinct branch choices") {
    Graph g(2, 2);
    g.add_edge(0, 1, 0, 0);
    g.add_edge(0, 1, 1, 1);
    g.sort_edges();
    CHECK(enumerate_matchings(g).size() == 2);
}

TEST_CASE("enumeration limit reports truncation") {
    bool truncated = false;
    auto matchings = enumerate_matchings(complete_single_color(8), 10, &truncated);
    CHECK(truncated);
    CHECK(matchings.size() == 10);
}

TEST_CASE("parallel table evaluation matches the serial reference") {
    Graph g(6, 2);
    for (int u = 0; u < 6; ++u)
        for (int v = u + 1; v < 6; ++v)
            for (int cu = 0; cu < 2; ++cu)
                for (int cv = 0; cv < 2; ++cv) g.add_edge(u, v, cu, cv);
    g.sort_edges();
    MatchingTable table(g);
    std::vector<cplx> weights;
    for (std::size_t i = 0; i < g.edges.size(); ++i)
        weights.push_back(cplx{0.1 + 0.01 * static_cast<double>(i), 0.05 * static_cast<double>(i % 3)});
    auto par = table.evaluate(weights);
    auto ser = table.evaluate_serial(weights);
    REQUIRE(par.size() == ser.size());
    for (std::size_t i = 0; i < par.size(); ++i)
        CHECK(std::abs(par[i] - ser[i]) < 1e-12);
}
