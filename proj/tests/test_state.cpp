#include <doctest.h>

#include <random>

#include "pathid/matchings.hpp"

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

TEST_CASE("Bell graph synthesizes |0000> + |1100>") {
    auto sv = state_from_graph(bell_graph());
    REQUIRE(sv.amplitudes.size() == 2);
    CHECK(std::abs(sv.amplitudes.at(ket_encode({0, 0, 0, 0})) - cplx{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(sv.amplitudes.at(ket_encode({1, 1, 0, 0})) - cplx{1.0, 0.0}) < 1e-15);
}

TEST_CASE("single weighted edge gives one term") {
    Graph g(2, 2);
    g.add_edge(0, 1, 1, 0, cplx{0.5, 0.0});
    auto sv = state_from_graph(g);
    REQUIRE(sv.amplitudes.size() == 1);
    CHECK(std::abs(sv.amplitudes.at(ket_encode({1, 0})) - cplx{0.5, 0.0}) < 1e-15);
}

TEST_CASE("parallel edges on one pair plus a spectator edge") {
    const cplx a{0.3, 0.0}, b{-0.7, 0.0};
    Graph g(4, 2);
    g.add_edge(0, 1, 0, 0, a);
    g.add_edge(0, 1, 1, 1, b);
    g.add_edge(2, 3, 0, 0);
    g.sort_edges();
    auto sv = state_from_graph(g);
    REQUIRE(sv.amplitudes.size() == 2);
    CHECK(std::abs(sv.amplitudes.at(ket_encode({0, 0, 0, 0})) - a) < 1e-15);
    CHECK(std::abs(sv.amplitudes.at(ket_encode({1, 1, 0, 0})) - b) < 1e-15);
}

TEST_CASE("odd vertex count is rejected") {
    Graph g(3, 2);
    CHECK_THROWS_AS(state_from_graph(g), std::invalid_argument);
}

TEST_CASE("exact cancellations are pruned") {
    // Two matchings produce |0000> with opposite sign.
    Graph g(4, 2);
    g.add_edge(0, 1, 0, 0, cplx{1.0, 0.0});
    g.add_edge(2, 3, 0, 0, cplx{1.0, 0.0});
    g.add_edge(0, 2, 0, 0, cplx{1.0, 0.0});
    g.add_edge(1, 3, 0, 0, cplx{-1.0, 0.0});
    g.sort_edges();
    auto sv = state_from_graph(g);
    // pairings: (01)(23) -> +1, (02)(13) -> -1, (03)(12) absent
    CHECK(sv.amplitudes.count(ket_encode({0, 0, 0, 0})) == 0);
}

TEST_CASE("multilinearity: scaling one edge weight scales its matchings' terms") {
    Graph g = bell_graph();
    auto base = state_from_graph(g);
    const double s = 2.5;
    Graph scaled = g;
    // edge (0,2,1,0) participates only in the |1100> matching
    for (auto& e : scaled.edges)
        if (e.u == 0 && e.v == 2) e.weight *= s;
    auto sv = state_from_graph(scaled);
    CHECK(std::abs(sv.amplitudes.at(ket_encode({1, 1, 0, 0})) -
                   s * base.amplitudes.at(ket_encode({1, 1, 0, 0}))) < 1e-12);
    CHECK(std::abs(sv.amplitudes.at(ket_encode({0, 0, 0, 0})) -
                   base.amplitudes.at(ket_encode({0, 0, 0, 0}))) < 1e-12);
}

TEST_CASE("removing an edge never adds support") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Graph g(6, 2);
    for (int u = 0; u < 6; ++u)
        for (int v = u + 1; v < 6; ++v)
            for (int c = 0; c < 2; ++c) g.add_edge(u, v, c, c, cplx{uni(rng), 0.0});
    g.sort_edges();
    auto full = state_from_graph(g);
    auto reduced = state_from_graph(g.without_edge(3));
    for (const auto& [ket, amp] : reduced.amplitudes) CHECK(full.amplitudes.count(ket) == 1);
}

TEST_CASE("disjoint union factorizes as a tensor product") {
    Graph g1(2, 2);
    g1.add_edge(0, 1, 0, 1, cplx{0.8, 0.0});
    g1.add_edge(0, 1, 1, 0, cplx{0.4, 0.0});
    Graph g2(2, 2);
    g2.add_edge(0, 1, 0, 0, cplx{0.5, 0.0});
    g2.add_edge(0, 1, 1, 1, cplx{-0.25, 0.0});

    Graph joint(4, 2);
    for (const auto& e : g1.edges) joint.add_edge(e.u, e.v, e.color_u, e.color_v, e.weight);
    for (const auto& e : g2.edges) joint.add_edge(e.u + 2, e.v + 2, e.color_u, e.color_v, e.weight);
    joint.sort_edges();

    auto s1 = state_from_graph(g1);
    auto s2 = state_from_graph(g2);
    auto sj = state_from_graph(joint);

    REQUIRE(sj.amplitudes.size() == s1.amplitudes.size() * s2.amplitudes.size());
    for (const auto& [k1, a1] : s1.amplitudes)
        for (const auto& [k2, a2] : s2.amplitudes) {
            KetCode joint_ket = k1 | (k2 << 8);
            REQUIRE(sj.amplitudes.count(joint_ket) == 1);
            CHECK(std::abs(sj.amplitudes.at(joint_ket) - a1 * a2) < 1e-12);
        }
}

TEST_CASE("state synthesis is deterministic") {
    Graph g(6, 3);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int u = 0; u < 6; ++u)
        for (int v = u + 1; v < 6; ++v)
            for (int cu = 0; cu < 3; ++cu)
                for (int cv = 0; cv < 3; ++cv) g.add_edge(u, v, cu, cv, cplx{uni(rng), uni(rng)});
    g.sort_edges();
    auto a = state_from_graph(g);
    auto b = state_from_graph(g);
    REQUIRE(a.amplitudes.size() == b.amplitudes.size());
    auto ita = a.amplitudes.begin();
    auto itb = b.amplitudes.begin();
    for (; ita != a.amplitudes.end(); ++ita, ++itb) {
        CHECK(ita->first == itb->first);
        CHECK(ita->second.real() == itb->second.real());
        CHECK(ita->second.imag() == itb->second.imag());
    }
}
