#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace pathid {

using cplx = std::complex<double>;

// Ket codes pack one mode label per vertex into 4-bit nibbles.
inline constexpr int kMaxVertices = 16;
inline constexpr int kMaxModes = 16;

// Amplitudes with magnitude below this are dropped after cancellation.
inline constexpr double kPruneTolerance = 1e-12;

/// An edge is a correlated photon-pair source feeding paths u and v,
/// delivering mode color_u to u and color_v to v with a complex amplitude.
struct Edge {
    int u = 0;
    int v = 0;
    int color_u = 0;
    int color_v = 0;
    cplx weight{1.0, 0.0};

    Edge() = default;
    Edge(int a, int b, int ca, int cb, cplx w = cplx{1.0, 0.0}) {
        if (a <= b) {
            u = a; v = b; color_u = ca; color_v = cb;
        } else {
            u = b; v = a; color_u = cb; color_v = ca;
        }
        weight = w;
    }

    std::array<int, 4> key() const { return {u, v, color_u, color_v}; }

    friend bool operator==(const Edge& a, const Edge& b) { return a.key() == b.key(); }
    friend bool operator<(const Edge& a, const Edge& b) { return a.key() < b.key(); }
};

/// Edge-colored weighted multigraph: the experiment blueprint.
/// Vertices are photon paths to detectors; dims[v] is the number of
/// internal modes available on path v.
struct Graph {
    int n_vertices = 0;
    std::vector<int> dims;
    std::vector<Edge> edges;  // sorted by (u, v, color_u, color_v)

    Graph() = default;
    Graph(int n, std::vector<int> per_vertex_dims)
        : n_vertices(n), dims(std::move(per_vertex_dims)) {}
    Graph(int n, int uniform_dim) : n_vertices(n), dims(static_cast<size_t>(n), uniform_dim) {}

    void add_edge(int a, int b, int ca, int cb, cplx w = cplx{1.0, 0.0}) {
        edges.emplace_back(a, b, ca, cb, w);
    }

    void sort_edges();

    Graph without_edge(std::size_t index) const;
};

/// Invariant violations as human-readable strings; empty list means valid.
std::vector<std::string> validate_graph(const Graph& g);

}  // namespace pathid
