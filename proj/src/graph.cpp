#include "pathid/graph.hpp"

#include <algorithm>
#include <set>

namespace pathid {

void Graph::sort_edges() {
    std::sort(edges.begin(), edges.end());
}

Graph Graph::without_edge(std::size_t index) const {
    Graph g = *this;
    g.edges.erase(g.edges.begin() + static_cast<std::ptrdiff_t>(index));
    return g;
}

std::vector<std::string> validate_graph(const Graph& g) {
    std::vector<std::string> violations;
    auto report = [&](const std::string& msg) { violations.push_back(msg); };

    if (g.n_vertices <= 0) report("vertex count must be positive");
    if (g.n_vertices % 2 != 0) report("vertex count is odd");
    if (g.n_vertices > kMaxVertices)
        report("vertex count exceeds supported maximum " + std::to_string(kMaxVertices));
    if (static_cast<int>(g.dims.size()) != g.n_vertices)
        report("dims size does not match vertex count");
    for (std::size_t v = 0; v < g.dims.size(); ++v) {
        if (g.dims[v] < 2 || g.dims[v] > kMaxModes)
            report("dims[" + std::to_string(v) + "] out of range [2, " +
                   std::to_string(kMaxModes) + "]");
    }

    std::set<std::array<int, 4>> seen;
    for (const Edge& e : g.edges) {
        const std::string tag = "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                "," + std::to_string(e.color_u) + "," + std::to_string(e.color_v) + ")";
        if (e.u == e.v) {
            report(tag + ": self-loop");
            continue;
        }
        if (e.u < 0 || e.v < 0 || e.u >= g.n_vertices || e.v >= g.n_vertices) {
            report(tag + ": endpoint out of range");
            continue;
        }
        if (e.color_u < 0 || e.color_u >= g.dims[static_cast<std::size_t>(e.u)])
            report(tag + ": color_u out of range for dims[" + std::to_string(e.u) + "]");
        if (e.color_v < 0 || e.color_v >= g.dims[static_cast<std::size_t>(e.v)])
            report(tag + ": color_v out of range for dims[" + std::to_string(e.v) + "]");
        if (!seen.insert(e.key()).second) report(tag + ": duplicate colored edge");
    }
    return violations;
}

}  // namespace pathid
