#include "pathid/matchings.hpp"

#include <algorithm>
#include <stdexcept>

namespace pathid {

namespace {

// Edge indices incident to each vertex, ascending.
std::vector<std::vector<std::int32_t>> incidence(const Graph& g) {
    std::vector<std::vector<std::int32_t>> inc(static_cast<std::size_t>(g.n_vertices));
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        inc[static_cast<std::size_t>(g.edges[i].u)].push_back(static_cast<std::int32_t>(i));
        inc[static_cast<std::size_t>(g.edges[i].v)].push_back(static_cast<std::int32_t>(i));
    }
    return inc;
}

struct Enumerator {
    const Graph& g;
    const std::vector<std::vector<std::int32_t>>& inc;
    std::uint64_t limit;
    bool truncated = false;
    std::vector<bool> covered;
    std::vector<std::int32_t> chosen;
    std::vector<PerfectMatching> out;

    // Covers the lowest-index uncovered vertex; parallel colored edges are
    // distinct branch choices. Generation order is lexicographic in the
    // chosen edge indices.
    void recurse() {
        if (out.size() >= limit) {
            truncated = true;
            return;
        }
        int u = -1;
        for (int v = 0; v < g.n_vertices; ++v) {
            if (!covered[static_cast<std::size_t>(v)]) {
                u = v;
                break;
            }
        }
        if (u < 0) {
            out.push_back(PerfectMatching{chosen});
            return;
        }
        for (std::int32_t ei : inc[static_cast<std::size_t>(u)]) {
            const Edge& e = g.edges[static_cast<std::size_t>(ei)];
            const int other = (e.u == u) ? e.v : e.u;
            if (other < u || covered[static_cast<std::size_t>(other)]) continue;
            covered[static_cast<std::size_t>(u)] = covered[static_cast<std::size_t>(other)] = true;
            chosen.push_back(ei);
            recurse();
            chosen.pop_back();
            covered[static_cast<std::size_t>(u)] = covered[static_cast<std::size_t>(other)] = false;
            if (truncated) return;
        }
    }
};

}  // namespace

std::vector<PerfectMatching> enumerate_matchings(const Graph& g, std::uint64_t limit,
                                                 bool* truncated) {
    if (truncated) *truncated = false;
    if (g.n_vertices <= 0 || g.n_vertices % 2 != 0) return {};
    auto inc = incidence(g);
    Enumerator en{g, inc, limit};
    en.covered.assign(static_cast<std::size_t>(g.n_vertices), false);
    en.recurse();
    if (truncated) *truncated = en.truncated;
    return en.out;
}

KetCode matching_ket(const Graph& g, const PerfectMatching& m) {
    KetCode code = 0;
    for (std::int32_t ei : m.edge_indices) {
        const Edge& e = g.edges[static_cast<std::size_t>(ei)];
        code = ket_set_mode(code, e.u, e.color_u);
        code = ket_set_mode(code, e.v, e.color_v);
    }
    return code;
}

MatchingTable::MatchingTable(const Graph& topology, std::uint64_t limit, bool* truncated)
    : n_vertices_(topology.n_vertices), n_edges_(topology.edges.size()), dims_(topology.dims) {
    auto matchings = enumerate_matchings(topology, limit, truncated);

    std::vector<std::pair<KetCode, std::vector<std::int32_t>>> tagged;
    tagged.reserve(matchings.size());
    for (auto& m : matchings)
        tagged.emplace_back(matching_ket(topology, m), std::move(m.edge_indices));
    std::sort(tagged.begin(), tagged.end());

    matching_edges_.reserve(tagged.size());
    matching_ket_index_.reserve(tagged.size());
    for (auto& [ket, edges] : tagged) {
        if (kets_.empty() || kets_.back() != ket) {
            kets_.push_back(ket);
            ket_offsets_.push_back(matching_edges_.size());
        }
        matching_ket_index_.push_back(static_cast<std::int32_t>(kets_.size()) - 1);
        matching_edges_.push_back(std::move(edges));
    }
    ket_offsets_.push_back(matching_edges_.size());

    edge_matchings_.assign(n_edges_, {});
    for (std::size_t mi = 0; mi < matching_edges_.size(); ++mi)
        for (std::int32_t ei : matching_edges_[mi])
            edge_matchings_[static_cast<std::size_t>(ei)].push_back(static_cast<std::int32_t>(mi));
}

std::vector<cplx> MatchingTable::evaluate(const std::vector<cplx>& weights) const {
    const auto n_kets = static_cast<std::int64_t>(kets_.size());
    std::vector<cplx> amps(static_cast<std::size_t>(n_kets));
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < n_kets; ++k) {
        cplx sum = 0.0;
        for (std::size_t mi = ket_offsets_[static_cast<std::size_t>(k)];
             mi < ket_offsets_[static_cast<std::size_t>(k) + 1]; ++mi) {
            cplx prod = 1.0;
            for (std::int32_t ei : matching_edges_[mi]) prod *= weights[static_cast<std::size_t>(ei)];
            sum += prod;
        }
        amps[static_cast<std::size_t>(k)] = sum;
    }
    return amps;
}

std::vector<cplx> MatchingTable::evaluate_serial(const std::vector<cplx>& weights) const {
    std::vector<cplx> amps(kets_.size(), cplx{0.0, 0.0});
    for (std::size_t mi = 0; mi < matching_edges_.size(); ++mi) {
        cplx prod = 1.0;
        for (std::int32_t ei : matching_edges_[mi]) prod *= weights[static_cast<std::size_t>(ei)];
        amps[static_cast<std::size_t>(matching_ket_index_[mi])] += prod;
    }
    return amps;
}

void MatchingTable::per_edge_sums(const std::vector<cplx>& weights,
                                  const std::vector<cplx>& coeff_t,
                                  const std::vector<cplx>& coeff_a,
                                  std::vector<cplx>& P, std::vector<cplx>& Q) const {
    const auto n_edges = static_cast<std::int64_t>(n_edges_);
    P.assign(n_edges_, cplx{0.0, 0.0});
    Q.assign(n_edges_, cplx{0.0, 0.0});
#pragma omp parallel for schedule(static)
    for (std::int64_t e = 0; e < n_edges; ++e) {
        cplx p = 0.0, q = 0.0;
        for (std::int32_t mi : edge_matchings_[static_cast<std::size_t>(e)]) {
            cplx cof = 1.0;
            for (std::int32_t ei : matching_edges_[static_cast<std::size_t>(mi)])
                if (ei != static_cast<std::int32_t>(e)) cof *= weights[static_cast<std::size_t>(ei)];
            const auto k = static_cast<std::size_t>(matching_ket_index_[static_cast<std::size_t>(mi)]);
            p += cof * coeff_t[k];
            q += cof * coeff_a[k];
        }
        P[static_cast<std::size_t>(e)] = p;
        Q[static_cast<std::size_t>(e)] = q;
    }
}

StateVector MatchingTable::to_state(const Graph& g, const std::vector<cplx>& amps) const {
    StateVector sv;
    sv.n_vertices = g.n_vertices;
    sv.dims = g.dims;
    for (std::size_t k = 0; k < kets_.size(); ++k)
        if (std::abs(amps[k]) >= kPruneTolerance) sv.amplitudes[kets_[k]] = amps[k];
    return sv;
}

StateVector state_from_graph(const Graph& g) {
    if (g.n_vertices % 2 != 0) throw std::invalid_argument("odd vertex count");
    StateVector sv;
    sv.n_vertices = g.n_vertices;
    sv.dims = g.dims;
    for (const auto& m : enumerate_matchings(g)) {
        cplx prod = 1.0;
        for (std::int32_t ei : m.edge_indices) prod *= g.edges[static_cast<std::size_t>(ei)].weight;
        sv.amplitudes[matching_ket(g, m)] += prod;
    }
    sv.prune();
    return sv;
}

}  // namespace pathid
