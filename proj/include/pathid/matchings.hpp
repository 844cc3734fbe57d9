#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "pathid/graph.hpp"
#include "pathid/state.hpp"

namespace pathid {

/// Edge subset covering every vertex exactly once; stores indices into
/// Graph::edges, ascending.
struct PerfectMatching {
    std::vector<std::int32_t> edge_indices;
};

/// Exhaustive, duplicate-free enumeration in lexicographic order of the
/// member edge tuples. Odd vertex count yields an empty collection.
/// Enumeration stops at `limit` matchings; `truncated` reports whether the
/// cap was hit.
std::vector<PerfectMatching> enumerate_matchings(
    const Graph& g,
    std::uint64_t limit = std::numeric_limits<std::uint64_t>::max(),
    bool* truncated = nullptr);

/// The ket a matching produces: each vertex receives the color assigned by
/// its covering edge.
KetCode matching_ket(const Graph& g, const PerfectMatching& m);

/// Matchings of a fixed topology grouped by resulting ket. Enumeration
/// depends only on topology and colors, so the table is built once and
/// re-evaluated as weights change.
class MatchingTable {
  public:
    MatchingTable() = default;
    explicit MatchingTable(const Graph& topology,
                           std::uint64_t limit = std::numeric_limits<std::uint64_t>::max(),
                           bool* truncated = nullptr);

    const std::vector<KetCode>& kets() const { return kets_; }
    std::size_t n_matchings() const { return matching_edges_.size(); }
    std::size_t n_edges() const { return n_edges_; }
    int n_vertices() const { return n_vertices_; }

    /// Amplitude per ket (aligned with kets()), OpenMP-parallel over kets.
    std::vector<cplx> evaluate(const std::vector<cplx>& weights) const;

    /// Serial reference for the same computation.
    std::vector<cplx> evaluate_serial(const std::vector<cplx>& weights) const;

    /// Per-edge derivative sums for the gradient. For edge e:
    ///   P[e] = sum over matchings m containing e of cofactor(m, e) * coeff_t[ket(m)]
    ///   Q[e] = sum over matchings m containing e of cofactor(m, e) * coeff_a[ket(m)]
    /// where cofactor(m, e) is the product of the other member weights.
    /// Parallel over edges; each component is a fixed-order serial sum, so
    /// results are independent of the thread count.
    void per_edge_sums(const std::vector<cplx>& weights,
                       const std::vector<cplx>& coeff_t,
                       const std::vector<cplx>& coeff_a,
                       std::vector<cplx>& P,
                       std::vector<cplx>& Q) const;

    StateVector to_state(const Graph& g, const std::vector<cplx>& amps) const;

  private:
    int n_vertices_ = 0;
    std::size_t n_edges_ = 0;
    std::vector<int> dims_;
    std::vector<KetCode> kets_;                           // sorted unique
    std::vector<std::vector<std::int32_t>> matching_edges_;  // sorted by (ket, edges)
    std::vector<std::int32_t> matching_ket_index_;
    std::vector<std::size_t> ket_offsets_;                // kets_.size() + 1
    std::vector<std::vector<std::int32_t>> edge_matchings_;  // per edge, ascending
};

/// Coherent sum over perfect matchings: the post-selected state. Serial
/// reference path; the OpenMP path goes through MatchingTable::evaluate.
StateVector state_from_graph(const Graph& g);

}  // namespace pathid
