// Benchmarks comparing the parallel state-evaluation kernels against the
// serial reference implementations.

#include <benchmark/benchmark.h>

#include <random>

#include "pathid/matchings.hpp"

using namespace pathid;

namespace {

Graph dense_graph(int n) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Graph g(n, 2);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            for (int cu = 0; cu < 2; ++cu)
                for (int cv = 0; cv < 2; ++cv) g.add_edge(u, v, cu, cv, cplx{uni(rng), uni(rng)});
    g.sort_edges();
    return g;
}

std::vector<cplx> edge_weights(const Graph& g) {
    std::vector<cplx> weights;
    weights.reserve(g.edges.size());
    for (const auto& e : g.edges) weights.push_back(e.weight);
    return weights;
}

void bench_evaluate_parallel(benchmark::State& state) {
    const Graph g = dense_graph(static_cast<int>(state.range(0)));
    const MatchingTable table(g);
    const auto weights = edge_weights(g);
    for (auto _ : state) {
        auto amps = table.evaluate(weights);
        benchmark::DoNotOptimize(amps.data());
    }
    state.counters["matchings"] = static_cast<double>(table.n_matchings());
}

void bench_evaluate_serial(benchmark::State& state) {
    const Graph g = dense_graph(static_cast<int>(state.range(0)));
    const MatchingTable table(g);
    const auto weights = edge_weights(g);
    for (auto _ : state) {
        auto amps = table.evaluate_serial(weights);
        benchmark::DoNotOptimize(amps.data());
    }
    state.counters["matchings"] = static_cast<double>(table.n_matchings());
}

void bench_gradient_sums(benchmark::State& state) {
    const Graph g = dense_graph(static_cast<int>(state.range(0)));
    const MatchingTable table(g);
    const auto weights = edge_weights(g);
    std::vector<cplx> coeff_t(table.kets().size(), cplx{1.0, 0.0});
    std::vector<cplx> coeff_a(table.kets().size(), cplx{0.5, 0.5});
    std::vector<cplx> P, Q;
    for (auto _ : state) {
        table.per_edge_sums(weights, coeff_t, coeff_a, P, Q);
        benchmark::DoNotOptimize(P.data());
        benchmark::DoNotOptimize(Q.data());
    }
}

BENCHMARK(bench_evaluate_parallel)->Arg(6)->Arg(8)->Arg(10);
BENCHMARK(bench_evaluate_serial)->Arg(6)->Arg(8)->Arg(10);
BENCHMARK(bench_gradient_sums)->Arg(6)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
