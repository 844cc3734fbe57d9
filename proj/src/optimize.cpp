#include "pathid/optimize.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <stdexcept>

namespace pathid {

std::vector<std::string> ExperimentSpec::validate() const {
    std::vector<std::string> violations = layout.validate();
    const int n = layout.total_vertices();
    if (n % 2 != 0) violations.push_back("total vertex count is odd");
    if (n > kMaxVertices)
        violations.push_back("total vertex count exceeds supported maximum " +
                             std::to_string(kMaxVertices));
    if (static_cast<int>(dims.size()) != n)
        violations.push_back("dims size does not match layout vertex count");
    for (std::size_t v = 0; v < dims.size(); ++v)
        if (dims[v] < 2 || dims[v] > kMaxModes)
            violations.push_back("dims[" + std::to_string(v) + "] out of range");
    const auto payoff = layout.payoff_vertices();
    if (static_cast<int>(payoff.size()) != target.n_particles)
        violations.push_back("target particle count does not match payoff vertex count");
    else if (static_cast<int>(dims.size()) == n) {
        for (std::size_t i = 0; i < payoff.size(); ++i) {
            if (i < target.dims.size() &&
                target.dims[i] > dims[static_cast<std::size_t>(payoff[i])])
                violations.push_back("target dim " + std::to_string(target.dims[i]) +
                                     " exceeds dims of payoff vertex " + std::to_string(payoff[i]));
        }
    }
    if (ancilla_mode < 0) violations.push_back("ancilla mode must be non-negative");
    for (int a : layout.ancillas)
        if (static_cast<std::size_t>(a) < dims.size() && ancilla_mode >= dims[static_cast<std::size_t>(a)])
            violations.push_back("ancilla mode out of range for vertex " + std::to_string(a));
    return violations;
}

TargetState ExperimentSpec::extended_target() const {
    return extend_with_ancillas(target, layout, dims, ancilla_mode);
}

Graph init_topology(const ExperimentSpec& spec) {
    const int n = spec.layout.total_vertices();
    Graph g(n, spec.dims);
    const auto owner = spec.layout.group_of_vertex();
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            if (spec.forbid_cross_edges && owner[static_cast<std::size_t>(u)] >= 0 &&
                owner[static_cast<std::size_t>(v)] >= 0 &&
                owner[static_cast<std::size_t>(u)] != owner[static_cast<std::size_t>(v)])
                continue;
            for (int cu = 0; cu < spec.dims[static_cast<std::size_t>(u)]; ++cu)
                for (int cv = 0; cv < spec.dims[static_cast<std::size_t>(v)]; ++cv)
                    g.add_edge(u, v, cu, cv);
        }
    }
    g.sort_edges();
    return g;
}

LossModel::LossModel(Graph topology, const TargetState& extended_target, bool complex_weights,
                     std::uint64_t matching_limit, bool* truncated)
    : topo_(std::move(topology)), complex_(complex_weights) {
    topo_.sort_edges();
    table_ = MatchingTable(topo_, matching_limit, truncated);
    target_norm2_ = extended_target.norm2();
    target_on_kets_.reserve(table_.kets().size());
    for (KetCode ket : table_.kets()) {
        auto it = extended_target.terms.find(ket);
        target_on_kets_.push_back(it == extended_target.terms.end() ? cplx{0.0, 0.0}
                                                                    : it->second);
    }
}

std::size_t LossModel::n_params() const {
    return topo_.edges.size() * (complex_ ? 2 : 1);
}

std::vector<cplx> LossModel::weights_from_params(const std::vector<double>& params) const {
    const std::size_t m = topo_.edges.size();
    std::vector<cplx> w(m);
    for (std::size_t i = 0; i < m; ++i)
        w[i] = complex_ ? cplx{params[2 * i], params[2 * i + 1]} : cplx{params[i], 0.0};
    return w;
}

std::vector<double> LossModel::params_from_weights(const std::vector<cplx>& weights) const {
    std::vector<double> p(n_params());
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (complex_) {
            p[2 * i] = weights[i].real();
            p[2 * i + 1] = weights[i].imag();
        } else {
            p[i] = weights[i].real();
        }
    }
    return p;
}

double LossModel::loss(const std::vector<double>& params) const {
    const auto w = weights_from_params(params);
    const auto amps = table_.evaluate(w);
    cplx s = 0.0;
    double n2 = 0.0;
    for (std::size_t k = 0; k < amps.size(); ++k) {
        s += std::conj(target_on_kets_[k]) * amps[k];
        n2 += std::norm(amps[k]);
    }
    if (n2 < 1e-300) return 1.0;
    return 1.0 - std::norm(s) / (n2 * target_norm2_);
}

double LossModel::loss_and_gradient(const std::vector<double>& params,
                                    std::vector<double>& grad) const {
    const auto w = weights_from_params(params);
    const auto amps = table_.evaluate(w);
    grad.assign(n_params(), 0.0);

    cplx s = 0.0;
    double n2 = 0.0;
    for (std::size_t k = 0; k < amps.size(); ++k) {
        s += std::conj(target_on_kets_[k]) * amps[k];
        n2 += std::norm(amps[k]);
    }
    if (n2 < 1e-300) return 1.0;  // degenerate: flat loss 1 so descent can escape

    std::vector<cplx> coeff_t(amps.size()), coeff_a(amps.size());
    for (std::size_t k = 0; k < amps.size(); ++k) {
        coeff_t[k] = std::conj(target_on_kets_[k]);
        coeff_a[k] = std::conj(amps[k]);
    }
    std::vector<cplx> P, Q;
    table_.per_edge_sums(w, coeff_t, coeff_a, P, Q);

    const double s2 = std::norm(s);
    const double denom = n2 * n2 * target_norm2_;
    const cplx cs = std::conj(s);
    for (std::size_t e = 0; e < topo_.edges.size(); ++e) {
        // dF/dx = (2 Re(conj(s) P) n2 - |s|^2 2 Re(Q)) / (n2^2 T); dL = -dF
        const double dfdx = (2.0 * (cs * P[e]).real() * n2 - s2 * 2.0 * Q[e].real()) / denom;
        if (complex_) {
            const double dfdy =
                (-2.0 * (cs * P[e]).imag() * n2 - s2 * (-2.0) * Q[e].imag()) / denom;
            grad[2 * e] = -dfdx;
            grad[2 * e + 1] = -dfdy;
        } else {
            grad[e] = -dfdx;
        }
    }
    return 1.0 - s2 / (n2 * target_norm2_);
}

ContinuousResult lbfgs_minimize(
    const std::function<double(const std::vector<double>&, std::vector<double>&)>& fg,
    std::vector<double> x0, int max_iterations, double bound, double f_tol) {
    const std::size_t n = x0.size();
    auto project = [&](std::vector<double>& x) {
        for (double& xi : x) xi = std::clamp(xi, -bound, bound);
    };
    project(x0);

    constexpr int kHistory = 8;
    std::vector<std::vector<double>> s_hist, y_hist;
    std::vector<double> rho_hist;

    std::vector<double> x = std::move(x0);
    std::vector<double> g(n), g_new(n);
    double f = fg(x, g);
    int iter = 0;

    for (; iter < max_iterations; ++iter) {
        // Two-loop recursion for the search direction.
        std::vector<double> q = g;
        const int m = static_cast<int>(s_hist.size());
        std::vector<double> alpha(static_cast<std::size_t>(m));
        for (int i = m - 1; i >= 0; --i) {
            double a = 0.0;
            for (std::size_t j = 0; j < n; ++j) a += s_hist[static_cast<std::size_t>(i)][j] * q[j];
            a *= rho_hist[static_cast<std::size_t>(i)];
            alpha[static_cast<std::size_t>(i)] = a;
            for (std::size_t j = 0; j < n; ++j) q[j] -= a * y_hist[static_cast<std::size_t>(i)][j];
        }
        if (m > 0) {
            double yy = 0.0, sy = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                yy += y_hist.back()[j] * y_hist.back()[j];
                sy += s_hist.back()[j] * y_hist.back()[j];
            }
            if (yy > 0.0)
                for (std::size_t j = 0; j < n; ++j) q[j] *= sy / yy;
        }
        for (int i = 0; i < m; ++i) {
            double b = 0.0;
            for (std::size_t j = 0; j < n; ++j) b += y_hist[static_cast<std::size_t>(i)][j] * q[j];
            b *= rho_hist[static_cast<std::size_t>(i)];
            for (std::size_t j = 0; j < n; ++j)
                q[j] += (alpha[static_cast<std::size_t>(i)] - b) * s_hist[static_cast<std::size_t>(i)][j];
        }
        // q is now the descent direction (to be subtracted).
        double gq = 0.0, gnorm = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            gq += g[j] * q[j];
            gnorm = std::max(gnorm, std::abs(g[j]));
        }
        if (gnorm < 1e-12) break;
        if (gq <= 0.0) {  // not a descent direction; fall back to steepest descent
            q = g;
            gq = 0.0;
            for (std::size_t j = 0; j < n; ++j) gq += g[j] * g[j];
        }

        double step = 1.0;
        double f_new = f;
        std::vector<double> x_new(n);
        bool improved = false;
        for (int bt = 0; bt < 40; ++bt) {
            for (std::size_t j = 0; j < n; ++j) x_new[j] = x[j] - step * q[j];
            project(x_new);
            f_new = fg(x_new, g_new);
            if (f_new <= f - 1e-4 * step * gq || f_new < f - 1e-14) {
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if (!improved) break;

        std::vector<double> s_vec(n), y_vec(n);
        double sy = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            s_vec[j] = x_new[j] - x[j];
            y_vec[j] = g_new[j] - g[j];
            sy += s_vec[j] * y_vec[j];
        }
        if (sy > 1e-12) {
            s_hist.push_back(std::move(s_vec));
            y_hist.push_back(std::move(y_vec));
            rho_hist.push_back(1.0 / sy);
            if (static_cast<int>(s_hist.size()) > kHistory) {
                s_hist.erase(s_hist.begin());
                y_hist.erase(y_hist.begin());
                rho_hist.erase(rho_hist.begin());
            }
        }
        const double improvement = f - f_new;
        x = std::move(x_new);
        g = g_new;
        f = f_new;
        if (improvement < f_tol) {
            ++iter;
            break;
        }
    }
    return ContinuousResult{std::move(x), f, iter};
}

ContinuousResult continuous_optimize(const LossModel& model, const OptimizerConfig& opt,
                                     std::mt19937_64& rng,
                                     const std::optional<std::vector<double>>& warm_start) {
    if (!model.has_matchings()) throw std::runtime_error("unrealizable topology");
    std::vector<double> x0;
    if (warm_start) {
        x0 = *warm_start;
    } else {
        std::uniform_real_distribution<double> uni(-opt.weight_bound, opt.weight_bound);
        x0.resize(model.n_params());
        for (double& xi : x0) xi = uni(rng);
    }
    auto fg = [&model](const std::vector<double>& x, std::vector<double>& grad) {
        return model.loss_and_gradient(x, grad);
    };
    return lbfgs_minimize(fg, std::move(x0), opt.max_iterations, opt.weight_bound);
}

namespace {

Graph with_weights(const Graph& topo, const std::vector<cplx>& weights) {
    Graph g = topo;
    for (std::size_t i = 0; i < g.edges.size(); ++i) g.edges[i].weight = weights[i];
    return g;
}

std::uint64_t restart_seed(std::uint64_t base, int restart) {
    // splitmix64 over (base, restart)
    std::uint64_t z = base + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(restart + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace

Solution topological_prune(const ExperimentSpec& spec, const Graph& optimized_graph,
                           double current_loss, std::mt19937_64& rng) {
    const TargetState target = spec.extended_target();
    Graph g = optimized_graph;
    double loss = current_loss;
    std::set<std::array<int, 4>> frozen;
    Solution sol;

    while (true) {
        // Smallest unfrozen |weight|, ties by lexicographic edge tuple.
        std::ptrdiff_t pick = -1;
        for (std::size_t i = 0; i < g.edges.size(); ++i) {
            if (frozen.count(g.edges[i].key())) continue;
            if (pick < 0 ||
                std::abs(g.edges[i].weight) < std::abs(g.edges[static_cast<std::size_t>(pick)].weight) ||
                (std::abs(g.edges[i].weight) == std::abs(g.edges[static_cast<std::size_t>(pick)].weight) &&
                 g.edges[i].key() < g.edges[static_cast<std::size_t>(pick)].key()))
                pick = static_cast<std::ptrdiff_t>(i);
        }
        if (pick < 0) break;

        const Edge removed = g.edges[static_cast<std::size_t>(pick)];
        Graph candidate = g.without_edge(static_cast<std::size_t>(pick));
        PruneStep step{removed, false, loss};
        bool accepted = false;
        try {
            LossModel model(candidate, target, spec.opt.complex_weights, spec.opt.matching_limit);
            std::vector<cplx> warm_weights;
            warm_weights.reserve(candidate.edges.size());
            for (const Edge& e : candidate.edges) warm_weights.push_back(e.weight);
            auto res = continuous_optimize(model, spec.opt, rng,
                                           model.params_from_weights(warm_weights));
            if (res.loss <= spec.opt.loss_threshold) {
                g = with_weights(model.topology(), model.weights_from_params(res.params));
                loss = res.loss;
                accepted = true;
                step.accepted = true;
                step.loss_after = res.loss;
            }
        } catch (const std::runtime_error&) {
            // unrealizable topology: restore and freeze
        }
        if (!accepted) frozen.insert(removed.key());
        sol.prune_trace.push_back(step);
    }

    sol.graph = g;
    sol.loss = loss;
    sol.fidelity = 1.0 - loss;
    sol.success = loss <= spec.opt.loss_threshold;
    return sol;
}

Solution discover(const ExperimentSpec& spec) {
    const auto t0 = std::chrono::steady_clock::now();
    if (spec.layout.total_vertices() % 2 != 0) {
        Solution sol;
        sol.message = "no perfect matchings possible: odd vertex count";
        return sol;
    }
    auto violations = spec.validate();
    if (!violations.empty()) {
        Solution sol;
        sol.message = "invalid spec: " + violations.front();
        return sol;
    }

    const Graph topo = init_topology(spec);
    const TargetState target = spec.extended_target();
    bool truncated = false;
    {
        MatchingTable probe(topo, spec.opt.matching_limit, &truncated);
        if (truncated && !spec.opt.allow_large) {
            Solution sol;
            sol.message = "topology exceeds matching limit " +
                          std::to_string(spec.opt.matching_limit) +
                          "; pass allow_large to override";
            return sol;
        }
        if (probe.n_matchings() == 0) {
            Solution sol;
            sol.message = "no perfect matchings possible for the allowed topology";
            return sol;
        }
    }

    const int restarts = std::max(1, spec.opt.restarts);
    std::vector<Solution> results(static_cast<std::size_t>(restarts));

    if (spec.opt.jobs > 0) omp_set_num_threads(spec.opt.jobs);

    // The matching table depends only on topology, so one model is shared
    // read-only across restarts.
    const LossModel shared_model(topo, target, spec.opt.complex_weights,
                                 std::numeric_limits<std::uint64_t>::max());

#pragma omp parallel for schedule(dynamic, 1)
    for (int r = 0; r < restarts; ++r) {
        std::mt19937_64 rng(restart_seed(spec.opt.seed, r));
        const LossModel& model = shared_model;
        auto res = continuous_optimize(model, spec.opt, rng);
        Solution sol;
        sol.graph = with_weights(model.topology(), model.weights_from_params(res.params));
        sol.loss = res.loss;
        sol.fidelity = 1.0 - res.loss;
        if (res.loss <= spec.opt.triage_threshold)
            sol = topological_prune(spec, sol.graph, sol.loss, rng);
        results[static_cast<std::size_t>(r)] = std::move(sol);
    }

    // Deterministic reduction: among successes, fewest edges, then lowest
    // loss, then lowest restart index; otherwise the best loss seen.
    std::ptrdiff_t best = -1;
    for (int r = 0; r < restarts; ++r) {
        const Solution& cand = results[static_cast<std::size_t>(r)];
        if (best < 0) {
            best = r;
            continue;
        }
        const Solution& cur = results[static_cast<std::size_t>(best)];
        if (cand.success != cur.success) {
            if (cand.success) best = r;
            continue;
        }
        if (cand.success) {
            const auto ck = std::make_pair(cand.graph.edges.size(), cand.loss);
            const auto bk = std::make_pair(cur.graph.edges.size(), cur.loss);
            if (ck < bk) best = r;
        } else if (cand.loss < cur.loss) {
            best = r;
        }
    }

    Solution sol = results[static_cast<std::size_t>(best)];
    sol.restarts_used = restarts;
    sol.seed = spec.opt.seed;
    sol.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!sol.success && sol.message.empty())
        sol.message = "no solution found below loss threshold; best loss " + std::to_string(sol.loss);
    return sol;
}

}  // namespace pathid
