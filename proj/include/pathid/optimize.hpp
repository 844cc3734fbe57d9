#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pathid/graph.hpp"
#include "pathid/matchings.hpp"
#include "pathid/targets.hpp"

namespace pathid {

struct OptimizerConfig {
    int restarts = 50;
    std::uint64_t seed = 0;
    double loss_threshold = 1e-3;    // acceptance/pruning
    double triage_threshold = 1e-2;  // restart is worth pruning below this
    int max_iterations = 300;
    double weight_bound = 1.0;
    bool complex_weights = false;
    std::uint64_t matching_limit = 10'000'000;
    bool allow_large = false;
    int jobs = 0;  // 0 = all available cores
};

/// Everything needed to pose one discovery problem.
struct ExperimentSpec {
    LocationLayout layout;
    std::vector<int> dims;  // per vertex, payoff and ancilla alike
    TargetState target;     // payoff-only
    bool forbid_cross_edges = true;
    int ancilla_mode = 0;
    OptimizerConfig opt;

    std::vector<std::string> validate() const;
    TargetState extended_target() const;
};

struct PruneStep {
    Edge edge;
    bool accepted = false;
    double loss_after = 1.0;
};

struct Solution {
    Graph graph;
    double loss = 1.0;
    double fidelity = 0.0;
    bool success = false;
    int restarts_used = 0;
    std::uint64_t seed = 0;
    double wall_time_s = 0.0;
    std::string message;
    std::vector<PruneStep> prune_trace;
};

/// The complete allowed colored multigraph: every vertex pair and color pair,
/// except pairs crossing distinct location groups when the constraint is on.
Graph init_topology(const ExperimentSpec& spec);

/// Loss 1 - fidelity over a fixed topology; matchings enumerated once and
/// cached, weights re-evaluated per call.
class LossModel {
  public:
    LossModel(Graph topology, const TargetState& extended_target, bool complex_weights,
              std::uint64_t matching_limit = std::numeric_limits<std::uint64_t>::max(),
              bool* truncated = nullptr);

    std::size_t n_params() const;
    bool has_matchings() const { return table_.n_matchings() > 0; }
    const Graph& topology() const { return topo_; }
    const MatchingTable& table() const { return table_; }

    std::vector<cplx> weights_from_params(const std::vector<double>& params) const;
    std::vector<double> params_from_weights(const std::vector<cplx>& weights) const;

    double loss(const std::vector<double>& params) const;
    /// Loss and its analytic gradient (real and imaginary parts of each
    /// weight as independent reals).
    double loss_and_gradient(const std::vector<double>& params,
                             std::vector<double>& grad) const;

  private:
    Graph topo_;
    MatchingTable table_;
    bool complex_ = false;
    std::vector<cplx> target_on_kets_;  // target amplitude per table ket
    double target_norm2_ = 0.0;
};

struct ContinuousResult {
    std::vector<double> params;
    double loss = 1.0;
    int iterations = 0;
};

/// Box-projected L-BFGS with Armijo backtracking.
ContinuousResult lbfgs_minimize(
    const std::function<double(const std::vector<double>&, std::vector<double>&)>& fg,
    std::vector<double> x0, int max_iterations, double bound, double f_tol = 1e-10);

/// Local minimization from uniform-random initial weights in [-bound, bound]
/// (or from `warm_start` when given). Throws std::runtime_error
/// "unrealizable topology" when the topology has no perfect matching.
ContinuousResult continuous_optimize(const LossModel& model, const OptimizerConfig& opt,
                                     std::mt19937_64& rng,
                                     const std::optional<std::vector<double>>& warm_start = {});

/// Greedy edge deletion in ascending |weight| order (ties: lexicographic edge
/// tuple); each deletion is re-optimized and kept only if the loss stays
/// below the threshold.
Solution topological_prune(const ExperimentSpec& spec, const Graph& optimized_graph,
                           double current_loss, std::mt19937_64& rng);

/// Full discovery: restarts of init -> continuous optimize -> prune, with a
/// deterministic reduction over restart results.
Solution discover(const ExperimentSpec& spec);

}  // namespace pathid
