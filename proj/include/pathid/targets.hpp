#pragma once

#include <map>
#include <string>
#include <vector>

#include "pathid/state.hpp"

namespace pathid {

/// Target state over the payoff vertices only; ancilla extension is a
/// separate, explicit step.
struct TargetState {
    int n_particles = 0;
    std::vector<int> dims;
    std::map<KetCode, cplx> terms;

    double norm2() const;
};

/// |0...0> + |1...1> + ... + |(d-1)...(d-1)> over n particles, 1/sqrt(d) each.
TargetState ghz_state(int n, int d = 2);

/// Symmetric single-excitation superposition over n qubits, 1/sqrt(n) each.
TargetState w_state(int n);

/// The four-term Schmidt-rank-vector (4,2,2) state over dims (4,2,2).
TargetState srv_422_state();

enum class LogicalCode {
    repetition3,  // 3-qubit bit-flip repetition code
    surface412,   // [[4,1,2]] error-detection code
    qutrit312,    // [[3,1,2]]_3 three-qutrit code
    ampdamp413,   // [[4,1]]_3 amplitude-damping qutrit code
};

LogicalCode logical_code_from_name(const std::string& name);
std::string logical_code_name(LogicalCode code);

/// Logical Bell state for the qubit codes; for the qutrit codes, the hybrid
/// logical-physical Bell state (logical block entangled with one bare qudit).
TargetState logical_bell(LogicalCode code);

/// Physical sites holding payoff vertices, plus heralding ancilla vertices.
struct LocationLayout {
    std::vector<std::pair<std::string, std::vector<int>>> groups;
    std::vector<int> ancillas;

    int total_vertices() const;
    std::vector<int> payoff_vertices() const;  // ascending
    /// Group index per vertex, -1 for ancillas. Throws on overlap/gap.
    std::vector<int> group_of_vertex() const;
    std::vector<std::string> validate() const;
};

/// Tensor-extend a payoff-only target to all vertices, fixing every ancilla
/// to `ancilla_mode`. Payoff slot i corresponds to the i-th payoff vertex in
/// ascending order.
TargetState extend_with_ancillas(const TargetState& target, const LocationLayout& layout,
                                 const std::vector<int>& full_dims, int ancilla_mode = 0);

/// |<t|psi>|^2 / (<psi|psi> <t|t>), in [0, 1]. Throws on zero-norm state.
double fidelity(const StateVector& state, const TargetState& target);

/// Per-party ranks of the bipartite coefficient matrices (party vs rest),
/// counted from singular values above 1e-10 * sigma_max.
std::vector<int> schmidt_rank_vector(const TargetState& state,
                                     const std::vector<std::vector<int>>& parties);

}  // namespace pathid
