#include "pathid/targets.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace pathid {

namespace {

TargetState make_uniform(int n, std::vector<int> dims, const std::vector<std::vector<int>>& kets) {
    TargetState t;
    t.n_particles = n;
    t.dims = std::move(dims);
    const double amp = 1.0 / std::sqrt(static_cast<double>(kets.size()));
    for (const auto& k : kets) t.terms[ket_encode(k)] = amp;
    return t;
}

using Codeword = std::vector<std::vector<int>>;  // equal-amplitude physical kets

// Logical Bell between two identical blocks: sum_k |k_L>|k_L> / sqrt(d).
TargetState block_bell(const std::vector<Codeword>& codewords, int block_len, int dim) {
    TargetState t;
    t.n_particles = 2 * block_len;
    t.dims.assign(static_cast<std::size_t>(2 * block_len), dim);
    const auto d = static_cast<double>(codewords.size());
    for (const auto& cw : codewords) {
        const double amp = 1.0 / (d * static_cast<double>(cw.size()));
        for (const auto& a : cw)
            for (const auto& b : cw) {
                std::vector<int> modes = a;
                modes.insert(modes.end(), b.begin(), b.end());
                t.terms[ket_encode(modes)] += amp * std::sqrt(d);
            }
    }
    return t;
}

// Hybrid logical-physical Bell: sum_k |k_L>|k> / sqrt(d).
TargetState hybrid_bell(const std::vector<Codeword>& codewords, int block_len, int dim) {
    TargetState t;
    t.n_particles = block_len + 1;
    t.dims.assign(static_cast<std::size_t>(block_len + 1), dim);
    const auto d = static_cast<double>(codewords.size());
    for (std::size_t k = 0; k < codewords.size(); ++k) {
        const double amp = 1.0 / std::sqrt(d * static_cast<double>(codewords[k].size()));
        for (const auto& a : codewords[k]) {
            std::vector<int> modes = a;
            modes.push_back(static_cast<int>(k));
            t.terms[ket_encode(modes)] += amp;
        }
    }
    return t;
}

}  // namespace

double TargetState::norm2() const {
    double n = 0.0;
    for (const auto& [ket, amp] : terms) n += std::norm(amp);
    return n;
}

TargetState ghz_state(int n, int d) {
    if (n < 2) throw std::invalid_argument("ghz_state requires n >= 2");
    if (d < 2) throw std::invalid_argument("ghz_state requires d >= 2");
    std::vector<std::vector<int>> kets;
    for (int level = 0; level < d; ++level)
        kets.emplace_back(static_cast<std::size_t>(n), level);
    return make_uniform(n, std::vector<int>(static_cast<std::size_t>(n), d), kets);
}

TargetState w_state(int n) {
    if (n < 2) throw std::invalid_argument("w_state requires n >= 2");
    std::vector<std::vector<int>> kets;
    for (int i = 0; i < n; ++i) {
        std::vector<int> k(static_cast<std::size_t>(n), 0);
        k[static_cast<std::size_t>(i)] = 1;
        kets.push_back(std::move(k));
    }
    return make_uniform(n, std::vector<int>(static_cast<std::size_t>(n), 2), kets);
}

TargetState srv_422_state() {
    return make_uniform(3, {4, 2, 2}, {{3, 1, 1}, {2, 1, 0}, {1, 0, 1}, {0, 0, 0}});
}

LogicalCode logical_code_from_name(const std::string& name) {
    if (name == "repetition3") return LogicalCode::repetition3;
    if (name == "surface412") return LogicalCode::surface412;
    if (name == "qutrit312") return LogicalCode::qutrit312;
    if (name == "ampdamp413") return LogicalCode::ampdamp413;
    throw std::invalid_argument("unknown logical code: " + name);
}

std::string logical_code_name(LogicalCode code) {
    switch (code) {
        case LogicalCode::repetition3: return "repetition3";
        case LogicalCode::surface412: return "surface412";
        case LogicalCode::qutrit312: return "qutrit312";
        case LogicalCode::ampdamp413: return "ampdamp413";
    }
    throw std::invalid_argument("unknown logical code enum");
}

TargetState logical_bell(LogicalCode code) {
    switch (code) {
        case LogicalCode::repetition3:
            return block_bell({{{0, 0, 0}}, {{1, 1, 1}}}, 3, 2);
        case LogicalCode::surface412:
            return block_bell({{{0, 0, 0, 0}, {1, 1, 1, 1}}, {{0, 0, 1, 1}, {1, 1, 0, 0}}}, 4, 2);
        case LogicalCode::qutrit312:
            return hybrid_bell({{{0, 0, 0}, {1, 1, 1}, {2, 2, 2}},
                                {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}},
                                {{0, 2, 1}, {1, 0, 2}, {2, 1, 0}}},
                               3, 3);
        case LogicalCode::ampdamp413:
            return hybrid_bell({{{0, 0, 0, 0}, {1, 1, 1, 1}, {2, 2, 2, 2}},
                                {{0, 0, 1, 1}, {1, 1, 2, 2}, {2, 2, 0, 0}},
                                {{1, 1, 0, 0}, {2, 2, 1, 1}, {0, 0, 2, 2}}},
                               4, 3);
    }
    throw std::invalid_argument("unknown logical code enum");
}

int LocationLayout::total_vertices() const {
    int n = static_cast<int>(ancillas.size());
    for (const auto& [name, verts] : groups) n += static_cast<int>(verts.size());
    return n;
}

std::vector<int> LocationLayout::payoff_vertices() const {
    std::vector<int> payoff;
    for (const auto& [name, verts] : groups) payoff.insert(payoff.end(), verts.begin(), verts.end());
    std::sort(payoff.begin(), payoff.end());
    return payoff;
}

std::vector<int> LocationLayout::group_of_vertex() const {
    auto violations = validate();
    if (!violations.empty()) throw std::invalid_argument("invalid layout: " + violations.front());
    std::vector<int> owner(static_cast<std::size_t>(total_vertices()), -1);
    for (std::size_t gi = 0; gi < groups.size(); ++gi)
        for (int v : groups[gi].second) owner[static_cast<std::size_t>(v)] = static_cast<int>(gi);
    return owner;
}

std::vector<std::string> LocationLayout::validate() const {
    std::vector<std::string> violations;
    const int n = total_vertices();
    std::vector<int> count(static_cast<std::size_t>(n), 0);
    auto touch = [&](int v, const std::string& where) {
        if (v < 0 || v >= n) {
            violations.push_back(where + ": vertex " + std::to_string(v) + " out of range");
            return;
        }
        if (++count[static_cast<std::size_t>(v)] > 1)
            violations.push_back(where + ": vertex " + std::to_string(v) + " listed more than once");
    };
    for (const auto& [name, verts] : groups)
        for (int v : verts) touch(v, "group " + name);
    for (int v : ancillas) touch(v, "ancillas");
    for (int v = 0; v < n; ++v)
        if (count[static_cast<std::size_t>(v)] == 0)
            violations.push_back("vertex " + std::to_string(v) + " not covered by any group or ancilla");
    return violations;
}

TargetState extend_with_ancillas(const TargetState& target, const LocationLayout& layout,
                                 const std::vector<int>& full_dims, int ancilla_mode) {
    const auto payoff = layout.payoff_vertices();
    if (static_cast<int>(payoff.size()) != target.n_particles)
        throw std::invalid_argument("layout payoff count does not match target particle count");
    const int n = layout.total_vertices();
    if (static_cast<int>(full_dims.size()) != n)
        throw std::invalid_argument("dims size does not match layout vertex count");

    TargetState out;
    out.n_particles = n;
    out.dims = full_dims;
    KetCode base = 0;
    for (int a : layout.ancillas) base = ket_set_mode(base, a, ancilla_mode);
    for (const auto& [ket, amp] : target.terms) {
        KetCode full = base;
        for (std::size_t i = 0; i < payoff.size(); ++i)
            full = ket_set_mode(full, payoff[i], ket_mode(ket, static_cast<int>(i)));
        out.terms[full] = amp;
    }
    return out;
}

double fidelity(const StateVector& state, const TargetState& target) {
    if (state.n_vertices != target.n_particles)
        throw std::invalid_argument("fidelity: vertex count mismatch");
    const double n2 = state.norm2();
    if (n2 <= 0.0) throw std::invalid_argument("fidelity: zero-norm state (degenerate graph)");
    const double t2 = target.norm2();
    if (t2 <= 0.0) throw std::invalid_argument("fidelity: zero-norm target");
    cplx overlap = 0.0;
    for (const auto& [ket, amp] : state.amplitudes) {
        auto it = target.terms.find(ket);
        if (it != target.terms.end()) overlap += std::conj(it->second) * amp;
    }
    return std::norm(overlap) / (n2 * t2);
}

std::vector<int> schmidt_rank_vector(const TargetState& state,
                                     const std::vector<std::vector<int>>& parties) {
    std::set<int> seen;
    std::size_t covered = 0;
    for (const auto& party : parties) {
        for (int v : party) {
            if (v < 0 || v >= state.n_particles)
                throw std::invalid_argument("partition vertex out of range");
            if (!seen.insert(v).second)
                throw std::invalid_argument("partition parties overlap at vertex " + std::to_string(v));
            ++covered;
        }
    }
    if (covered != static_cast<std::size_t>(state.n_particles))
        throw std::invalid_argument("partition does not cover all particles");

    std::vector<int> ranks;
    for (const auto& party : parties) {
        std::vector<int> rest;
        for (int v = 0; v < state.n_particles; ++v)
            if (std::find(party.begin(), party.end(), v) == party.end()) rest.push_back(v);

        auto sub_code = [](KetCode ket, const std::vector<int>& verts) {
            KetCode c = 0;
            for (std::size_t i = 0; i < verts.size(); ++i)
                c = ket_set_mode(c, static_cast<int>(i), ket_mode(ket, verts[i]));
            return c;
        };

        // Index the occupied row/column sub-kets.
        std::map<KetCode, int> rows, cols;
        for (const auto& [ket, amp] : state.terms) {
            rows.emplace(sub_code(ket, party), static_cast<int>(rows.size()));
            cols.emplace(sub_code(ket, rest), static_cast<int>(cols.size()));
        }
        Eigen::MatrixXcd coeff = Eigen::MatrixXcd::Zero(
            static_cast<Eigen::Index>(rows.size()), std::max<Eigen::Index>(1, static_cast<Eigen::Index>(cols.size())));
        for (const auto& [ket, amp] : state.terms)
            coeff(rows.at(sub_code(ket, party)), cols.at(sub_code(ket, rest))) += amp;

        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(coeff);
        const auto& sv = svd.singularValues();
        const double tol = 1e-10 * (sv.size() > 0 ? sv(0) : 0.0);
        int rank = 0;
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            if (sv(i) > tol) ++rank;
        ranks.push_back(std::max(rank, 1));
    }
    return ranks;
}

}  // namespace pathid
