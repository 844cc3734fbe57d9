#include "pathid/state.hpp"

#include <stdexcept>

namespace pathid {

KetCode ket_encode(const std::vector<int>& modes) {
    if (modes.size() > static_cast<std::size_t>(kMaxVertices))
        throw std::invalid_argument("ket has more than 16 vertices");
    KetCode code = 0;
    for (std::size_t v = 0; v < modes.size(); ++v) {
        if (modes[v] < 0 || modes[v] >= kMaxModes)
            throw std::invalid_argument("mode label out of nibble range");
        code |= KetCode(modes[v]) << (4 * v);
    }
    return code;
}

std::vector<int> ket_decode(KetCode code, int n_vertices) {
    std::vector<int> modes(static_cast<std::size_t>(n_vertices));
    for (int v = 0; v < n_vertices; ++v) modes[static_cast<std::size_t>(v)] = ket_mode(code, v);
    return modes;
}

std::string ket_to_string(KetCode code, int n_vertices) {
    std::string s = "|";
    for (int v = 0; v < n_vertices; ++v) {
        const int m = ket_mode(code, v);
        s += (m < 10) ? char('0' + m) : char('a' + m - 10);
    }
    s += ">";
    return s;
}

double StateVector::norm2() const {
    double n = 0.0;
    for (const auto& [ket, amp] : amplitudes) n += std::norm(amp);
    return n;
}

void StateVector::prune(double tol) {
    for (auto it = amplitudes.begin(); it != amplitudes.end();) {
        if (std::abs(it->second) < tol)
            it = amplitudes.erase(it);
        else
            ++it;
    }
}

}  // namespace pathid
