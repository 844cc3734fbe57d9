#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pathid/graph.hpp"

namespace pathid {

/// Packed basis ket: one mode label per vertex, vertex 0 in the low nibble.
using KetCode = std::uint64_t;

KetCode ket_encode(const std::vector<int>& modes);
std::vector<int> ket_decode(KetCode code, int n_vertices);

inline int ket_mode(KetCode code, int vertex) {
    return static_cast<int>((code >> (4 * vertex)) & 0xF);
}

inline KetCode ket_set_mode(KetCode code, int vertex, int mode) {
    const int shift = 4 * vertex;
    return (code & ~(KetCode{0xF} << shift)) | (KetCode(mode) << shift);
}

std::string ket_to_string(KetCode code, int n_vertices);

/// Sparse post-selected state: ket -> complex amplitude, possibly
/// unnormalized. Ordered map keeps iteration deterministic.
struct StateVector {
    int n_vertices = 0;
    std::vector<int> dims;
    std::map<KetCode, cplx> amplitudes;

    double norm2() const;
    void prune(double tol = kPruneTolerance);
};

}  // namespace pathid
