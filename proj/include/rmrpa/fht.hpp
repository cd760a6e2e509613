#pragma once

#include <bit>
#include <cstdint>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "rmrpa/bitword.hpp"

namespace rmrpa {

using LlrWord = std::vector<double>;

// In-place Walsh-Hadamard transform, unnormalized:
//   out[u] = sum_z (-1)^<u, z> in[z]
// where <u, z> is the GF(2) inner product of the bit expansions. Butterfly
// stage h pairs indices that differ in one bit, so the whole transform is
// n log2 n adds. Applying it twice multiplies the input by n.
inline void fht_inplace(std::vector<double>& x) {
    std::size_t n = x.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fht: length must be a power of two");
    for (std::size_t h = 1; h < n; h <<= 1) {
        for (std::size_t i = 0; i < n; i += h << 1) {
            for (std::size_t j = i; j < i + h; ++j) {
                double a = x[j];
                double b = x[j + h];
                x[j] = a + b;
                x[j + h] = a - b;
            }
        }
    }
}

inline std::vector<double> fht(std::vector<double> x) {
    fht_inplace(x);
    return x;
}

// Maximum-likelihood decision for first-order codewords c(z) = u0 ^ <u, z>.
// The correlation of (-1)^c with the LLR word is (-1)^u0 * Lhat(u), so the
// best pair maximizes |Lhat(u)|. Deterministic ties: smallest integer u
// wins, and u0 = 0 when Lhat(u*) is zero.
struct Order1Decision {
    std::uint32_t u = 0;
    unsigned u0 = 0;
    double score = 0; // correlation of the winner, always >= 0
};

inline Order1Decision ml_decide_order1(const LlrWord& llr) {
    std::vector<double> spec = fht(llr);
    std::size_t best = 0;
    double best_mag = spec[0] < 0 ? -spec[0] : spec[0];
    for (std::size_t u = 1; u < spec.size(); ++u) {
        double mag = spec[u] < 0 ? -spec[u] : spec[u];
        if (mag > best_mag) {
            best = u;
            best_mag = mag;
        }
    }
    Order1Decision d;
    d.u = std::uint32_t(best);
    d.u0 = spec[best] < 0 ? 1 : 0;
    d.score = best_mag;
    return d;
}

inline BitWord ml_decode_order1(const LlrWord& llr) {
    Order1Decision d = ml_decide_order1(llr);
    BitWord cw(llr.size());
    for (std::size_t z = 0; z < llr.size(); ++z) {
        unsigned bit = d.u0 ^ (std::popcount(std::uint32_t(z) & d.u) & 1u);
        if (bit) cw.set(z, true);
    }
    return cw;
}

} // namespace rmrpa
