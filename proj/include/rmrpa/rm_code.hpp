#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rmrpa/bitword.hpp"

namespace rmrpa {

// Reed-Muller code RM(m, r) over the point set {0,1}^m.
//
// A point z = (z_1, ..., z_m) is identified with the integer
// sum z_i * 2^(i-1), so z_1 is the least significant bit. Codeword bit z of
// the monomial with variable set A is prod_{i in A} z_i, i.e. 1 exactly when
// A is contained in the support of z.
//
// Basis rows are ordered by ascending monomial degree and, within a degree,
// lexicographically by the sorted variable tuple: for m = 3, r = 2 the order
// is {}, {1}, {2}, {3}, {1,2}, {1,3}, {2,3}. Message bit j multiplies basis
// row j under this order.

inline std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::uint64_t acc = 1;
    for (int i = 1; i <= k; ++i) acc = acc * std::uint64_t(n - k + i) / std::uint64_t(i);
    return acc;
}

// Dimension of RM(m, r): sum of binomial(m, i) for i = 0..r.
inline std::size_t rm_dimension(int m, int r) {
    if (m < 0 || r < 0 || r > m || m > 30)
        throw std::invalid_argument("rm_dimension: need 0 <= r <= m <= 30");
    std::uint64_t k = 0;
    for (int i = 0; i <= r; ++i) k += binomial(m, i);
    return std::size_t(k);
}

struct RmCode {
    int m = 0;
    int r = 0;
    std::size_t n = 0; // 2^m
    std::size_t k = 0;
    // monomials[j]: variable set of basis row j as a bitmask (bit i-1 <-> z_i).
    std::vector<std::uint32_t> monomials;
    std::vector<BitWord> rows;
    Gf2Basis echelon; // row space of rows, for membership tests
};

namespace detail {

// All k-subsets of {1..m} in lexicographic order of the sorted tuple,
// returned as bitmasks. {1,4} precedes {2,3}, which plain mask order would
// reverse.
inline std::vector<std::uint32_t> combinations(int m, int k) {
    std::vector<std::uint32_t> out;
    if (k == 0) {
        out.push_back(0);
        return out;
    }
    if (k > m) return out;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i + 1;
    for (;;) {
        std::uint32_t mask = 0;
        for (int v : idx) mask |= std::uint32_t(1) << (v - 1);
        out.push_back(mask);
        int j = k - 1;
        while (j >= 0 && idx[j] == m - (k - 1 - j)) --j;
        if (j < 0) break;
        ++idx[j];
        for (int t = j + 1; t < k; ++t) idx[t] = idx[t - 1] + 1;
    }
    return out;
}

} // namespace detail

inline RmCode build_code(int m, int r) {
    RmCode code;
    code.m = m;
    code.r = r;
    code.k = rm_dimension(m, r); // validates m, r
    if (m > 26) throw std::invalid_argument("build_code: m > 26 would not fit in memory");
    code.n = std::size_t(1) << m;
    code.monomials.reserve(code.k);
    code.rows.reserve(code.k);
    for (int d = 0; d <= r; ++d)
        for (std::uint32_t mask : detail::combinations(m, d)) code.monomials.push_back(mask);
    for (std::uint32_t mask : code.monomials) {
        BitWord row(code.n);
        for (std::size_t z = 0; z < code.n; ++z)
            if ((std::uint32_t(z) & mask) == mask) row.set(z, true);
        code.rows.push_back(row);
        code.echelon.insert(row);
    }
    return code;
}

inline BitWord encode(const RmCode& code, const BitWord& message) {
    if (message.size() != code.k)
        throw std::invalid_argument("encode: message length must equal code dimension");
    BitWord cw(code.n);
    for (std::size_t j = 0; j < code.k; ++j)
        if (message.get(j)) cw ^= code.rows[j];
    return cw;
}

inline bool is_codeword(const RmCode& code, const BitWord& word) {
    if (word.size() != code.n)
        throw std::invalid_argument("is_codeword: word length must equal code length");
    return code.echelon.contains(word);
}

// s-dimensional linear subspace B of {0,1}^m together with its coset
// structure. Cosets are indexed 0..2^(m-s)-1 in increasing order of their
// minimum element; coset_of[z] gives the index of the coset containing z and
// reps[t] its minimum element.
struct Subspace {
    int m = 0;
    int s = 0;
    std::vector<std::uint32_t> basis;    // s independent nonzero points
    std::vector<std::uint32_t> members;  // all 2^s elements of B, ascending
    std::vector<std::uint32_t> reps;     // coset representatives, ascending
    std::vector<std::uint32_t> coset_of; // length 2^m
};

inline Subspace subspace_from_basis(int m, const std::vector<std::uint32_t>& basis) {
    if (m < 1 || m > 26) throw std::invalid_argument("subspace_from_basis: bad m");
    Subspace sub;
    sub.m = m;
    sub.s = int(basis.size());
    sub.basis = basis;
    std::size_t n = std::size_t(1) << m;
    sub.members.assign(1, 0);
    for (std::uint32_t b : basis) {
        if (b == 0 || b >= n)
            throw std::invalid_argument("subspace_from_basis: basis point out of range");
        std::size_t cur = sub.members.size();
        for (std::size_t i = 0; i < cur; ++i) sub.members.push_back(sub.members[i] ^ b);
    }
    // dependent basis <=> span elements repeat
    {
        std::vector<bool> seen(n, false);
        for (std::uint32_t v : sub.members) {
            if (seen[v]) throw std::invalid_argument("subspace_from_basis: basis points not independent");
            seen[v] = true;
        }
    }
    std::sort(sub.members.begin(), sub.members.end());
    sub.coset_of.assign(n, std::uint32_t(-1));
    sub.reps.reserve(n >> sub.s);
    for (std::size_t z = 0; z < n; ++z) {
        if (sub.coset_of[z] != std::uint32_t(-1)) continue;
        std::uint32_t idx = std::uint32_t(sub.reps.size());
        sub.reps.push_back(std::uint32_t(z)); // first visit in ascending scan, so z is the coset minimum
        for (std::uint32_t v : sub.members) sub.coset_of[z ^ v] = idx;
    }
    return sub;
}

// The 2^m - 1 one-dimensional subspaces {0, z0}, ordered by z0 = 1, 2, ...
inline std::vector<Subspace> enumerate_1d_subspaces(int m) {
    std::size_t n = std::size_t(1) << m;
    std::vector<Subspace> subs;
    subs.reserve(n - 1);
    for (std::uint32_t z0 = 1; z0 < n; ++z0)
        subs.push_back(subspace_from_basis(m, {z0}));
    return subs;
}

// Coset-sum projection: output bit t is the XOR of y over coset t of B.
// Maps RM(m, r) into RM(m - s, r - s) when s <= r.
inline BitWord project(const BitWord& y, const Subspace& sub) {
    if (y.size() != (std::size_t(1) << sub.m))
        throw std::invalid_argument("project: word length must be 2^m");
    BitWord out(y.size() >> sub.s);
    for (std::size_t t = 0; t < out.size(); ++t) {
        unsigned acc = 0;
        for (std::uint32_t v : sub.members) acc ^= unsigned(y.get(sub.reps[t] ^ v));
        if (acc) out.set(t, true);
    }
    return out;
}

// Majority-logic decoding. Coefficients are recovered a degree layer at a
// time, top degree first: for each variable set A of size d, the coset sums
// of the current residual over span{e_i : i in A} all equal the coefficient
// of A when the residual is a degree-d codeword, so their majority is the
// vote. Exact ties resolve to 0. Returns (message, codeword); the codeword
// is the re-encoding of the message, so it is always a member of the code.
inline std::pair<BitWord, BitWord> reed_decode(const RmCode& code, const BitWord& y) {
    if (y.size() != code.n)
        throw std::invalid_argument("reed_decode: word length must equal code length");
    BitWord residual = y;
    BitWord message(code.k);
    std::size_t row_end = code.k;
    for (int d = code.r; d >= 1; --d) {
        std::size_t layer = std::size_t(binomial(code.m, d));
        std::size_t row_begin = row_end - layer;
        BitWord layer_sum(code.n);
        for (std::size_t j = row_begin; j < row_end; ++j) {
            std::vector<std::uint32_t> basis;
            std::uint32_t mask = code.monomials[j];
            while (mask) {
                basis.push_back(mask & (~mask + 1));
                mask &= mask - 1;
            }
            Subspace sub = subspace_from_basis(code.m, basis);
            BitWord proj = project(residual, sub);
            // strict majority of 2^(m-d) votes; tie -> 0
            if (2 * proj.weight() > proj.size()) {
                message.set(j, true);
                layer_sum ^= code.rows[j];
            }
        }
        residual ^= layer_sum;
        row_end = row_begin;
    }
    // degree 0: majority over all coordinates of what remains
    if (2 * residual.weight() > residual.size()) message.set(0, true);
    return {message, encode(code, message)};
}

} // namespace rmrpa
