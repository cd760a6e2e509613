#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "rmrpa/bitword.hpp"
#include "rmrpa/channels.hpp"
#include "rmrpa/rm_code.hpp"
#include "rmrpa/rpa.hpp"

namespace rmrpa {

struct ListConfig {
    int t = 0;          // number of least-reliable coordinates to saturate
    int l_max_rule = 2; // saturation magnitude = l_max_rule * max |L|
};

// Correlation of a codeword with an LLR word: sum of (-1)^{c(z)} L(z).
// Larger is more likely; the transmitted-word score is the yardstick for
// maximum-likelihood lower bounds.
inline double ml_score(const BitWord& c, const LlrWord& L) {
    if (c.size() != L.size())
        throw std::invalid_argument("ml_score: length mismatch");
    double acc = 0.0;
    for (std::size_t z = 0; z < L.size(); ++z) acc += c.get(z) ? -L[z] : L[z];
    return acc;
}

// Indices of the t smallest |L| values; equal magnitudes resolve to the
// smaller index. Result is in increasing order of reliability.
inline std::vector<std::size_t> least_reliable_positions(const LlrWord& L, int t) {
    std::vector<std::size_t> idx(L.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return std::fabs(L[a]) < std::fabs(L[b]);
    });
    idx.resize(std::size_t(t));
    return idx;
}

// Chase-style candidate list: every sign pattern of a saturated LLR value
// over the t least reliable coordinates. Candidate i sets coordinate
// positions[j] to +Lmax when bit j of i is 0 and to -Lmax when it is 1, so
// candidate 0 keeps all hypothesised bits at 0 and candidates are ordered
// by the integer value of their sign pattern.
inline std::vector<LlrWord> chase_candidates(const LlrWord& L, const ListConfig& cfg) {
    if (cfg.t < 0 || cfg.t > 20)
        throw std::invalid_argument("chase_candidates: t must lie in [0, 20]");
    if (std::size_t(cfg.t) > L.size())
        throw std::invalid_argument("chase_candidates: t exceeds word length");
    if (cfg.l_max_rule != 1 && cfg.l_max_rule != 2)
        throw std::invalid_argument("chase_candidates: l_max_rule must be 1 or 2");
    double lmax = 0.0;
    for (double v : L) lmax = std::max(lmax, std::fabs(v));
    lmax *= double(cfg.l_max_rule);
    std::vector<std::size_t> pos = least_reliable_positions(L, cfg.t);
    std::vector<LlrWord> out;
    out.reserve(std::size_t(1) << cfg.t);
    for (std::size_t bits = 0; bits < (std::size_t(1) << cfg.t); ++bits) {
        LlrWord cand = L;
        for (int j = 0; j < cfg.t; ++j)
            cand[pos[j]] = ((bits >> j) & 1) ? -lmax : lmax;
        out.push_back(std::move(cand));
    }
    return out;
}

// Random parity checks over the information bits; q rows drawn iid
// Bernoulli(1/2) from the seed. Rows are redrawn (continuing the same
// stream) until the trailing q x q block is invertible so that any choice
// of the first k - q information bits extends to a valid word.
struct OuterCode {
    std::size_t k = 0;
    int q = 0;
    std::vector<BitWord> h_rows;

    static OuterCode make(std::size_t k, int q, std::uint64_t seed) {
        if (q != 1 && q != 2) throw std::invalid_argument("OuterCode: q must be 1 or 2");
        if (k < std::size_t(q) + 1) throw std::invalid_argument("OuterCode: k too small for q parities");
        OuterCode oc;
        oc.k = k;
        oc.q = q;
        std::mt19937_64 gen(splitmix64(seed));
        std::bernoulli_distribution coin(0.5);
        for (;;) {
            oc.h_rows.assign(std::size_t(q), BitWord(k));
            for (int row = 0; row < q; ++row)
                for (std::size_t col = 0; col < k; ++col)
                    if (coin(gen)) oc.h_rows[std::size_t(row)].set(col, true);
            if (oc.tail_invertible()) break;
        }
        return oc;
    }

    bool check(const BitWord& info) const {
        if (info.size() != k) throw std::invalid_argument("OuterCode: info length mismatch");
        for (const BitWord& row : h_rows) {
            std::uint64_t acc = 0;
            for (std::size_t i = 0; i < row.limbs().size(); ++i)
                acc ^= row.limbs()[i] & info.limbs()[i];
            if (std::popcount(acc) & 1) return false;
        }
        return true;
    }

    // Extend k - q free information bits to a word satisfying every parity
    // by solving for the last q bits.
    BitWord complete(const BitWord& free_bits) const {
        if (free_bits.size() != k - std::size_t(q))
            throw std::invalid_argument("OuterCode: expected k - q free bits");
        BitWord info(k);
        for (std::size_t i = 0; i < free_bits.size(); ++i) info.set(i, free_bits.get(i));
        // rhs = H_free * free
        std::vector<unsigned> rhs(std::size_t(q), 0);
        for (int row = 0; row < q; ++row)
            for (std::size_t i = 0; i < free_bits.size(); ++i)
                rhs[std::size_t(row)] ^= unsigned(h_rows[std::size_t(row)].get(i) && free_bits.get(i));
        // solve tail block (q <= 2: direct)
        unsigned a = tail(0, 0);
        if (q == 1) {
            info.set(k - 1, rhs[0] & a); // a == 1 by invertibility
        } else {
            unsigned b = tail(0, 1), c = tail(1, 0), d = tail(1, 1);
            // inverse of [[a,b],[c,d]] over GF(2) is [[d,b],[c,a]] (det = 1)
            unsigned x0 = (d & rhs[0]) ^ (b & rhs[1]);
            unsigned x1 = (c & rhs[0]) ^ (a & rhs[1]);
            info.set(k - 2, x0);
            info.set(k - 1, x1);
        }
        return info;
    }

private:
    unsigned tail(int row, int col) const {
        return unsigned(h_rows[std::size_t(row)].get(k - std::size_t(q) + std::size_t(col)));
    }

    bool tail_invertible() const {
        if (q == 1) return tail(0, 0) == 1;
        unsigned det = (tail(0, 0) & tail(1, 1)) ^ (tail(0, 1) & tail(1, 0));
        return det == 1;
    }
};

struct ListDecodeResult {
    BitWord codeword;
    BitWord message;
    double score = 0;
    std::size_t candidate_index = 0;
    bool failure = false; // concatenated decode only: no candidate satisfied the parities
};

// Chase list around the iterative decoder: decode every candidate, project
// each output onto the code via majority-logic decoding, keep the candidate
// whose codeword correlates best with the unmodified input LLRs. Ties keep
// the earliest candidate.
inline ListDecodeResult rpa_list_decode_full(const LlrWord& L, const RmCode& code,
                                             const RpaDecoder& decoder, const ListConfig& lcfg,
                                             const OuterCode* outer = nullptr) {
    if (L.size() != code.n) throw std::invalid_argument("rpa_list_decode: length mismatch");
    if (decoder.m() != code.m || decoder.r() != code.r)
        throw std::invalid_argument("rpa_list_decode: decoder built for a different code");
    std::vector<LlrWord> cands = chase_candidates(L, lcfg);
    ListDecodeResult best;
    bool have = false;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        BitWord approx = decoder.decode(cands[i]).word;
        auto [msg, cw] = reed_decode(code, approx);
        if (outer && !outer->check(msg)) continue;
        double score = ml_score(cw, L);
        if (!have || score > best.score) {
            have = true;
            best.codeword = std::move(cw);
            best.message = std::move(msg);
            best.score = score;
            best.candidate_index = i;
        }
    }
    if (!have) {
        // every candidate failed the outer parities; surface the failure
        // with the all-zero word as the placeholder decision
        best.codeword = BitWord(code.n);
        best.message = BitWord(code.k);
        best.score = ml_score(best.codeword, L);
        best.failure = true;
    }
    return best;
}

inline ListDecodeResult rpa_list_decode_full(const LlrWord& L, const RmCode& code,
                                             const DecoderConfig& dcfg, const ListConfig& lcfg,
                                             const OuterCode* outer = nullptr) {
    return rpa_list_decode_full(L, code, RpaDecoder(code.m, code.r, dcfg), lcfg, outer);
}

inline BitWord rpa_list_decode(const LlrWord& L, const RmCode& code, const DecoderConfig& dcfg,
                               const ListConfig& lcfg) {
    return rpa_list_decode_full(L, code, dcfg, lcfg).codeword;
}

inline ListDecodeResult rpa_list_concat_decode(const LlrWord& L, const RmCode& code,
                                               const DecoderConfig& dcfg, const ListConfig& lcfg,
                                               const OuterCode& outer) {
    if (outer.k != code.k) throw std::invalid_argument("rpa_list_concat_decode: outer code dimension mismatch");
    return rpa_list_decode_full(L, code, dcfg, lcfg, &outer);
}

} // namespace rmrpa
