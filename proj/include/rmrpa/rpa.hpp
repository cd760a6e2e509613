#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "rmrpa/bitword.hpp"
#include "rmrpa/channels.hpp"
#include "rmrpa/fht.hpp"
#include "rmrpa/rm_code.hpp"

namespace rmrpa {

// LLRs with |Lhat - L| <= theta*|L| everywhere count as converged; where
// L is exactly zero the new value must be this close to zero instead.
inline constexpr double zero_llr_tol = 1e-12;

struct DecoderConfig {
    // Maximum projection-aggregation iterations per recursion level.
    // 0 resolves to ceil(m/2) at the outermost call; recursive calls reuse
    // the resolved value unchanged.
    int n_max = 0;
    double theta = 0.05;
    // Crossover probability backing a hard-input decode; sets the magnitude
    // of the surrogate LLRs fed to the first-order base case. Unset uses
    // magnitude 1.0, which decodes identically (scaling cancels in argmax).
    std::optional<double> bsc_p;
    // Restrict aggregation at the outermost level to these subspace indices
    // (positions in enumerate_1d_subspaces order). Empty optional: all.
    std::optional<std::vector<std::uint32_t>> voting_set;
    // When nonzero, sample this many subspaces uniformly (seeded, without
    // replacement) independently at every recursion level instead.
    std::size_t voting_set_size = 0;
    std::uint64_t voting_seed = 0;
    // Worker threads for the outermost projection-decoding loop. Results are
    // identical for any thread count.
    int threads = 1;
};

// LLR of the XOR of two bits with LLRs a and b:
//   ln(e^{a+b} + 1) - ln(e^a + e^b)  =  2 atanh(tanh(a/2) tanh(b/2)).
// Computed as sign(a) sign(b) (min + log correction) from the magnitudes
// alone, which keeps every input finite-safe and makes negating an input
// negate the output bit-exactly. |result| <= min(|a|, |b|).
inline double llr_coset_sum(double a, double b) {
    double sign = ((a < 0.0) != (b < 0.0)) ? -1.0 : 1.0;
    double aa = std::fabs(a);
    double ab = std::fabs(b);
    double lo = aa < ab ? aa : ab;
    double hi = aa < ab ? ab : aa;
    double mag = lo + std::log1p(std::exp(-(hi + lo))) - std::log1p(std::exp(-(hi - lo)));
    if (mag < 0.0) mag = 0.0; // rounding can undershoot at tiny magnitudes
    return sign * mag;
}

// Soft coset-sum projection onto a one-dimensional subspace: output T holds
// the LLR of y(z) ^ y(z ^ z0) for the coset T = {z, z ^ z0}.
inline LlrWord project_llr(const LlrWord& L, const Subspace& sub) {
    if (sub.s != 1)
        throw std::invalid_argument("project_llr: subspace must be one-dimensional");
    if (L.size() != (std::size_t(1) << sub.m))
        throw std::invalid_argument("project_llr: word length must be 2^m");
    std::uint32_t z0 = sub.basis[0];
    LlrWord out(L.size() >> 1);
    for (std::size_t t = 0; t < out.size(); ++t) {
        std::uint32_t z = sub.reps[t];
        out[t] = llr_coset_sum(L[z], L[z ^ z0]);
    }
    return out;
}

// Majority vote across subspaces: coordinate z flips when a strict majority
// of the voting subspaces decoded their coset bit [z + B] away from the
// projected input. votes, proj_in and dec are aligned; ties leave z alone.
inline BitWord aggregate_bsc(const BitWord& y, const std::vector<Subspace>& subs,
                             const std::vector<std::uint32_t>& votes,
                             const std::vector<BitWord>& proj_in,
                             const std::vector<BitWord>& dec) {
    BitWord out = y;
    std::size_t v = votes.size();
    for (std::size_t z = 0; z < y.size(); ++z) {
        std::size_t changevote = 0;
        for (std::size_t j = 0; j < v; ++j) {
            const Subspace& sub = subs[votes[j]];
            std::uint32_t t = sub.coset_of[z];
            changevote += proj_in[j].get(t) != dec[j].get(t);
        }
        if (2 * changevote > v) out.flip(z);
    }
    return out;
}

// Soft aggregation: average, over the voting subspaces, of the companion
// LLR L(z ^ z0) signed by the decoded coset bit. Summation runs in voting
// order so the result does not depend on how the decodes were scheduled.
inline LlrWord aggregate_llr(const LlrWord& L, const std::vector<Subspace>& subs,
                             const std::vector<std::uint32_t>& votes,
                             const std::vector<BitWord>& dec) {
    std::size_t v = votes.size();
    LlrWord out(L.size());
    for (std::size_t z = 0; z < L.size(); ++z) {
        double acc = 0.0;
        for (std::size_t j = 0; j < v; ++j) {
            const Subspace& sub = subs[votes[j]];
            double companion = L[z ^ sub.basis[0]];
            acc += dec[j].get(sub.coset_of[z]) ? -companion : companion;
        }
        out[z] = acc / double(v);
    }
    return out;
}

// Recursive projection-aggregation decoder for RM(m, r).
//
// Each iteration projects the current word onto one-dimensional subspaces,
// decodes every projection as RM(m-1, r-1) (recursing until the first-order
// base case, which is decoded exactly via the Hadamard transform), and
// aggregates the decoded cosets back into an updated word. Iterations stop
// at n_max or as soon as the update is within theta of its input (soft) or
// leaves the word unchanged (hard).
//
// The same subspace tables are reused across calls, so build one decoder
// per code and decode many words with it.
class RpaDecoder {
public:
    struct Result {
        BitWord word;
        LlrWord final_llr; // soft decode only: the LLR state that was sliced
        int iterations = 0;
        bool converged = false;
    };

    RpaDecoder(int m, int r, DecoderConfig cfg = {}) : m_(m), r_(r), cfg_(cfg) {
        if (m < 1 || m > 20) throw std::invalid_argument("RpaDecoder: need 1 <= m <= 20");
        if (r < 1) throw std::invalid_argument("RpaDecoder: need r >= 1; r = 0 is plain repetition");
        if (r > m) throw std::invalid_argument("RpaDecoder: need r <= m");
        if (!(cfg_.theta >= 0.0)) throw std::invalid_argument("RpaDecoder: theta must be >= 0");
        if (cfg_.n_max < 0) throw std::invalid_argument("RpaDecoder: n_max must be >= 0");
        if (cfg_.threads < 1) throw std::invalid_argument("RpaDecoder: threads must be >= 1");
        n_max_ = cfg_.n_max > 0 ? cfg_.n_max : (m + 1) / 2;
        base_mag_ = 1.0;
        if (cfg_.bsc_p) {
            if (!(*cfg_.bsc_p > 0.0 && *cfg_.bsc_p < 0.5))
                throw std::invalid_argument("RpaDecoder: bsc_p must lie in (0, 0.5)");
            base_mag_ = std::log((1.0 - *cfg_.bsc_p) / *cfg_.bsc_p);
        }
        for (int lvl = 0; lvl + 1 < r_; ++lvl) {
            int ml = m_ - lvl;
            levels_.push_back(enumerate_1d_subspaces(ml));
            votes_.push_back(make_votes(lvl, ml, levels_.back().size()));
        }
    }

    int m() const { return m_; }
    int r() const { return r_; }
    int n_max() const { return n_max_; }
    const DecoderConfig& config() const { return cfg_; }

    Result decode(const LlrWord& L) const {
        check_len(L.size());
        Result res;
        if (r_ == 1) {
            res.final_llr = L;
            res.word = ml_decode_order1(L);
            res.converged = true;
            return res;
        }
        res.final_llr = iterate_soft(0, L, &res.iterations, &res.converged);
        res.word = hard_decide(res.final_llr);
        return res;
    }

    Result decode_bsc(const BitWord& y) const {
        check_len(y.size());
        Result res;
        if (r_ == 1) {
            res.word = ml_decode_order1(surrogate_llr(y));
            res.converged = true;
            return res;
        }
        res.word = iterate_hard(0, y, &res.iterations, &res.converged);
        return res;
    }

private:
    void check_len(std::size_t len) const {
        if (len != (std::size_t(1) << m_))
            throw std::invalid_argument("RpaDecoder: word length must be 2^m");
    }

    std::vector<std::uint32_t> make_votes(int lvl, int ml, std::size_t count) const {
        if (lvl == 0 && cfg_.voting_set) {
            std::vector<std::uint32_t> v = *cfg_.voting_set;
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
            if (v.empty()) throw std::invalid_argument("RpaDecoder: voting set is empty");
            if (v.back() >= count) throw std::invalid_argument("RpaDecoder: voting set index out of range");
            return v;
        }
        if (cfg_.voting_set_size > 0 && cfg_.voting_set_size < count) {
            // partial Fisher-Yates over the index range, keyed by level so
            // every recursion depth draws its own subspaces
            std::vector<std::uint32_t> all(count);
            for (std::size_t i = 0; i < count; ++i) all[i] = std::uint32_t(i);
            std::mt19937_64 gen(mix_seed(cfg_.voting_seed, std::uint64_t(ml)));
            for (std::size_t i = 0; i < cfg_.voting_set_size; ++i) {
                std::uniform_int_distribution<std::size_t> pick(i, count - 1);
                std::swap(all[i], all[pick(gen)]);
            }
            all.resize(cfg_.voting_set_size);
            std::sort(all.begin(), all.end());
            return all;
        }
        std::vector<std::uint32_t> all(count);
        for (std::size_t i = 0; i < count; ++i) all[i] = std::uint32_t(i);
        return all;
    }

    LlrWord surrogate_llr(const BitWord& y) const {
        LlrWord L(y.size());
        for (std::size_t i = 0; i < L.size(); ++i) L[i] = y.get(i) ? -base_mag_ : base_mag_;
        return L;
    }

    // map f over [0, count) on the configured thread count; lvl 0 only
    template <typename F>
    void for_votes(std::size_t lvl, std::size_t count, F f) const {
        int threads = lvl == 0 ? cfg_.threads : 1;
        if (threads <= 1 || count < 2) {
            for (std::size_t j = 0; j < count; ++j) f(j);
            return;
        }
        std::size_t nt = std::min<std::size_t>(std::size_t(threads), count);
        std::vector<std::thread> pool;
        pool.reserve(nt);
        for (std::size_t t = 0; t < nt; ++t)
            pool.emplace_back([&, t] {
                for (std::size_t j = t; j < count; j += nt) f(j);
            });
        for (auto& th : pool) th.join();
    }

    BitWord decode_soft_rec(std::size_t lvl, const LlrWord& L) const {
        if (int(lvl) == r_ - 1) return ml_decode_order1(L);
        int iters = 0;
        bool conv = false;
        return hard_decide(iterate_soft(lvl, L, &iters, &conv));
    }

    LlrWord iterate_soft(std::size_t lvl, LlrWord L, int* iters, bool* conv) const {
        const std::vector<Subspace>& subs = levels_[lvl];
        const std::vector<std::uint32_t>& votes = votes_[lvl];
        std::vector<BitWord> dec(votes.size());
        *conv = false;
        for (int it = 1; it <= n_max_; ++it) {
            *iters = it;
            for_votes(lvl, votes.size(), [&](std::size_t j) {
                dec[j] = decode_soft_rec(lvl + 1, project_llr(L, subs[votes[j]]));
            });
            LlrWord next = aggregate_llr(L, subs, votes, dec);
            bool stable = true;
            for (std::size_t z = 0; z < L.size(); ++z) {
                if (L[z] == 0.0) {
                    if (std::fabs(next[z]) > zero_llr_tol) stable = false;
                } else if (std::fabs(next[z] - L[z]) > cfg_.theta * std::fabs(L[z])) {
                    stable = false;
                }
                if (!stable) break;
            }
            L = std::move(next);
            if (stable) {
                *conv = true;
                break;
            }
        }
        return L;
    }

    BitWord decode_hard_rec(std::size_t lvl, const BitWord& y) const {
        if (int(lvl) == r_ - 1) return ml_decode_order1(surrogate_llr(y));
        int iters = 0;
        bool conv = false;
        return iterate_hard(lvl, y, &iters, &conv);
    }

    BitWord iterate_hard(std::size_t lvl, BitWord y, int* iters, bool* conv) const {
        const std::vector<Subspace>& subs = levels_[lvl];
        const std::vector<std::uint32_t>& votes = votes_[lvl];
        std::vector<BitWord> proj(votes.size());
        std::vector<BitWord> dec(votes.size());
        *conv = false;
        for (int it = 1; it <= n_max_; ++it) {
            *iters = it;
            for_votes(lvl, votes.size(), [&](std::size_t j) {
                proj[j] = project(y, subs[votes[j]]);
                dec[j] = decode_hard_rec(lvl + 1, proj[j]);
            });
            BitWord next = aggregate_bsc(y, subs, votes, proj, dec);
            if (next == y) {
                *conv = true;
                break;
            }
            y = std::move(next);
        }
        return y;
    }

    int m_;
    int r_;
    DecoderConfig cfg_;
    int n_max_ = 0;
    double base_mag_ = 1.0;
    std::vector<std::vector<Subspace>> levels_;
    std::vector<std::vector<std::uint32_t>> votes_;
};

// One-shot helpers; prefer holding an RpaDecoder when decoding many words.
inline BitWord rpa_decode(const LlrWord& L, int m, int r, const DecoderConfig& cfg = {}) {
    return RpaDecoder(m, r, cfg).decode(L).word;
}

inline BitWord rpa_decode_bsc(const BitWord& y, int m, int r, const DecoderConfig& cfg = {}) {
    return RpaDecoder(m, r, cfg).decode_bsc(y).word;
}

} // namespace rmrpa
