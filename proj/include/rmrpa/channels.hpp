#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "rmrpa/bitword.hpp"
#include "rmrpa/fht.hpp"

namespace rmrpa {

// LLR convention: L(z) = ln(W(y|0) / W(y|1)), positive values favor bit 0.
// All produced LLRs are clamped to |L| <= llr_clamp so downstream sums stay
// finite.
inline constexpr double llr_clamp = 1e9;

// splitmix64; used to key one generator per (seed, stream) pair so trials
// are reproducible independently of scheduling.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    return splitmix64(splitmix64(a) ^ 0x9e3779b97f4a7c15ull ^ b);
}

// Seed for one Monte Carlo trial: master seed, position in the parameter
// grid, trial index. Collision-free enough for desk-scale experiments and
// fully deterministic.
inline std::uint64_t trial_seed(std::uint64_t master, std::uint64_t grid_index, std::uint64_t trial) {
    return mix_seed(mix_seed(master, grid_index), trial);
}

struct ChannelModel {
    enum class Kind { bsc, awgn };

    Kind kind = Kind::bsc;
    double p = 0;     // BSC crossover
    double sigma = 0; // AWGN noise standard deviation

    static ChannelModel bsc(double p) {
        if (!(p > 0.0 && p < 0.5))
            throw std::invalid_argument("ChannelModel: BSC crossover must lie in (0, 0.5)");
        ChannelModel ch;
        ch.kind = Kind::bsc;
        ch.p = p;
        return ch;
    }

    static ChannelModel awgn(double sigma) {
        if (!(sigma > 0.0))
            throw std::invalid_argument("ChannelModel: AWGN sigma must be positive");
        ChannelModel ch;
        ch.kind = Kind::awgn;
        ch.sigma = sigma;
        return ch;
    }

    // Eb/N0 in dB for a code of the given rate, BPSK mapping 0 -> +1,
    // 1 -> -1 with unit symbol energy: sigma^2 = 1 / (2 * rate * 10^(EbN0/10)).
    static ChannelModel awgn_ebn0_db(double ebn0_db, double rate) {
        if (!(rate > 0.0))
            throw std::invalid_argument("ChannelModel: rate must be positive");
        double snr = std::pow(10.0, ebn0_db / 10.0);
        return awgn(std::sqrt(1.0 / (2.0 * rate * snr)));
    }

    double bsc_llr_magnitude() const { return std::log((1.0 - p) / p); }
};

struct Received {
    ChannelModel::Kind kind = ChannelModel::Kind::bsc;
    BitWord bits;                // BSC output
    std::vector<double> samples; // AWGN output
};

inline Received transmit(const ChannelModel& ch, const BitWord& cw, std::uint64_t seed) {
    Received rx;
    rx.kind = ch.kind;
    std::mt19937_64 gen(splitmix64(seed));
    if (ch.kind == ChannelModel::Kind::bsc) {
        std::bernoulli_distribution flip(ch.p);
        rx.bits = cw;
        for (std::size_t i = 0; i < cw.size(); ++i)
            if (flip(gen)) rx.bits.flip(i);
    } else {
        std::normal_distribution<double> noise(0.0, ch.sigma);
        rx.samples.resize(cw.size());
        for (std::size_t i = 0; i < cw.size(); ++i)
            rx.samples[i] = (cw.get(i) ? -1.0 : 1.0) + noise(gen);
    }
    return rx;
}

inline double clamp_llr(double v) {
    if (v > llr_clamp) return llr_clamp;
    if (v < -llr_clamp) return -llr_clamp;
    return v;
}

inline LlrWord llr(const ChannelModel& ch, const Received& rx) {
    if (rx.kind != ch.kind)
        throw std::invalid_argument("llr: received word does not match channel kind");
    LlrWord out;
    if (ch.kind == ChannelModel::Kind::bsc) {
        double a = clamp_llr(ch.bsc_llr_magnitude());
        out.resize(rx.bits.size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = rx.bits.get(i) ? -a : a;
    } else {
        out.resize(rx.samples.size());
        double scale = 2.0 / (ch.sigma * ch.sigma);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = clamp_llr(scale * rx.samples[i]);
    }
    return out;
}

// Hard decision per coordinate: bit is 1 exactly when the LLR is negative,
// so L = 0 resolves to 0.
inline BitWord hard_decide(const LlrWord& L) {
    BitWord w(L.size());
    for (std::size_t i = 0; i < L.size(); ++i)
        if (L[i] < 0.0) w.set(i, true);
    return w;
}

} // namespace rmrpa
