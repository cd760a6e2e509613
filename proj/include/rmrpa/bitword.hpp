#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace rmrpa {

// Fixed-length GF(2) vector packed into 64-bit limbs.
// Bit i lives in limb i/64 at position i%64, so the integer index of a
// coordinate and its storage position agree (coordinate 0 is the LSB of
// limb 0).
class BitWord {
public:
    BitWord() = default;

    explicit BitWord(std::size_t nbits)
        : nbits_(nbits), limbs_((nbits + 63) / 64, 0) {}

    std::size_t size() const { return nbits_; }

    bool get(std::size_t i) const {
        return (limbs_[i >> 6] >> (i & 63)) & 1u;
    }

    void set(std::size_t i, bool v) {
        std::uint64_t mask = std::uint64_t(1) << (i & 63);
        if (v)
            limbs_[i >> 6] |= mask;
        else
            limbs_[i >> 6] &= ~mask;
    }

    void flip(std::size_t i) { limbs_[i >> 6] ^= std::uint64_t(1) << (i & 63); }

    void clear() {
        for (auto& l : limbs_) l = 0;
    }

    // XOR-accumulate another word of the same length.
    BitWord& operator^=(const BitWord& o) {
        if (o.nbits_ != nbits_)
            throw std::invalid_argument("BitWord: xor of mismatched lengths");
        for (std::size_t i = 0; i < limbs_.size(); ++i) limbs_[i] ^= o.limbs_[i];
        return *this;
    }

    friend BitWord operator^(BitWord a, const BitWord& b) {
        a ^= b;
        return a;
    }

    std::size_t weight() const {
        std::size_t w = 0;
        for (auto l : limbs_) w += std::size_t(std::popcount(l));
        return w;
    }

    bool any() const {
        for (auto l : limbs_)
            if (l) return true;
        return false;
    }

    // Index of the lowest set bit; size() when the word is zero.
    std::size_t find_first() const {
        for (std::size_t i = 0; i < limbs_.size(); ++i)
            if (limbs_[i]) return (i << 6) + std::size_t(std::countr_zero(limbs_[i]));
        return nbits_;
    }

    bool operator==(const BitWord&) const = default;

    const std::vector<std::uint64_t>& limbs() const { return limbs_; }

private:
    std::size_t nbits_ = 0;
    std::vector<std::uint64_t> limbs_;
};

// Incremental row-echelon basis over GF(2); pivot is the lowest set bit of
// each stored row. Supports rank queries and membership tests for the row
// space.
class Gf2Basis {
public:
    // Returns true if w was independent of the rows seen so far.
    bool insert(BitWord w) {
        reduce(w);
        if (!w.any()) return false;
        rows_.push_back(std::move(w));
        pivots_.push_back(rows_.back().find_first());
        return true;
    }

    bool contains(BitWord w) const {
        reduce(w);
        return !w.any();
    }

    std::size_t rank() const { return rows_.size(); }

private:
    void reduce(BitWord& w) const {
        for (std::size_t i = 0; i < rows_.size(); ++i)
            if (w.get(pivots_[i])) w ^= rows_[i];
    }

    std::vector<BitWord> rows_;
    std::vector<std::size_t> pivots_;
};

} // namespace rmrpa
