#pragma once

#include <cctype>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rmrpa/bitword.hpp"
#include "rmrpa/fht.hpp"

namespace rmrpa {

// Hard words travel as hex text: bits are packed into bytes with bit i of
// the word landing in byte i/8 at position i%8 (LSB first, matching the
// coordinate convention), bytes printed in order as two lowercase digits.
inline std::string to_hex(const BitWord& w) {
    static const char digits[] = "0123456789abcdef";
    std::size_t nbytes = (w.size() + 7) / 8;
    std::string out;
    out.reserve(nbytes * 2);
    for (std::size_t b = 0; b < nbytes; ++b) {
        unsigned v = 0;
        for (std::size_t i = 0; i < 8; ++i) {
            std::size_t bit = b * 8 + i;
            if (bit < w.size() && w.get(bit)) v |= 1u << i;
        }
        out.push_back(digits[v >> 4]);
        out.push_back(digits[v & 15]);
    }
    return out;
}

inline BitWord from_hex(const std::string& hex, std::size_t nbits) {
    std::size_t nbytes = (nbits + 7) / 8;
    if (hex.size() != nbytes * 2)
        throw std::invalid_argument("from_hex: expected " + std::to_string(nbytes * 2) +
                                    " hex digits for " + std::to_string(nbits) + " bits");
    auto nibble = [](char c) -> unsigned {
        if (c >= '0' && c <= '9') return unsigned(c - '0');
        if (c >= 'a' && c <= 'f') return unsigned(c - 'a' + 10);
        if (c >= 'A' && c <= 'F') return unsigned(c - 'A' + 10);
        throw std::invalid_argument("from_hex: invalid hex digit");
    };
    BitWord w(nbits);
    for (std::size_t b = 0; b < nbytes; ++b) {
        unsigned v = (nibble(hex[2 * b]) << 4) | nibble(hex[2 * b + 1]);
        for (std::size_t i = 0; i < 8; ++i) {
            std::size_t bit = b * 8 + i;
            if (bit < nbits && ((v >> i) & 1)) w.set(bit, true);
        }
    }
    return w;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << text;
}

inline std::string strip_ws(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace((unsigned char)s[a])) ++a;
    while (b > a && std::isspace((unsigned char)s[b - 1])) --b;
    return s.substr(a, b - a);
}

inline BitWord read_hex_word(const std::string& path, std::size_t nbits) {
    return from_hex(strip_ws(read_text_file(path)), nbits);
}

// Soft words travel as plain text, one decimal LLR per line.
inline LlrWord read_llr_word(const std::string& path, std::size_t n) {
    std::istringstream in(read_text_file(path));
    LlrWord out;
    double v;
    while (in >> v) out.push_back(v);
    if (!in.eof()) throw std::runtime_error(path + ": malformed LLR value");
    if (out.size() != n)
        throw std::runtime_error(path + ": expected " + std::to_string(n) + " LLR values, found " +
                                 std::to_string(out.size()));
    return out;
}

} // namespace rmrpa
