#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fmvqa {

using Bits = std::vector<std::uint8_t>;

// Site/bit conventions used everywhere in this library:
//   - sites are 0-based internally; site 0 is the leftmost character of a
//     bitstring and the most significant bit of a basis-state index
//   - bit value 1 = H (substitutable hydrogen kept), 0 = D (deuterated)
//   - spin s = 2b - 1, so bit 1 <-> s = +1

inline Bits index_to_bits(std::uint64_t index, int n) {
    Bits b(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        b[static_cast<std::size_t>(i)] =
            static_cast<std::uint8_t>((index >> (n - 1 - i)) & 1ULL);
    return b;
}

inline std::uint64_t bits_to_index(const Bits& b) {
    std::uint64_t idx = 0;
    for (std::uint8_t v : b) idx = (idx << 1) | (v & 1U);
    return idx;
}

inline std::string bits_to_string(const Bits& b) {
    std::string s;
    s.reserve(b.size());
    for (std::uint8_t v : b) s.push_back(v ? '1' : '0');
    return s;
}

inline Bits string_to_bits(const std::string& s) {
    Bits b;
    b.reserve(s.size());
    for (char c : s) {
        if (c != '0' && c != '1')
            throw std::invalid_argument("bitstring must contain only 0/1, got: " + s);
        b.push_back(static_cast<std::uint8_t>(c == '1'));
    }
    if (b.empty()) throw std::invalid_argument("empty bitstring");
    return b;
}

// Table rendering: 1 -> H, 0 -> D.
inline std::string render_hd(const Bits& b) {
    std::string s;
    s.reserve(b.size());
    for (std::uint8_t v : b) s.push_back(v ? 'H' : 'D');
    return s;
}

inline int count_zeros(const Bits& b) {
    int c = 0;
    for (std::uint8_t v : b) c += (v == 0);
    return c;
}

inline int spin_of(std::uint8_t bit) { return bit ? 1 : -1; }

}  // namespace fmvqa
