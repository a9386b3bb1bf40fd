#pragma once

#include <bit>
#include <cstdint>
#include <string>

#include "mckba/errors.hpp"

namespace mckba {

using Word = std::uint64_t;

inline constexpr unsigned kMinWordBits = 2;
inline constexpr unsigned kMaxWordBits = 64;

// Low n bits set; n in [0, 64].
constexpr Word low_mask(unsigned n) noexcept {
    return n >= 64 ? ~Word{0} : ((Word{1} << n) - 1);
}

// Bits 0..n-2: the part of a key the differential equations can pin down.
constexpr Word solvable_mask(unsigned n) noexcept { return low_mask(n - 1); }

constexpr unsigned bit_of(Word w, unsigned i) noexcept {
    return static_cast<unsigned>((w >> i) & 1u);
}

constexpr unsigned majority(unsigned a, unsigned b, unsigned c) noexcept {
    return (a & b) ^ (a & c) ^ (b & c);
}

inline void require_word_size(unsigned n) {
    if (n < kMinWordBits || n > kMaxWordBits)
        throw InvalidInput("word size n must lie in [2, 64], got " + std::to_string(n));
}

inline void require_word(Word w, unsigned n, const char* what) {
    if ((w & ~low_mask(n)) != 0)
        throw InvalidInput(std::string(what) + " does not fit in " + std::to_string(n) + " bits");
}

std::string to_hex(Word w, unsigned n);

}  // namespace mckba
