#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "mckba/bits.hpp"

namespace mckba {

// Operation selector B(k) in {0, 1, 2, 3}. Values 2 and 3 use key1, odd
// values use plain XOR, even values use XNOR.
using Selector = std::uint8_t;
using SelectorSequence = std::vector<Selector>;

constexpr bool uses_key1(Selector b) noexcept { return b >= 2; }
constexpr bool is_xor_mode(Selector b) noexcept { return (b & 1u) != 0; }

struct SecretKey {
    unsigned n = 32;
    Word key1 = 0;
    Word key2 = 0;
    double x0 = 0.5;

    // Range checks plus key1 != key2. The Hamming-distance constraint is a
    // keygen property and is deliberately not enforced here.
    void validate() const;
    bool satisfies_distance_constraint() const noexcept;
};

inline constexpr double kLogisticControl = 3.9;
inline constexpr unsigned kBitsPerIterate = 32;

double logistic_iterate(double x);

// The 32 leading fractional bits of x in [0, 1), most significant first.
std::array<std::uint8_t, kBitsPerIterate> iterate_bits(double x);

// PRBS from the logistic map: iterate x(1) = f(x0), x(2), ... and emit the
// 32 leading fractional bits of each, most significant first.
std::vector<std::uint8_t> derive_bits(double x0, std::size_t bit_count);

SelectorSequence selector_sequence(std::span<const std::uint8_t> bits, std::size_t block_count);

// Source of the selector bits. HCKBA differs from MCKBA only here.
class BitGenerator {
public:
    virtual ~BitGenerator() = default;
    // First `count` bits of the sequence; repeated calls restart from the key.
    virtual std::vector<std::uint8_t> bits(std::size_t count) const = 0;

    SelectorSequence selectors(std::size_t block_count) const {
        return selector_sequence(bits(2 * block_count), block_count);
    }
};

class LogisticBitGenerator final : public BitGenerator {
public:
    explicit LogisticBitGenerator(double x0);
    std::vector<std::uint8_t> bits(std::size_t count) const override;

private:
    double x0_;
};

// Accepts a decimal fraction ("0.0744") or a rational "p/q" where q is an
// integer or a power written as "2^k" ("319684607/2^32").
double parse_x0(std::string_view text);

}  // namespace mckba
