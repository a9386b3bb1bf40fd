#include "mckba/keystream.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <string>

namespace mckba {

void SecretKey::validate() const {
    require_word_size(n);
    require_word(key1, n, "key1");
    require_word(key2, n, "key2");
    if (key1 == key2) throw InvalidInput("key1 and key2 must differ");
    if (!(x0 > 0.0 && x0 < 1.0)) throw InvalidInput("x0 must lie in the open interval (0, 1)");
}

bool SecretKey::satisfies_distance_constraint() const noexcept {
    return static_cast<unsigned>(std::popcount(key1 ^ key2)) == (n + 1) / 2;
}

double logistic_iterate(double x) {
    if (!(x > 0.0 && x < 1.0)) throw DomainError("logistic map state must lie in (0, 1)");
    return kLogisticControl * x * (1.0 - x);
}

std::array<std::uint8_t, kBitsPerIterate> iterate_bits(double x) {
    if (!(x >= 0.0 && x < 1.0)) throw DomainError("iterate must lie in [0, 1)");
    const auto fraction = static_cast<std::uint32_t>(std::ldexp(x, 32));
    std::array<std::uint8_t, kBitsPerIterate> out{};
    for (unsigned j = 1; j <= kBitsPerIterate; ++j)
        out[j - 1] = static_cast<std::uint8_t>((fraction >> (32 - j)) & 1u);
    return out;
}

std::vector<std::uint8_t> derive_bits(double x0, std::size_t bit_count) {
    std::vector<std::uint8_t> bits;
    bits.reserve(bit_count);
    double x = x0;
    if (bit_count > 0 && !(x0 > 0.0 && x0 < 1.0)) throw DomainError("x0 must lie in (0, 1)");
    while (bits.size() < bit_count) {
        x = logistic_iterate(x);
        for (std::uint8_t b : iterate_bits(x)) {
            if (bits.size() == bit_count) break;
            bits.push_back(b);
        }
    }
    return bits;
}

SelectorSequence selector_sequence(std::span<const std::uint8_t> bits, std::size_t block_count) {
    if (bits.size() < 2 * block_count)
        throw InvalidInput("need " + std::to_string(2 * block_count) + " bits for " + std::to_string(block_count) +
                           " selectors, got " + std::to_string(bits.size()));
    SelectorSequence out(block_count);
    for (std::size_t k = 0; k < block_count; ++k)
        out[k] = static_cast<Selector>(2 * (bits[2 * k] & 1u) + (bits[2 * k + 1] & 1u));
    return out;
}

LogisticBitGenerator::LogisticBitGenerator(double x0) : x0_(x0) {
    if (!(x0 > 0.0 && x0 < 1.0)) throw DomainError("x0 must lie in (0, 1)");
}

std::vector<std::uint8_t> LogisticBitGenerator::bits(std::size_t count) const { return derive_bits(x0_, count); }

namespace {

std::uint64_t parse_unsigned(std::string_view s, std::string_view whole) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        throw InvalidInput("malformed x0: " + std::string(whole));
    return v;
}

}  // namespace

double parse_x0(std::string_view text) {
    double value = 0.0;
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        const std::uint64_t num = parse_unsigned(text.substr(0, slash), text);
        const std::string_view den = text.substr(slash + 1);
        if (den.starts_with("2^")) {
            const std::uint64_t exp = parse_unsigned(den.substr(2), text);
            if (exp > 1023) throw InvalidInput("x0 denominator exponent too large");
            value = std::ldexp(static_cast<double>(num), -static_cast<int>(exp));
        } else {
            const std::uint64_t d = parse_unsigned(den, text);
            if (d == 0) throw InvalidInput("x0 denominator is zero");
            value = static_cast<double>(num) / static_cast<double>(d);
        }
    } else {
        const std::string s(text);
        char* end = nullptr;
        value = std::strtod(s.c_str(), &end);
        if (s.empty() || end != s.c_str() + s.size()) throw InvalidInput("malformed x0: " + s);
    }
    if (!(value > 0.0 && value < 1.0)) throw InvalidInput("x0 must lie in (0, 1): " + std::string(text));
    return value;
}

}  // namespace mckba
