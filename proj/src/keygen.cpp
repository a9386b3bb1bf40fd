#include "mckba/keygen.hpp"

#include <numeric>
#include <vector>

namespace mckba {

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    if (bound <= 1) return 0;
    // rejection sampling on the largest multiple of bound
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    for (;;) {
        const std::uint64_t r = rng();
        if (r < limit) return r % bound;
    }
}

double uniform_open_unit(std::mt19937_64& rng) {
    // midpoints of the 2^53 dyadic cells: never 0, never 1
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

SecretKey keygen(unsigned n, std::uint64_t seed) {
    require_word_size(n);
    std::mt19937_64 rng(seed);

    SecretKey key;
    key.n = n;
    key.key1 = rng() & low_mask(n);

    std::vector<unsigned> positions(n);
    std::iota(positions.begin(), positions.end(), 0u);
    const unsigned weight = (n + 1) / 2;
    Word diff = 0;
    for (unsigned i = 0; i < weight; ++i) {
        const auto j = i + static_cast<unsigned>(uniform_below(rng, n - i));
        std::swap(positions[i], positions[j]);
        diff |= Word{1} << positions[i];
    }
    key.key2 = key.key1 ^ diff;
    key.x0 = uniform_open_unit(rng);
    return key;
}

}  // namespace mckba
