#pragma once

#include <cstdint>
#include <random>

#include "mckba/keystream.hpp"

namespace mckba {

// Portable draws from a 64-bit Mersenne Twister. std distributions are
// implementation-defined, which would break cross-platform replay.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);
double uniform_open_unit(std::mt19937_64& rng);

// key1 uniform, key2 = key1 ^ d with popcount(d) = ceil(n/2), x0 uniform in (0,1).
SecretKey keygen(unsigned n, std::uint64_t seed);

}  // namespace mckba
