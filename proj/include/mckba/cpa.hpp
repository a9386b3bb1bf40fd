#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mckba/block_codec.hpp"
#include "mckba/kpa.hpp"

namespace mckba {

enum class QueryTag : std::uint8_t { PairA, PairB };

struct QueryPair {
    Word alpha = 0;
    Word beta = 0;
    QueryTag tag = QueryTag::PairA;
};

// n-bit truncations of ...1010 and ...0101.
Word alternating_high(unsigned n) noexcept;
Word alternating_low(unsigned n) noexcept;

// PAIR_A = (0, ...1010), PAIR_B = (...1010, ...0101). Together they pin down
// bits 0..n-2 of any x.
std::pair<QueryPair, QueryPair> determining_queries(unsigned n);

struct ChosenImages {
    Image p1;
    Image p2;
    std::vector<QueryTag> tags;  // one per block
};

ChosenImages build_chosen_images(std::size_t width, std::size_t height, unsigned n, std::uint64_t seed);

// Recovers x mod 2^(n-1) from the y~ responses to PAIR_A and PAIR_B by
// propagating the joint carry state of both queries bit plane by bit plane.
Word joint_query_solver(Word y_tilde_a, Word y_tilde_b, unsigned n);

struct CpaStats {
    std::size_t joint_solves = 0;
    std::size_t class_a_blocks = 0;
    std::size_t class_b_blocks = 0;
};

struct CpaResult {
    EquivalentKey key;
    MergeStats merge;
    CpaStats stats;
};

CpaResult cpa_recover(const Image& p1, const Image& c1, const Image& p2, const Image& c2,
                      const std::vector<QueryTag>& tags, unsigned n);

}  // namespace mckba
