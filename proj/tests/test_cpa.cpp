#include <random>

#include "doctest.h"
#include "mckba/cipher.hpp"
#include "mckba/cpa.hpp"
#include "mckba/keygen.hpp"
#include "oracle.hpp"

using namespace mckba;

namespace {

Word y_tilde_of(Word alpha, Word beta, Word x, unsigned n) {
    return oracle::kernel(alpha, beta, x, n) ^ alpha ^ beta;
}

void check_joint_exhaustive(unsigned n) {
    const auto [a, b] = determining_queries(n);
    for (Word x = 0; x <= low_mask(n); ++x) {
        const Word yta = y_tilde_of(a.alpha, a.beta, x, n);
        const Word ytb = y_tilde_of(b.alpha, b.beta, x, n);
        REQUIRE(joint_query_solver(yta, ytb, n) == (x & solvable_mask(n)));
    }
}

}  // namespace

TEST_SUITE("cpa") {

TEST_CASE("query constants") {
    const auto [a8, b8] = determining_queries(8);
    CHECK(a8.alpha == 0x00);
    CHECK(a8.beta == 0xAA);
    CHECK(b8.alpha == 0xAA);
    CHECK(b8.beta == 0x55);
    CHECK(a8.tag == QueryTag::PairA);
    CHECK(b8.tag == QueryTag::PairB);
    const auto [a4, b4] = determining_queries(4);
    CHECK(a4.beta == 0b1010);
    CHECK(b4.beta == 0b0101);
    const auto [a2, b2] = determining_queries(2);
    CHECK(a2.beta == 0b10);
    CHECK(b2.alpha == 0b10);
    CHECK(b2.beta == 0b01);
    CHECK(alternating_high(32) == 0xAAAAAAAAu);
    CHECK(alternating_low(64) == 0x5555555555555555ull);
}

TEST_CASE("joint solver, exhaustive small words") {
    for (unsigned n = 2; n <= 10; ++n) check_joint_exhaustive(n);
}

TEST_CASE("joint solver, random wide words") {
    std::mt19937_64 rng(5);
    for (unsigned n : {16u, 32u, 63u, 64u}) {
        const auto [a, b] = determining_queries(n);
        for (int t = 0; t < 2000; ++t) {
            const Word x = rng() & low_mask(n);
            REQUIRE(joint_query_solver(y_tilde_of(a.alpha, a.beta, x, n), y_tilde_of(b.alpha, b.beta, x, n), n) ==
                    (x & solvable_mask(n)));
        }
    }
}

TEST_CASE("joint solver rejects impossible responses") {
    // y~_0 is always 0
    CHECK_THROWS_AS(joint_query_solver(1, 0, 8), InconsistencyError);
    CHECK_THROWS_AS(joint_query_solver(0, 1, 8), InconsistencyError);
}

TEST_CASE("single queries leave gaps that the pair closes") {
    // one of the two queries alone usually falls short, the union does not
    const unsigned n = 8;
    const auto [a, b] = determining_queries(n);
    std::size_t partial = 0;
    for (Word x = 0; x <= low_mask(n); ++x) {
        const PartialKeyObservation oa = solve_single_query({n, a.alpha, a.beta, oracle::kernel(a.alpha, a.beta, x, n)});
        const PartialKeyObservation ob = solve_single_query({n, b.alpha, b.beta, oracle::kernel(b.alpha, b.beta, x, n)});
        REQUIRE(((oa.value ^ x) & oa.mask) == 0);
        REQUIRE(((ob.value ^ x) & ob.mask) == 0);
        if ((oa.mask | ob.mask) != solvable_mask(n)) ++partial;
    }
    CHECK(partial > 0);
}

TEST_CASE("chosen images") {
    const ChosenImages c = build_chosen_images(16, 16, 8, 3);
    REQUIRE(c.tags.size() == 256);
    const BlockStream b1 = image_to_blocks(c.p1, 8), b2 = image_to_blocks(c.p2, 8);
    const auto [a, b] = determining_queries(8);
    std::size_t count_a = 0;
    for (std::size_t k = 0; k < c.tags.size(); ++k) {
        const QueryPair& q = c.tags[k] == QueryTag::PairA ? a : b;
        CHECK(b1.words[k] == q.alpha);
        CHECK(b2.words[k] == q.beta);
        count_a += c.tags[k] == QueryTag::PairA;
    }
    CHECK(count_a > 64);
    CHECK(count_a < 192);

    const ChosenImages again = build_chosen_images(16, 16, 8, 3);
    CHECK(again.p1 == c.p1);
    CHECK(again.p2 == c.p2);
    CHECK(again.tags == c.tags);
    CHECK(build_chosen_images(16, 16, 8, 4).tags != c.tags);

    CHECK_NOTHROW(build_chosen_images(4, 2, 32, 1));
    CHECK_THROWS_AS(build_chosen_images(3, 1, 32, 1), InvalidInput);
}

TEST_CASE("end-to-end recovery") {
    for (unsigned n : {8u, 16u, 32u}) {
        const SecretKey key = keygen(n, 40 + n);
        const ChosenImages c = build_chosen_images(64, 64, n, n);
        const Image c1 = encrypt_image(c.p1, key), c2 = encrypt_image(c.p2, key);
        const CpaResult r = cpa_recover(c.p1, c1, c.p2, c2, c.tags, n);
        REQUIRE(r.key.keys_complete());
        const Word k1 = key.key1 & solvable_mask(n), k2 = key.key2 & solvable_mask(n);
        const bool straight = r.key.key1_star == k1 && r.key.key2_star == k2;
        const bool crossed = r.key.key1_star == k2 && r.key.key2_star == k1;
        CHECK((straight || crossed));
        CHECK(r.stats.joint_solves > 0);

        std::mt19937_64 rng(n);
        const Image p3 = oracle::random_image(64, 64, rng);
        const EquivalentDecryption d = decrypt_with_equivalent(encrypt_image(p3, key), r.key);
        if (d.ambiguous_blocks.empty()) CHECK(d.image == p3);
    }
}

TEST_CASE("one block is not enough") {
    const SecretKey key = keygen(32, 9);
    const ChosenImages c = build_chosen_images(4, 1, 32, 2);
    const Image c1 = encrypt_image(c.p1, key), c2 = encrypt_image(c.p2, key);
    CHECK_THROWS_AS(cpa_recover(c.p1, c1, c.p2, c2, c.tags, 32), CoverageError);
}

TEST_CASE("tag list must match the images") {
    const SecretKey key = keygen(8, 9);
    const ChosenImages c = build_chosen_images(8, 8, 8, 2);
    const Image c1 = encrypt_image(c.p1, key), c2 = encrypt_image(c.p2, key);
    std::vector<QueryTag> short_tags(c.tags.begin(), c.tags.end() - 1);
    CHECK_THROWS_AS(cpa_recover(c.p1, c1, c.p2, c2, short_tags, 8), InvalidInput);
}

}
