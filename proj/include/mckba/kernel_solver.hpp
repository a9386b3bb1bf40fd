#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "mckba/bits.hpp"

namespace mckba {

// y = (alpha + x) ^ (beta + x) mod 2^n, with x unknown.
struct KernelInstance {
    unsigned n = 0;
    Word alpha = 0;
    Word beta = 0;
    Word y = 0;

    // y ^ alpha ^ beta; its bits expose only carry information.
    Word y_tilde() const noexcept { return y ^ alpha ^ beta; }
};

Word eval_kernel(Word alpha, Word beta, Word x, unsigned n) noexcept;

// One bit plane of the carry recursion for both additions.
struct CarryRow {
    unsigned carry;
    unsigned carry_tilde;
    unsigned y_tilde;
};

CarryRow next_row(unsigned x, unsigned c, unsigned c_tilde, unsigned alpha, unsigned beta) noexcept;

// What (alpha_i, beta_i, y~_i) reveals at a bit plane, keyed by
// 4*alpha_i + 2*beta_i + y~_i:
//   {0,6} NoInfo, {1,7} DirectX, {2,4} LinkedPair, {3,5} CarryReveal.
enum class BitCase : std::uint8_t { NoInfo, DirectX, LinkedPair, CarryReveal };

BitCase classify_case(unsigned alpha, unsigned beta, unsigned y_tilde) noexcept;
std::string_view to_string(BitCase c) noexcept;

// Solved key bits for one block: value has unknown bits zeroed, mask marks
// confirmed bits. Bit n-1 is never confirmed.
struct PartialKeyObservation {
    Word value = 0;
    Word mask = 0;
    std::size_t block_index = 0;

    unsigned confirmed() const noexcept { return static_cast<unsigned>(std::popcount(mask)); }
    friend bool operator==(const PartialKeyObservation&, const PartialKeyObservation&) = default;
};

struct KernelSolution {
    PartialKeyObservation key;
    // c_i knowledge for i in [0, n-1]; c~_i = c_i ^ y~_i follows.
    Word carry_value = 0;
    Word carry_mask = 0;
    std::vector<BitCase> cases;  // per plane 0..n-2
};

// True iff some x satisfies the instance (exact carry-state reachability).
bool kernel_feasible(const KernelInstance& instance) noexcept;

// Bit-plane sweep from the LSB upward using the case rules above plus carry
// forwarding and one-step retroactive resolution of x_{i-1}. Every confirmed
// bit is implied by the observation. Throws InconsistencyError when no x fits.
KernelSolution solve_kernel(const KernelInstance& instance, std::size_t block_index = 0);
PartialKeyObservation solve_single_query(const KernelInstance& instance, std::size_t block_index = 0);

inline constexpr unsigned kBruteForceMaxBits = 16;

// { x mod 2^(n-1) : eval_kernel(alpha, beta, x) == y }, sorted ascending.
std::vector<Word> brute_force_solutions(Word alpha, Word beta, Word y, unsigned n);

}  // namespace mckba
