#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mckba/block_codec.hpp"
#include "mckba/kernel_solver.hpp"
#include "mckba/keystream.hpp"

namespace mckba {

enum class KeyClass : std::uint8_t { Unassigned, ClassA, ClassB };

struct SelectorEstimate {
    bool ambiguous = false;
    Selector selector = 0;   // meaningful when !ambiguous
    bool xor_mode = false;   // parity class from the known pair: B in {1,3}

    friend bool operator==(const SelectorEstimate&, const SelectorEstimate&) = default;
};

// key1_star/key2_star carry bits 0..n-2 only. Which of them matches the real
// key1 is unknowable; swapping both keys and mapping B -> (B+2) mod 4 is the
// same key.
struct EquivalentKey {
    unsigned n = 0;
    Word key1_star = 0;
    Word key1_mask = 0;
    Word key2_star = 0;
    Word key2_mask = 0;
    std::vector<SelectorEstimate> selectors;

    bool keys_complete() const noexcept {
        return key1_mask == solvable_mask(n) && key2_mask == solvable_mask(n);
    }
    std::size_t ambiguous_count() const noexcept;
    EquivalentKey swapped() const;
};

struct KnownPair {
    BlockStream plain;
    BlockStream cipher;
};

KnownPair make_known_pair(const Image& plain, const Image& cipher, unsigned n);

// alpha = J1(k), beta = J2(k), y = J1'(k) ^ J2'(k) for every block.
std::vector<KernelInstance> differential_observations(const Image& p1, const Image& p2,
                                                      const Image& c1, const Image& c2, unsigned n);
std::vector<KernelInstance> differential_observations(const KnownPair& first, const KnownPair& second);

std::vector<PartialKeyObservation> solve_blocks(std::span<const KernelInstance> instances);

struct MergeStats {
    std::size_t rounds = 0;          // Step 2 seed selections
    std::size_t passes = 0;          // Step 3 sweeps over the pool
    std::size_t absorbed = 0;
    std::size_t unassigned = 0;
    std::size_t informative = 0;     // observations with a nonzero mask
    bool complete = false;
};

struct SeedMerge {
    unsigned n = 0;
    Word key1_star = 0;
    Word key1_mask = 0;
    Word key2_star = 0;
    Word key2_mask = 0;
    std::vector<KeyClass> assignment;  // indexed like the observations
    MergeStats stats;

    bool complete() const noexcept {
        return key1_mask == solvable_mask(n) && key2_mask == solvable_mask(n);
    }
};

// Clusters the per-block partial keys into the two sub-keys by conflicts on
// commonly confirmed bits (seed selection, absorption to a fixpoint, restart
// on the leftover pool).
SeedMerge merge_seeds(std::span<const PartialKeyObservation> observations, unsigned n);

// B*(k) from the key class (confirmed-bit discrimination against the seeds,
// falling back to re-encrypting the known pairs once both keys are complete)
// intersected with the parity class of the first known pair.
std::vector<SelectorEstimate> recover_selectors(std::span<const KnownPair> pairs, const SeedMerge& merge,
                                                std::span<const PartialKeyObservation> observations);

struct KpaResult {
    EquivalentKey key;
    MergeStats merge;
};

KpaResult kpa_attack(const Image& p1, const Image& c1, const Image& p2, const Image& c2, unsigned n);

enum class AmbiguityPolicy : std::uint8_t { Key1Class, Key2Class };

struct EquivalentDecryption {
    Image image;
    std::vector<std::size_t> ambiguous_blocks;
};

EquivalentDecryption decrypt_with_equivalent(const Image& cipher, const EquivalentKey& key,
                                             AmbiguityPolicy policy = AmbiguityPolicy::Key1Class);

}  // namespace mckba
