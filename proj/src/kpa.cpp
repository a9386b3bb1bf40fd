#include "mckba/kpa.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

#include "mckba/cipher.hpp"

namespace mckba {

std::size_t EquivalentKey::ambiguous_count() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(selectors.begin(), selectors.end(), [](const SelectorEstimate& s) { return s.ambiguous; }));
}

EquivalentKey EquivalentKey::swapped() const {
    EquivalentKey out = *this;
    std::swap(out.key1_star, out.key2_star);
    std::swap(out.key1_mask, out.key2_mask);
    for (SelectorEstimate& s : out.selectors)
        if (!s.ambiguous) s.selector = static_cast<Selector>((s.selector + 2) % 4);
    return out;
}

KnownPair make_known_pair(const Image& plain, const Image& cipher, unsigned n) {
    if (!plain.same_shape(cipher)) throw InvalidInput("plain/cipher image dimensions differ");
    return {image_to_blocks(plain, n), image_to_blocks(cipher, n)};
}

std::vector<KernelInstance> differential_observations(const KnownPair& first, const KnownPair& second) {
    const std::size_t count = first.plain.size();
    if (first.cipher.size() != count || second.plain.size() != count || second.cipher.size() != count ||
        first.plain.n != second.plain.n)
        throw InvalidInput("known pairs must share dimensions and word size");
    std::vector<KernelInstance> out(count);
    for (std::size_t k = 0; k < count; ++k)
        out[k] = {first.plain.n, first.plain.words[k], second.plain.words[k],
                  first.cipher.words[k] ^ second.cipher.words[k]};
    return out;
}

std::vector<KernelInstance> differential_observations(const Image& p1, const Image& p2, const Image& c1,
                                                      const Image& c2, unsigned n) {
    if (!p1.same_shape(p2) || !p1.same_shape(c1) || !p1.same_shape(c2))
        throw InvalidInput("all four images must share dimensions");
    return differential_observations(make_known_pair(p1, c1, n), make_known_pair(p2, c2, n));
}

std::vector<PartialKeyObservation> solve_blocks(std::span<const KernelInstance> instances) {
    std::vector<PartialKeyObservation> out;
    out.reserve(instances.size());
    for (std::size_t k = 0; k < instances.size(); ++k) out.push_back(solve_single_query(instances[k], k));
    return out;
}

namespace {

struct Seed {
    Word value = 0;
    Word mask = 0;
};

bool conflicts(Word v1, Word m1, Word v2, Word m2) noexcept { return ((v1 ^ v2) & m1 & m2) != 0; }
bool conflicts(const Seed& s, const PartialKeyObservation& o) noexcept {
    return conflicts(s.value, s.mask, o.value, o.mask);
}
bool conflicts(const Seed& a, const Seed& b) noexcept { return conflicts(a.value, a.mask, b.value, b.mask); }

// Returns true when the seed gained confirmed bits.
bool absorb(Seed& s, Word value, Word mask) noexcept {
    const Word fresh = mask & ~s.mask;
    s.value |= value & fresh;
    s.mask |= fresh;
    return fresh != 0;
}

struct SeedPair {
    Seed side[2];
    std::vector<std::size_t> members[2];

    bool complete(unsigned n) const noexcept {
        return side[0].mask == solvable_mask(n) && side[1].mask == solvable_mask(n);
    }
};

class SeedMerger {
public:
    SeedMerger(std::span<const PartialKeyObservation> obs, unsigned n) : obs_(obs), n_(n) {
        for (std::size_t k = 0; k < obs.size(); ++k)
            if (obs[k].mask != 0) pool_.push_back(k);
        stats_.informative = pool_.size();
    }

    SeedMerge run() {
        auto first = take_seed_pair();
        if (!first) throw MergeFailure("no two observations conflict on a confirmed bit; need more or richer data");
        main_ = std::move(*first);
        absorb_to_fixpoint(main_);

        // leftover elements are compatible with both main seeds; seed a fresh
        // pair from them and graft it on once its orientation is forced
        while (!main_.complete(n_) && pool_.size() >= 2) {
            auto extra = take_seed_pair();
            if (!extra) break;
            absorb_to_fixpoint(*extra);
            parked_.push_back(std::move(*extra));
            graft_parked();
        }
        return finish();
    }

private:
    std::optional<SeedPair> take_seed_pair() {
        std::vector<std::size_t> order = pool_;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return obs_[a].confirmed() > obs_[b].confirmed(); });
        for (std::size_t i = 0; i < order.size(); ++i) {
            const PartialKeyObservation& a = obs_[order[i]];
            for (std::size_t j = i + 1; j < order.size(); ++j) {
                const PartialKeyObservation& b = obs_[order[j]];
                if (!conflicts(a.value, a.mask, b.value, b.mask)) continue;
                SeedPair pair;
                pair.side[0] = {a.value, a.mask};
                pair.side[1] = {b.value, b.mask};
                pair.members[0].push_back(order[i]);
                pair.members[1].push_back(order[j]);
                std::erase_if(pool_, [&](std::size_t k) { return k == order[i] || k == order[j]; });
                ++stats_.rounds;
                return pair;
            }
        }
        return std::nullopt;
    }

    // Anything clashing with one side belongs to the other; repeat until the
    // seeds stop growing or both are complete.
    void absorb_to_fixpoint(SeedPair& pair) {
        bool grew = true;
        while (grew && !pair.complete(n_) && !pool_.empty()) {
            grew = false;
            ++stats_.passes;
            std::vector<std::size_t> remaining;
            for (std::size_t k : pool_) {
                const bool c0 = conflicts(pair.side[0], obs_[k]);
                const bool c1 = conflicts(pair.side[1], obs_[k]);
                if (c0 && c1)
                    throw InternalConsistencyError("observation " + std::to_string(k) + " conflicts with both seeds");
                if (!c0 && !c1) {
                    remaining.push_back(k);
                    continue;
                }
                const int target = c0 ? 1 : 0;
                grew |= absorb(pair.side[target], obs_[k].value, obs_[k].mask);
                pair.members[target].push_back(k);
                ++stats_.absorbed;
            }
            pool_ = std::move(remaining);
        }
    }

    void graft_parked() {
        bool progress = true;
        while (progress) {
            progress = false;
            for (auto it = parked_.begin(); it != parked_.end(); ++it) {
                const bool straight_refuted = conflicts(it->side[0], main_.side[0]) || conflicts(it->side[1], main_.side[1]);
                const bool crossed_refuted = conflicts(it->side[0], main_.side[1]) || conflicts(it->side[1], main_.side[0]);
                if (straight_refuted == crossed_refuted) {
                    if (straight_refuted)
                        throw InternalConsistencyError("seed pair conflicts with both orientations of the main seeds");
                    continue;
                }
                const int offset = straight_refuted ? 1 : 0;
                for (int s = 0; s < 2; ++s) {
                    const int dst = (s + offset) % 2;
                    absorb(main_.side[dst], it->side[s].value, it->side[s].mask);
                    main_.members[dst].insert(main_.members[dst].end(), it->members[s].begin(), it->members[s].end());
                }
                parked_.erase(it);
                absorb_to_fixpoint(main_);
                progress = true;
                break;
            }
        }
    }

    SeedMerge finish() {
        SeedMerge out;
        out.n = n_;
        out.key1_star = main_.side[0].value & solvable_mask(n_);
        out.key1_mask = main_.side[0].mask & solvable_mask(n_);
        out.key2_star = main_.side[1].value & solvable_mask(n_);
        out.key2_mask = main_.side[1].mask & solvable_mask(n_);
        out.assignment.assign(obs_.size(), KeyClass::Unassigned);
        for (std::size_t k : main_.members[0]) out.assignment[k] = KeyClass::ClassA;
        for (std::size_t k : main_.members[1]) out.assignment[k] = KeyClass::ClassB;
        stats_.unassigned = static_cast<std::size_t>(
            std::count(out.assignment.begin(), out.assignment.end(), KeyClass::Unassigned));
        stats_.complete = out.complete();
        out.stats = stats_;
        return out;
    }

    std::span<const PartialKeyObservation> obs_;
    unsigned n_;
    std::vector<std::size_t> pool_;
    SeedPair main_;
    std::vector<SeedPair> parked_;
    MergeStats stats_;
};

}  // namespace

SeedMerge merge_seeds(std::span<const PartialKeyObservation> observations, unsigned n) {
    require_word_size(n);
    return SeedMerger(observations, n).run();
}

namespace {

enum class ClassVerdict { Key1, Key2, Unknown };

ClassVerdict class_from_confirmed_bits(const PartialKeyObservation& obs, const SeedMerge& merge) {
    const Word discriminating = (merge.key1_star ^ merge.key2_star) & merge.key1_mask & merge.key2_mask & obs.mask;
    if (discriminating == 0) return ClassVerdict::Unknown;
    const bool matches1 = (~(obs.value ^ merge.key1_star) & discriminating) != 0;
    const bool matches2 = (~(obs.value ^ merge.key2_star) & discriminating) != 0;
    if (matches1 && matches2)
        throw InternalConsistencyError("block " + std::to_string(obs.block_index) + " matches both seeds");
    return matches1 ? ClassVerdict::Key1 : ClassVerdict::Key2;
}

bool explains_block(std::span<const KnownPair> pairs, std::size_t k, Word key, bool xor_mode, unsigned n) {
    return std::all_of(pairs.begin(), pairs.end(), [&](const KnownPair& p) {
        return encrypt_word(p.plain.words[k], key, xor_mode, n) == p.cipher.words[k];
    });
}

}  // namespace

std::vector<SelectorEstimate> recover_selectors(std::span<const KnownPair> pairs, const SeedMerge& merge,
                                                std::span<const PartialKeyObservation> observations) {
    if (pairs.empty()) throw InvalidInput("at least one known pair is required");
    const unsigned n = merge.n;
    const std::size_t count = pairs.front().plain.size();
    for (const KnownPair& p : pairs)
        if (p.plain.size() != count || p.cipher.size() != count || p.plain.n != n)
            throw InvalidInput("known pairs disagree with the merge word size or block count");
    if (observations.size() != count) throw InvalidInput("observation count differs from block count");

    std::vector<SelectorEstimate> out(count);
    for (std::size_t k = 0; k < count; ++k) {
        SelectorEstimate& est = out[k];
        // XOR mode preserves the parity of J + key ^ key relative to J; XNOR flips it
        est.xor_mode = ((pairs.front().plain.words[k] ^ pairs.front().cipher.words[k]) & 1u) == 0;

        ClassVerdict verdict = class_from_confirmed_bits(observations[k], merge);
        if (verdict == ClassVerdict::Unknown && merge.complete()) {
            const bool ok1 = explains_block(pairs, k, merge.key1_star, est.xor_mode, n);
            const bool ok2 = explains_block(pairs, k, merge.key2_star, est.xor_mode, n);
            if (!ok1 && !ok2)
                throw InternalConsistencyError("block " + std::to_string(k) + " fits neither recovered key");
            if (ok1 != ok2) verdict = ok1 ? ClassVerdict::Key1 : ClassVerdict::Key2;
        }
        if (verdict == ClassVerdict::Unknown) {
            est.ambiguous = true;
            continue;
        }
        const Selector base = verdict == ClassVerdict::Key1 ? 2 : 0;
        est.selector = static_cast<Selector>(base + (est.xor_mode ? 1 : 0));
    }
    return out;
}

KpaResult kpa_attack(const Image& p1, const Image& c1, const Image& p2, const Image& c2, unsigned n) {
    require_word_size(n);
    if (!p1.same_shape(p2) || !p1.same_shape(c1) || !p1.same_shape(c2))
        throw InvalidInput("all four images must share dimensions");
    const std::vector<KnownPair> pairs = {make_known_pair(p1, c1, n), make_known_pair(p2, c2, n)};
    const std::vector<KernelInstance> instances = differential_observations(pairs[0], pairs[1]);
    const std::vector<PartialKeyObservation> observations = solve_blocks(instances);
    const SeedMerge merge = merge_seeds(observations, n);

    KpaResult result;
    result.merge = merge.stats;
    EquivalentKey& key = result.key;
    key.n = n;
    key.key1_star = merge.key1_star;
    key.key1_mask = merge.key1_mask;
    key.key2_star = merge.key2_star;
    key.key2_mask = merge.key2_mask;
    key.selectors = recover_selectors(pairs, merge, observations);
    return result;
}

EquivalentDecryption decrypt_with_equivalent(const Image& cipher, const EquivalentKey& key, AmbiguityPolicy policy) {
    BlockStream blocks = image_to_blocks(cipher, key.n);
    if (blocks.size() != key.selectors.size())
        throw InvalidInput("equivalent key covers " + std::to_string(key.selectors.size()) + " blocks, image has " +
                           std::to_string(blocks.size()));
    EquivalentDecryption out;
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        const SelectorEstimate& s = key.selectors[k];
        bool use_key1 = uses_key1(s.selector);
        if (s.ambiguous) {
            out.ambiguous_blocks.push_back(k);
            use_key1 = policy == AmbiguityPolicy::Key1Class;
        }
        const bool xor_mode = s.ambiguous ? s.xor_mode : is_xor_mode(s.selector);
        blocks.words[k] = decrypt_word(blocks.words[k], use_key1 ? key.key1_star : key.key2_star, xor_mode, key.n);
    }
    out.image = blocks_to_image(blocks);
    return out;
}

}  // namespace mckba
