#include "mckba/cpa.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "mckba/cipher.hpp"

namespace mckba {

Word alternating_high(unsigned n) noexcept { return 0xAAAAAAAAAAAAAAAAull & low_mask(n); }
Word alternating_low(unsigned n) noexcept { return 0x5555555555555555ull & low_mask(n); }

std::pair<QueryPair, QueryPair> determining_queries(unsigned n) {
    require_word_size(n);
    return {QueryPair{0, alternating_high(n), QueryTag::PairA},
            QueryPair{alternating_high(n), alternating_low(n), QueryTag::PairB}};
}

ChosenImages build_chosen_images(std::size_t width, std::size_t height, unsigned n, std::uint64_t seed) {
    require_word_size(n);
    if (width == 0 || height == 0) throw InvalidInput("chosen images need positive dimensions");
    if ((8 * width * height) % n != 0) throw InvalidInput("8*width*height must be a multiple of n");
    const auto [pair_a, pair_b] = determining_queries(n);

    BlockStream s1;
    s1.n = n;
    s1.width = width;
    s1.height = height;
    s1.words.resize(block_count(width, height, n));
    BlockStream s2 = s1;

    ChosenImages out;
    out.tags.resize(s1.size());
    std::mt19937_64 rng(seed);
    for (std::size_t k = 0; k < s1.size(); ++k) {
        const bool use_b = (rng() >> 63) != 0;
        const QueryPair& q = use_b ? pair_b : pair_a;
        out.tags[k] = q.tag;
        s1.words[k] = q.alpha;
        s2.words[k] = q.beta;
    }
    out.p1 = blocks_to_image(s1);
    out.p2 = blocks_to_image(s2);
    return out;
}

namespace {

struct JointHypothesis {
    unsigned carry_a;
    unsigned carry_tilde_a;
    unsigned carry_b;
    unsigned carry_tilde_b;
    Word x;

    auto operator<=>(const JointHypothesis&) const = default;
};

}  // namespace

Word joint_query_solver(Word y_tilde_a, Word y_tilde_b, unsigned n) {
    require_word_size(n);
    if (bit_of(y_tilde_a, 0) != 0 || bit_of(y_tilde_b, 0) != 0)
        throw InconsistencyError("y~_0 must be 0 for both queries");
    const auto [qa, qb] = determining_queries(n);

    // Each surviving hypothesis is a joint carry state plus the x bits that
    // led to it. Transitions come straight from the carry recursion.
    std::set<JointHypothesis> live = {{0, 0, 0, 0, 0}};
    for (unsigned i = 0; i + 1 < n; ++i) {
        std::set<JointHypothesis> next;
        for (const JointHypothesis& h : live) {
            for (unsigned x = 0; x < 2; ++x) {
                const CarryRow ra = next_row(x, h.carry_a, h.carry_tilde_a, bit_of(qa.alpha, i), bit_of(qa.beta, i));
                const CarryRow rb = next_row(x, h.carry_b, h.carry_tilde_b, bit_of(qb.alpha, i), bit_of(qb.beta, i));
                if (ra.y_tilde != bit_of(y_tilde_a, i + 1) || rb.y_tilde != bit_of(y_tilde_b, i + 1)) continue;
                next.insert({ra.carry, ra.carry_tilde, rb.carry, rb.carry_tilde, h.x | (Word{x} << i)});
            }
        }
        live = std::move(next);
        if (live.empty()) throw InconsistencyError("query responses fit no x");
    }
    const Word x = live.begin()->x;
    for (const JointHypothesis& h : live)
        if (h.x != x) throw InternalConsistencyError("query responses leave x undetermined");
    return x;
}

namespace {

const char* class_name(int cls) { return cls == 0 ? "A" : "B"; }

std::set<Word> distinct_y_tilde(std::span<const KernelInstance> instances, const std::vector<QueryTag>& tags,
                                 const std::vector<KeyClass>& assignment, QueryTag tag, KeyClass cls) {
    std::set<Word> out;
    for (std::size_t k = 0; k < instances.size(); ++k)
        if (tags[k] == tag && assignment[k] == cls) out.insert(instances[k].y_tilde());
    return out;
}

}  // namespace

CpaResult cpa_recover(const Image& p1, const Image& c1, const Image& p2, const Image& c2,
                      const std::vector<QueryTag>& tags, unsigned n) {
    require_word_size(n);
    if (!p1.same_shape(p2) || !p1.same_shape(c1) || !p1.same_shape(c2))
        throw InvalidInput("all four images must share dimensions");
    const std::vector<KnownPair> pairs = {make_known_pair(p1, c1, n), make_known_pair(p2, c2, n)};
    if (tags.size() != pairs[0].plain.size()) throw InvalidInput("tag record does not match the block count");

    const std::vector<KernelInstance> instances = differential_observations(pairs[0], pairs[1]);
    const auto [qa, qb] = determining_queries(n);
    for (std::size_t k = 0; k < instances.size(); ++k) {
        const QueryPair& q = tags[k] == QueryTag::PairA ? qa : qb;
        if (instances[k].alpha != q.alpha || instances[k].beta != q.beta)
            throw InvalidInput("block " + std::to_string(k) + " does not carry its tagged query pair");
    }
    const std::vector<PartialKeyObservation> observations = solve_blocks(instances);

    SeedMerge merge;
    try {
        merge = merge_seeds(observations, n);
    } catch (const MergeFailure& e) {
        throw CoverageError(std::string("cannot split blocks into two key classes: ") + e.what(), 0);
    }

    CpaResult result;
    result.merge = merge.stats;
    Word* keys[2] = {&merge.key1_star, &merge.key2_star};
    Word* masks[2] = {&merge.key1_mask, &merge.key2_mask};
    const KeyClass labels[2] = {KeyClass::ClassA, KeyClass::ClassB};

    for (int cls = 0; cls < 2; ++cls) {
        if (*masks[cls] == solvable_mask(n)) continue;
        auto responses = [&](QueryTag tag) {
            auto found = distinct_y_tilde(instances, tags, merge.assignment, tag, labels[cls]);
            return found.empty() ? distinct_y_tilde(instances, tags, merge.assignment, tag, KeyClass::Unassigned)
                                 : found;
        };
        const std::set<Word> ya = responses(QueryTag::PairA);
        const std::set<Word> yb = responses(QueryTag::PairB);
        if (ya.empty() || yb.empty())
            throw CoverageError(std::string("key class ") + class_name(cls) + " lacks a " +
                                    (ya.empty() ? "PAIR_A" : "PAIR_B") + " block and its bits are incomplete",
                                cls);

        std::set<Word> candidates;
        for (Word a : ya) {
            for (Word b : yb) {
                Word x = 0;
                try {
                    x = joint_query_solver(a, b, n);
                } catch (const InconsistencyError&) {
                    continue;
                }
                if (((x ^ *keys[cls]) & *masks[cls]) == 0) candidates.insert(x);
            }
        }
        if (candidates.size() > 1) {
            // keep candidates that explain every block already placed in this class
            std::erase_if(candidates, [&](Word x) {
                for (std::size_t k = 0; k < instances.size(); ++k)
                    if (merge.assignment[k] == labels[cls] &&
                        eval_kernel(instances[k].alpha, instances[k].beta, x, n) != instances[k].y)
                        return true;
                return false;
            });
        }
        if (candidates.size() != 1)
            throw CoverageError(std::string("key class ") + class_name(cls) + ": " +
                                    std::to_string(candidates.size()) + " candidate completions",
                                cls);
        *keys[cls] = *candidates.begin();
        *masks[cls] = solvable_mask(n);
        ++result.stats.joint_solves;
    }
    if (merge.key1_star == merge.key2_star)
        throw CoverageError("both key classes resolved to the same key", 1);

    EquivalentKey& key = result.key;
    key.n = n;
    key.key1_star = merge.key1_star;
    key.key1_mask = merge.key1_mask;
    key.key2_star = merge.key2_star;
    key.key2_mask = merge.key2_mask;
    key.selectors = recover_selectors(pairs, merge, observations);
    for (const SelectorEstimate& s : key.selectors) {
        if (s.ambiguous) continue;
        (uses_key1(s.selector) ? result.stats.class_a_blocks : result.stats.class_b_blocks) += 1;
    }
    return result;
}

}  // namespace mckba
