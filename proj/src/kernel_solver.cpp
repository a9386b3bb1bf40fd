#include "mckba/kernel_solver.hpp"

#include <array>

namespace mckba {

Word eval_kernel(Word alpha, Word beta, Word x, unsigned n) noexcept {
    const Word m = low_mask(n);
    return ((alpha + x) & m) ^ ((beta + x) & m);
}

CarryRow next_row(unsigned x, unsigned c, unsigned c_tilde, unsigned alpha, unsigned beta) noexcept {
    const unsigned carry = majority(x, alpha, c);
    const unsigned carry_tilde = majority(x, beta, c_tilde);
    return {carry, carry_tilde, carry ^ carry_tilde};
}

BitCase classify_case(unsigned alpha, unsigned beta, unsigned y_tilde) noexcept {
    switch (4 * (alpha & 1u) + 2 * (beta & 1u) + (y_tilde & 1u)) {
        case 1:
        case 7: return BitCase::DirectX;
        case 2:
        case 4: return BitCase::LinkedPair;
        case 3:
        case 5: return BitCase::CarryReveal;
        default: return BitCase::NoInfo;
    }
}

std::string_view to_string(BitCase c) noexcept {
    switch (c) {
        case BitCase::NoInfo: return "NO_INFO";
        case BitCase::DirectX: return "DIRECT_X";
        case BitCase::LinkedPair: return "LINKED_PAIR";
        case BitCase::CarryReveal: return "CARRY_REVEAL";
    }
    return "?";
}

bool kernel_feasible(const KernelInstance& inst) noexcept {
    const Word yt = inst.y_tilde();
    if (bit_of(yt, 0) != 0) return false;
    // reachable (c_i, c~_i) pairs, bit 2c + c~
    unsigned states = 1u;
    for (unsigned i = 0; i + 1 < inst.n && states != 0; ++i) {
        unsigned next = 0;
        for (unsigned s = 0; s < 4; ++s) {
            if (!(states & (1u << s))) continue;
            for (unsigned x = 0; x < 2; ++x) {
                const CarryRow r = next_row(x, s >> 1, s & 1u, bit_of(inst.alpha, i), bit_of(inst.beta, i));
                if (r.y_tilde == bit_of(yt, i + 1)) next |= 1u << (2 * r.carry + r.carry_tilde);
            }
        }
        states = next;
    }
    return states != 0;
}

namespace {

constexpr std::int8_t kUnknown = -1;

// Tri-state majority: known when all three inputs are known or two known
// inputs already agree.
std::int8_t majority3(std::int8_t a, std::int8_t b, std::int8_t c) noexcept {
    if (a != kUnknown && b != kUnknown && c != kUnknown)
        return static_cast<std::int8_t>(majority(static_cast<unsigned>(a), static_cast<unsigned>(b),
                                                 static_cast<unsigned>(c)));
    if (a != kUnknown && a == b) return a;
    if (a != kUnknown && a == c) return a;
    if (b != kUnknown && b == c) return b;
    return kUnknown;
}

class PlaneSweep {
public:
    PlaneSweep(const KernelInstance& inst, std::size_t block)
        : n_(inst.n), alpha_(inst.alpha), beta_(inst.beta), yt_(inst.y_tilde()), block_(block) {
        x_.fill(kUnknown);
        c_.fill(kUnknown);
        c_[0] = 0;
    }

    void sweep(std::vector<BitCase>* cases) {
        for (unsigned i = 0; i + 1 < n_; ++i) {
            const unsigned a = bit_of(alpha_, i);
            const unsigned b = bit_of(beta_, i);
            const unsigned t_next = bit_of(yt_, i + 1);
            const BitCase kind = classify_case(a, b, bit_of(yt_, i));
            if (cases) (*cases)[i] = kind;

            switch (kind) {
                case BitCase::NoInfo:
                    break;
                case BitCase::DirectX:
                    assign(x_[i], a ^ t_next);
                    break;
                case BitCase::LinkedPair:
                    // (x_i, c_i) in {(0,0),(1,1)} or {(0,1),(1,0)} depending on y~_{i+1}
                    if (c_[i] != kUnknown) assign(x_[i], t_next ^ static_cast<unsigned>(c_[i]));
                    break;
                case BitCase::CarryReveal:
                    assign(c_[i], b ^ t_next);
                    resolve_previous(i);
                    break;
            }
            forward_carry(i);
        }
    }

    KernelSolution result() const {
        KernelSolution out;
        out.key.block_index = block_;
        for (unsigned i = 0; i + 1 < n_; ++i) {
            if (x_[i] == kUnknown) continue;
            out.key.mask |= Word{1} << i;
            out.key.value |= static_cast<Word>(x_[i]) << i;
        }
        for (unsigned i = 0; i < n_; ++i) {
            if (c_[i] == kUnknown) continue;
            out.carry_mask |= Word{1} << i;
            out.carry_value |= static_cast<Word>(c_[i]) << i;
        }
        return out;
    }

private:
    std::int8_t carry_tilde(unsigned i) const noexcept {
        return c_[i] == kUnknown ? kUnknown : static_cast<std::int8_t>(c_[i] ^ bit_of(yt_, i));
    }

    void assign(std::int8_t& slot, unsigned value) {
        if (slot != kUnknown && static_cast<unsigned>(slot) != value)
            throw InconsistencyError("contradictory bit deduction", block_);
        slot = static_cast<std::int8_t>(value);
    }

    // c_i was just revealed; if c_{i-1} is known and differs from alpha_{i-1}
    // (or c~_{i-1} from beta_{i-1}) the carry out of plane i-1 equals x_{i-1}.
    void resolve_previous(unsigned i) {
        if (i == 0 || x_[i - 1] != kUnknown || c_[i - 1] == kUnknown) return;
        if (static_cast<unsigned>(c_[i - 1]) != bit_of(alpha_, i - 1)) {
            assign(x_[i - 1], static_cast<unsigned>(c_[i]));
        } else if (static_cast<unsigned>(carry_tilde(i - 1)) != bit_of(beta_, i - 1)) {
            assign(x_[i - 1], static_cast<unsigned>(carry_tilde(i)));
        }
    }

    void forward_carry(unsigned i) {
        std::int8_t next = majority3(x_[i], static_cast<std::int8_t>(bit_of(alpha_, i)), c_[i]);
        if (next == kUnknown) {
            const std::int8_t next_tilde =
                majority3(x_[i], static_cast<std::int8_t>(bit_of(beta_, i)), carry_tilde(i));
            if (next_tilde != kUnknown) next = static_cast<std::int8_t>(next_tilde ^ bit_of(yt_, i + 1));
        }
        if (next != kUnknown) assign(c_[i + 1], static_cast<unsigned>(next));
    }

    unsigned n_;
    Word alpha_, beta_, yt_;
    std::size_t block_;
    std::array<std::int8_t, kMaxWordBits> x_{};
    std::array<std::int8_t, kMaxWordBits> c_{};
};

}  // namespace

KernelSolution solve_kernel(const KernelInstance& inst, std::size_t block_index) {
    require_word_size(inst.n);
    require_word(inst.alpha, inst.n, "alpha");
    require_word(inst.beta, inst.n, "beta");
    require_word(inst.y, inst.n, "y");
    if (bit_of(inst.y_tilde(), 0) != 0)
        throw InconsistencyError("y~_0 must be 0 for any x", block_index);
    if (!kernel_feasible(inst)) throw InconsistencyError("no x satisfies the kernel equation", block_index);

    PlaneSweep solver(inst, block_index);
    std::vector<BitCase> cases(inst.n - 1);
    solver.sweep(&cases);
    // CARRY_REVEAL at a plane can unlock LINKED_PAIR at the same plane on a
    // second pass; further passes add nothing.
    solver.sweep(nullptr);

    KernelSolution out = solver.result();
    out.cases = std::move(cases);
    return out;
}

PartialKeyObservation solve_single_query(const KernelInstance& inst, std::size_t block_index) {
    return solve_kernel(inst, block_index).key;
}

std::vector<Word> brute_force_solutions(Word alpha, Word beta, Word y, unsigned n) {
    require_word_size(n);
    if (n > kBruteForceMaxBits)
        throw TractabilityError("brute force limited to n <= " + std::to_string(kBruteForceMaxBits));
    const Word half = Word{1} << (n - 1);
    std::vector<bool> seen(half, false);
    for (Word x = 0; x <= low_mask(n); ++x)
        if (eval_kernel(alpha, beta, x, n) == (y & low_mask(n))) seen[x & (half - 1)] = true;
    std::vector<Word> out;
    for (Word r = 0; r < half; ++r)
        if (seen[r]) out.push_back(r);
    return out;
}

}  // namespace mckba
