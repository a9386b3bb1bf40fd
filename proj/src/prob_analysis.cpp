#include "mckba/prob_analysis.hpp"

#include <cmath>
#include <random>

#include "mckba/bits.hpp"
#include "mckba/kernel_solver.hpp"

namespace mckba {

double prob_y_zero(unsigned i) { return 2.0 / 3.0 + 1.0 / (3.0 * std::ldexp(1.0, 2 * static_cast<int>(i))); }

double prob_carry_confirmed(unsigned i) {
    if (i == 0) return 1.0;
    double p = 0.75;
    for (unsigned j = 2; j <= i; ++j) {
        const double quarter_pow_prev = std::ldexp(1.0, -2 * static_cast<int>(j - 1));
        p = p * (7.0 / 12.0 + quarter_pow_prev / 6.0) + 0.25 - quarter_pow_prev / 4.0;
    }
    return p;
}

double prob_x_confirmed(unsigned i) {
    if (i == 0) return 0.5;
    const double y0 = prob_y_zero(i);
    const double c = prob_carry_confirmed(i);
    const double y1_next = 1.0 - prob_y_zero(i + 1);
    const double direct = 0.5 * y0 + 0.5 * y0 * c;
    return direct + 0.5 * y1_next * (1.0 - direct) * c * 0.5;
}

namespace {

void tally(ConfirmationProfile& prof, const KernelInstance& inst) {
    const KernelSolution sol = solve_kernel(inst);
    const Word yt = inst.y_tilde();
    for (unsigned i = 0; i < prof.n; ++i) {
        BitProfile& b = prof.bits[i];
        b.y_zero += bit_of(yt, i) == 0;
        b.carry_confirmed += bit_of(sol.carry_mask, i);
        b.x_confirmed += bit_of(sol.key.mask, i);
    }
}

}  // namespace

ConfirmationProfile empirical_profile(unsigned n, std::uint64_t trials, std::uint64_t seed) {
    require_word_size(n);
    ConfirmationProfile prof;
    prof.n = n;
    prof.bits.resize(n);
    for (unsigned i = 0; i < n; ++i) {
        BitProfile& b = prof.bits[i];
        b.index = i;
        b.model_y_zero = prob_y_zero(i);
        b.model_carry = prob_carry_confirmed(i);
        // bit n-1 is unsolvable, the closed form only covers 0..n-2
        b.model_x = i + 1 < n ? prob_x_confirmed(i) : 0.0;
    }

    if (n <= kExhaustiveProfileMaxBits) {
        prof.exhaustive = true;
        const Word top = low_mask(n);
        for (Word alpha = 0; alpha <= top; ++alpha)
            for (Word beta = 0; beta <= top; ++beta)
                for (Word x = 0; x <= top; ++x) tally(prof, {n, alpha, beta, eval_kernel(alpha, beta, x, n)});
        prof.trials = Word{1} << (3 * n);
        return prof;
    }

    if (trials == 0) throw InvalidInput("trials must be at least 1");
    std::mt19937_64 rng(seed);
    const Word m = low_mask(n);
    for (std::uint64_t t = 0; t < trials; ++t) {
        const Word alpha = rng() & m;
        const Word beta = rng() & m;
        const Word x = rng() & m;
        tally(prof, {n, alpha, beta, eval_kernel(alpha, beta, x, n)});
    }
    prof.trials = trials;
    return prof;
}

}  // namespace mckba
