#pragma once

#include <cstdint>
#include <vector>

namespace mckba {

// Closed-form model for one uniform (alpha, beta, x) query.
double prob_y_zero(unsigned i);
double prob_carry_confirmed(unsigned i);
double prob_x_confirmed(unsigned i);

struct BitProfile {
    unsigned index = 0;
    double model_y_zero = 0;
    double model_carry = 0;
    double model_x = 0;
    std::uint64_t y_zero = 0;
    std::uint64_t carry_confirmed = 0;
    std::uint64_t x_confirmed = 0;
};

struct ConfirmationProfile {
    unsigned n = 0;
    std::uint64_t trials = 0;
    bool exhaustive = false;
    std::vector<BitProfile> bits;

    double empirical_y_zero(unsigned i) const { return rate(bits.at(i).y_zero); }
    double empirical_carry(unsigned i) const { return rate(bits.at(i).carry_confirmed); }
    double empirical_x(unsigned i) const { return rate(bits.at(i).x_confirmed); }

private:
    double rate(std::uint64_t count) const {
        return trials == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(trials);
    }
};

inline constexpr unsigned kExhaustiveProfileMaxBits = 8;

// Tallies solver confirmations over uniform queries. For n <= 8 every
// (alpha, beta, x) triple is enumerated and `trials`/`seed` are ignored.
ConfirmationProfile empirical_profile(unsigned n, std::uint64_t trials, std::uint64_t seed);

}  // namespace mckba
