#pragma once

// Shared generators for the test suites: seeded random rationals and random
// canonical step functions (used by property-style checks).

#include <set>
#include <vector>

#include "rotlab/rational.hpp"
#include "rotlab/stepfun.hpp"

namespace rotlab::testing {

inline Rat random_rat01(SplitMix64& rng, std::uint64_t max_den = 64) {
    std::uint64_t d = rng.next_below(max_den - 1) + 2;
    std::uint64_t n = rng.next_below(d);
    return Rat(Int(n), Int(d));
}

inline Rat random_rat(SplitMix64& rng, long lo = -8, long hi = 8, std::uint64_t max_den = 16) {
    std::uint64_t d = rng.next_below(max_den) + 1;
    long span = hi - lo;
    long n = lo + static_cast<long>(rng.next_below(static_cast<std::uint64_t>(span * d + 1)));
    return Rat(Int(n), Int(d));
}

inline StepFunction random_step_function(SplitMix64& rng, int max_pieces = 8,
                                         bool mean_zero = false) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        int m = 2 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(max_pieces - 1)));
        std::set<Rat> bset;
        while (static_cast<int>(bset.size()) < m) bset.insert(random_rat01(rng, 64));
        std::vector<Rat> breaks(bset.begin(), bset.end());
        std::vector<Rat> vals;
        for (int i = 0; i < m; ++i)
            vals.push_back(Rat(static_cast<long>(rng.next_below(13)) - 6));
        StepFunction f(breaks, vals);
        if (mean_zero) f = f - StepFunction::constant(f.integral());
        if (!f.is_constant()) return f;
    }
    throw std::runtime_error("failed to generate a non-constant step function");
}

}  // namespace rotlab::testing
