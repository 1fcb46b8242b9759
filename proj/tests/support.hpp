#pragma once

// Shared helpers for the unit tests: rational literals, independent oracles
// and seeded generators.

#include <stepsum/numeric.hpp>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace stepsum::testing {

inline rational Q(char const* text)
{
    return parse_rational(text);
}

inline rational Q(long num, long den)
{
    rational r(num, den);
    r.canonicalize();
    return r;
}

/// Primes <= n by trial division; independent of the sieve.
inline std::vector<std::uint32_t> trial_division_primes(std::uint32_t n)
{
    std::vector<std::uint32_t> out;
    for (std::uint32_t c = 2; c <= n; ++c) {
        bool prime = true;
        for (std::uint32_t d = 2; d * d <= c; ++d)
            if (c % d == 0) {
                prime = false;
                break;
            }
        if (prime)
            out.push_back(c);
    }
    return out;
}

/// Deterministic generator for property tests.
inline std::mt19937_64 seeded(std::uint64_t seed)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x5eedu};
    return std::mt19937_64(seq);
}

inline double uniform(std::mt19937_64& rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

} // namespace stepsum::testing
