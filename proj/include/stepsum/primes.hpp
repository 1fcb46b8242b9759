#pragma once

/// \file primes.hpp
/// Sieve of Eratosthenes and direct-summation oracles over the primes.

#include <stepsum/jump_series.hpp>
#include <stepsum/numeric.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace stepsum {

/// Sieve limit beyond the configured memory budget.
struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fixed-width accumulator would wrap.
struct overflow_error : std::overflow_error {
    using std::overflow_error::overflow_error;
};

struct sieve_options {
    std::uint64_t max_limit = 100'000'000;
};

class prime_table {
public:
    [[nodiscard]] std::uint64_t                     limit() const { return limit_; }
    [[nodiscard]] std::vector<std::uint32_t> const& primes() const { return primes_; }

    /// Number of primes <= x, for any real x (no range check).
    [[nodiscard]] std::size_t count_at_or_below(double x) const
    {
        if (!(x >= 2.0))
            return 0;
        auto const n = static_cast<std::uint64_t>(std::floor(std::min(x, static_cast<double>(limit_))));
        return static_cast<std::size_t>(std::upper_bound(primes_.begin(), primes_.end(), n) - primes_.begin());
    }

    [[nodiscard]] std::size_t count_at_or_below(std::int64_t n) const
    {
        if (n < 2)
            return 0;
        auto const u = static_cast<std::uint64_t>(n);
        return static_cast<std::size_t>(std::upper_bound(primes_.begin(), primes_.end(), u) - primes_.begin());
    }

private:
    friend prime_table sieve(std::uint64_t limit, sieve_options const& opts);

    std::uint64_t              limit_ = 0;
    std::vector<std::uint32_t> primes_;
};

/// All primes <= limit. Single-segment bitset sieve over odd numbers.
inline prime_table sieve(std::uint64_t limit, sieve_options const& opts = {})
{
    if (limit < 2)
        throw domain_error("sieve: limit must be >= 2");
    if (limit > opts.max_limit || limit > 0xffffffffULL)
        throw resource_error("sieve: limit " + std::to_string(limit) + " exceeds budget " + std::to_string(opts.max_limit));

    prime_table t;
    t.limit_ = limit;
    // composite[i] marks the odd number 2i + 1
    std::vector<bool> composite((limit + 1) / 2, false);
    for (std::uint64_t i = 3; i * i <= limit; i += 2) {
        if (composite[i / 2])
            continue;
        for (std::uint64_t j = i * i; j <= limit; j += 2 * i)
            composite[j / 2] = true;
    }
    t.primes_.push_back(2);
    for (std::uint64_t i = 1; 2 * i + 1 <= limit; ++i)
        if (!composite[i])
            t.primes_.push_back(static_cast<std::uint32_t>(2 * i + 1));
    return t;
}

namespace detail {

template <scalar T>
std::int64_t checked_floor(prime_table const& table, T const& x, char const* who)
{
    if (x > T(static_cast<double>(table.limit())))
        throw range_error(std::string(who) + ": x=" + format_scalar(x) + " exceeds sieve limit " + std::to_string(table.limit()));
    if constexpr (!is_exact_v<T>) {
        if (!std::isfinite(x))
            throw domain_error(std::string(who) + ": non-finite x");
        if (x < 0)
            return -1;
    } else {
        if (x < 0)
            return -1;
    }
    return floor_to_int(x);
}

} // namespace detail

/// pi(x): number of primes <= x. Throws range_error for x > limit.
template <scalar T>
std::uint64_t pi_direct(prime_table const& table, T const& x)
{
    return table.count_at_or_below(detail::checked_floor(table, x, "pi_direct"));
}

/// Sum over primes p <= x of p^k as an exact 128-bit integer; k in [0, 4].
template <scalar T>
__int128 prime_power_sum_direct(prime_table const& table, T const& x, int k)
{
    if (k < 0 || k > 4)
        throw domain_error("prime_power_sum_direct: k must lie in [0, 4]");
    auto const  n     = table.count_at_or_below(detail::checked_floor(table, x, "prime_power_sum_direct"));
    auto const& ps    = table.primes();
    __int128    total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        __int128 term = 1;
        for (int j = 0; j < k; ++j)
            if (__builtin_mul_overflow(term, static_cast<__int128>(ps[i]), &term))
                throw overflow_error("prime_power_sum_direct: term overflow");
        if (__builtin_add_overflow(total, term, &total))
            throw overflow_error("prime_power_sum_direct: accumulator overflow");
    }
    return total;
}

/// Sum over primes p <= x of 1/p; 0 for x < 2.
template <scalar T>
T hp_direct(prime_table const& table, T const& x)
{
    auto const  n  = table.count_at_or_below(detail::checked_floor(table, x, "hp_direct"));
    auto const& ps = table.primes();
    if constexpr (is_exact_v<T>) {
        std::vector<rational> terms;
        terms.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
            terms.emplace_back(1, ps[i]);
        return pairwise_sum(terms);
    } else {
        double_double acc;
        for (std::size_t i = 0; i < n; ++i)
            acc += double_double(1.0) / static_cast<double>(ps[i]);
        return acc.value();
    }
}

/// Sum over primes p <= x of (log p)/p. Float mode only; x >= 2.
inline double log_weight_sum_direct(prime_table const& table, double x)
{
    if (!(x >= 2.0))
        throw domain_error("log_weight_sum_direct: x must be >= 2");
    auto const    n  = table.count_at_or_below(detail::checked_floor(table, x, "log_weight_sum_direct"));
    auto const&   ps = table.primes();
    double_double acc;
    for (std::size_t i = 0; i < n; ++i) {
        double const p = ps[i];
        acc += double_double(std::log(p) / p);
    }
    return acc.value();
}

// ---------------------------------------------------------------------------
// Prime-indexed step functions (atoms for every prime <= x)

enum class prime_weight {
    reciprocal, ///< (p, 1/p): H_p
    value,      ///< (p, p): cumulative prime sum
    unit,       ///< (p, 1): pi
    log_ratio,  ///< (p, log p / p): step part of R
};

template <scalar T>
jump_series<T> prime_series(prime_table const& table, T const& x, prime_weight w)
{
    auto const  n  = table.count_at_or_below(detail::checked_floor(table, x, "prime_series"));
    auto const& ps = table.primes();
    std::vector<atom<T>> atoms;
    atoms.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        T const p(static_cast<double>(ps[i]));
        switch (w) {
        case prime_weight::reciprocal: atoms.push_back({p, T(1) / p}); break;
        case prime_weight::value: atoms.push_back({p, p}); break;
        case prime_weight::unit: atoms.push_back({p, T(1)}); break;
        case prime_weight::log_ratio:
            if constexpr (is_exact_v<T>)
                throw mode_error("prime_series: log weights need float mode");
            else
                atoms.push_back({p, std::log(p) / p});
            break;
        }
    }
    return jump_series<T>(std::move(atoms));
}

} // namespace stepsum
