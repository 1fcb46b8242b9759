#pragma once

/// \file verify.hpp
/// Identity-versus-oracle sweeps producing verification_report lists.

#include <stepsum/analytic.hpp>
#include <stepsum/identities.hpp>
#include <stepsum/jump_series.hpp>
#include <stepsum/numeric.hpp>
#include <stepsum/primes.hpp>
#include <stepsum/report.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace stepsum {

/// Sweep asked for something it cannot run (missing table, mode mismatch).
struct config_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class numeric_mode { floating, exact };

struct sweep_options {
    numeric_mode mode = numeric_mode::floating;
    unsigned     jobs = 1;
};

namespace detail {

/// Runs task(i) for i in [0, n) on up to `jobs` threads; results are
/// concatenated in index order regardless of scheduling.
template <typename Task>
std::vector<verification_report> ordered_parallel(std::size_t n, unsigned jobs, Task const& task)
{
    std::vector<std::vector<verification_report>> slots(n);
    std::atomic<std::size_t>                       next{0};
    std::exception_ptr                             failure;
    std::atomic<bool>                              failed{false};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                slots[i] = task(i);
            } catch (...) {
                if (!failed.exchange(true))
                    failure = std::current_exception();
                return;
            }
        }
    };
    unsigned const threads = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }
    if (failure)
        std::rethrow_exception(failure);
    std::vector<verification_report> out;
    for (auto& s : slots)
        out.insert(out.end(), std::make_move_iterator(s.begin()), std::make_move_iterator(s.end()));
    return out;
}

template <scalar T>
T from_int128(__int128 v)
{
    bool const          neg = v < 0;
    unsigned __int128   u   = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
    auto const          hi  = static_cast<std::uint64_t>(u >> 64);
    auto const          lo  = static_cast<std::uint64_t>(u);
    if constexpr (is_exact_v<T>) {
        mpz_class z(static_cast<unsigned long>(hi));
        z <<= 64;
        z += mpz_class(static_cast<unsigned long>(lo));
        return rational(neg ? mpz_class(-z) : z);
    } else {
        double const d = std::ldexp(static_cast<double>(hi), 64) + static_cast<double>(lo);
        return neg ? -d : d;
    }
}

/// Direct sum of q^e over atoms with location <= x (brute force).
template <scalar T>
T brute_power_sum(std::span<atom<T> const> atoms, T const& x, double e)
{
    wide_t<T> acc{};
    if constexpr (is_exact_v<T>) {
        std::vector<rational> terms;
        for (auto const& a : atoms)
            if (a.location <= x)
                terms.push_back(ipow<T>(a.location, static_cast<long>(e)));
        return pairwise_sum(terms);
    }
    for (auto const& a : atoms) {
        if (a.location > x)
            continue;
        if constexpr (is_exact_v<T>) {
        } else {
            double const term = is_small_integer(e) ? ipow<double>(a.location, static_cast<long>(e)) : std::pow(a.location, e);
            acc += double_double(term);
        }
    }
    return narrow<T>(acc);
}

template <scalar T>
verification_report finish(identity_id id, double x, std::optional<double> k, T const& lhs, T const& rhs, double tol)
{
    if constexpr (is_exact_v<T>)
        return make_report_exact(id, x, k, lhs, rhs, tol);
    else
        return make_report(id, x, k, lhs, rhs, tol);
}

template <scalar T>
verification_report evaluate_sample(identity_id id, prime_table const* table, double x_in, std::optional<double> k, double tol)
{
    T const x = from_double<T>(x_in);
    auto tbl = [table]() -> prime_table const& { return *table; };
    switch (id) {
    case identity_id::eq6: {
        auto const s = prime_series(tbl(), x, prime_weight::reciprocal);
        return finish<T>(id, x_in, k, count_via_eq6(s, x), T(static_cast<double>(pi_direct(tbl(), x))), tol);
    }
    case identity_id::eq10: {
        double const kk = k.value_or(1.0);
        auto const   s  = prime_series(tbl(), x, prime_weight::reciprocal);
        T const      lhs = power_sum_via_eq10(s, x, kk);
        if (is_small_integer(kk) && kk >= 0 && kk <= 4)
            return finish<T>(id, x_in, kk, lhs, from_int128<T>(prime_power_sum_direct(tbl(), x, static_cast<int>(kk))), tol);
        auto const direct = prime_series(tbl(), x, prime_weight::unit);
        return finish<T>(id, x_in, kk, lhs, brute_power_sum<T>(direct.atoms(), x, kk), tol);
    }
    case identity_id::eq13: {
        double const kk = k.value_or(1.0);
        auto const   s  = prime_series(tbl(), x, prime_weight::value);
        return finish<T>(id, x_in, kk, reciprocal_power_sum_via_eq13(s, x, kk), brute_power_sum<T>(s.atoms(), x, -kk), tol);
    }
    case identity_id::eq15:
        return finish<T>(id, x_in, k, harmonic_via_eq15(x), harmonic_direct<T>(floor_to_int(x)), tol);
    case identity_id::nmax:
        return finish<T>(id, x_in, k, nmax_via_identity(x), T(static_cast<double>(floor_to_int(x))), tol);
    case identity_id::triangular:
        return finish<T>(id, x_in, k, triangular_via_identity(x), detail::triangular<T>(floor_to_int(x)), tol);
    case identity_id::eq17:
        return finish<T>(id, x_in, k, pi_via_eq17(tbl(), x), T(static_cast<double>(pi_direct(tbl(), x))), tol);
    case identity_id::prime_sum:
        return finish<T>(id, x_in, k, prime_sum_via_identity(tbl(), x), from_int128<T>(prime_power_sum_direct(tbl(), x, 1)), tol);
    case identity_id::eq18: return finish<T>(id, x_in, k, hp_via_eq18(tbl(), x), hp_direct(tbl(), x), tol);
    case identity_id::hp_from_pi: return finish<T>(id, x_in, k, hp_from_pi(tbl(), x), hp_direct(tbl(), x), tol);
    case identity_id::eq20:
    case identity_id::eq24:
    case identity_id::eq25_int:
        if constexpr (is_exact_v<T>) {
            throw mode_error(std::string(to_string(id)) + " needs float mode");
        } else {
            if (id == identity_id::eq20)
                return finish<double>(id, x_in, k, pi_via_eq20(tbl(), x), static_cast<double>(pi_direct(tbl(), x)), tol);
            if (id == identity_id::eq24)
                return finish<double>(id, x_in, k, hp_via_mertens_eq24(tbl(), x), hp_direct(tbl(), x), tol);
            auto r = check_eq25_integrated(tbl(), 2.0, x, tol);
            r.k    = k;
            return r;
        }
    }
    throw config_error("unknown identity");
}

} // namespace detail

/// One report per sample, in sample order. Samples that cannot be evaluated
/// (out of range, below the domain) yield an error report and the sweep
/// continues. Throws config_error when a needed table is missing or the
/// identity has no exact form and exact mode was requested.
inline std::vector<verification_report> run_sweep(identity_id id, prime_table const* table, std::span<double const> x_samples,
                                                   std::optional<double> k, double tol, sweep_options const& opts = {})
{
    if (needs_primes(id) && table == nullptr)
        throw config_error(std::string(to_string(id)) + " needs a prime table");
    if (opts.mode == numeric_mode::exact && !exact_capable(id))
        throw config_error(std::string(to_string(id)) + " has no exact mode");
    if (opts.mode == numeric_mode::exact && k && !is_small_integer(*k))
        throw config_error("exact mode needs an integer k");

    return detail::ordered_parallel(x_samples.size(), opts.jobs, [&](std::size_t i) {
        double const x = x_samples[i];
        try {
            if (opts.mode == numeric_mode::exact)
                return std::vector{detail::evaluate_sample<rational>(id, table, x, k, tol)};
            return std::vector{detail::evaluate_sample<double>(id, table, x, k, tol)};
        } catch (std::exception const& e) {
            return std::vector{make_error_report(id, x, k, tol, e.what())};
        }
    });
}

// ---------------------------------------------------------------------------
// Random sets

struct random_set {
    std::vector<double> elements; ///< ascending, pairwise gap >= min_gap
    double              probe = 0.0;
};

inline constexpr double random_set_lower   = 1.0;
inline constexpr double random_set_upper   = 1000.0;
inline constexpr double random_set_min_gap = 1e-6;
/// Exact-mode sets are snapped to multiples of this. Full 53-bit mantissas
/// make the rational denominators of a 200-element reciprocal cube sum
/// tens of thousands of bits; a coarse dyadic grid keeps them small.
inline constexpr double exact_grid = 1.0 / 1024.0;

/// Draws the set for one trial. Depends only on (seed, trial, grid). With
/// grid > 0 every element (and the probe) is a multiple of grid.
inline random_set draw_random_set(std::uint64_t seed, std::uint64_t trial, std::size_t max_size, double grid = 0.0)
{
    if (grid > 0.0 && grid < random_set_min_gap)
        throw config_error("draw_random_set: grid finer than the minimum gap");
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
    std::mt19937_64                        rng(seq);
    std::uniform_int_distribution<std::size_t> size_dist(1, max_size);
    // open interval (1, 1000)
    std::uniform_real_distribution<double> elem_dist(std::nextafter(random_set_lower, random_set_upper), random_set_upper);

    std::size_t const   size = size_dist(rng);
    random_set          out;
    std::vector<double> v;
    v.reserve(size);
    auto snap = [grid](double e) { return grid > 0.0 ? std::round(e / grid) * grid : e; };
    while (v.size() < size) {
        double const e = snap(elem_dist(rng));
        if (!(e > random_set_lower) || !(e < random_set_upper))
            continue;
        auto         it = std::lower_bound(v.begin(), v.end(), e);
        bool const   near_next = it != v.end() && *it - e < random_set_min_gap;
        bool const   near_prev = it != v.begin() && e - *std::prev(it) < random_set_min_gap;
        if (!near_next && !near_prev)
            v.insert(it, e);
    }
    std::uniform_real_distribution<double> probe_dist(v.front(), random_set_upper);
    out.probe    = std::max(v.front(), snap(probe_dist(rng)));
    out.elements = std::move(v);
    return out;
}

namespace detail {

template <scalar T>
std::vector<verification_report> random_set_trial(random_set const& set, std::span<double const> k_set, double tol)
{
    std::vector<atom<T>> h_atoms;
    std::vector<atom<T>> g_atoms;
    for (double e : set.elements) {
        T const q = from_double<T>(e);
        h_atoms.push_back({q, T(1) / q});
        g_atoms.push_back({q, q});
    }
    jump_series<T> const h(std::move(h_atoms));
    jump_series<T> const g(std::move(g_atoms));

    // Probe at the largest element (inclusive boundary) and at a random x.
    std::vector<verification_report> out;
    for (double xd : {set.elements.back(), set.probe}) {
        T const x = from_double<T>(xd);
        out.push_back(finish<T>(identity_id::eq6, xd, std::nullopt, count_via_eq6(h, x),
                                T(static_cast<double>(h.count_at_or_below(x))), tol));
        for (double k : k_set)
            out.push_back(finish<T>(identity_id::eq10, xd, k, power_sum_via_eq10(h, x, k), brute_power_sum<T>(g.atoms(), x, k), tol));
        for (double k : k_set)
            out.push_back(finish<T>(identity_id::eq13, xd, k, reciprocal_power_sum_via_eq13(g, x, k),
                                    brute_power_sum<T>(g.atoms(), x, -k), tol));
    }
    return out;
}

} // namespace detail

/// For each trial, draws a set of distinct reals in (1, 1000) and checks the
/// pulse-count, power-sum and reciprocal-power-sum identities against brute
/// force, for every k in k_set. Reproducible from the seed.
inline std::vector<verification_report> random_set_sweep(std::uint64_t seed, std::size_t trials, std::size_t max_size,
                                                         std::span<double const> k_set, double tol,
                                                         sweep_options const& opts = {})
{
    if (trials < 1)
        throw config_error("random_set_sweep: trials must be >= 1");
    if (max_size < 1)
        throw config_error("random_set_sweep: max_size must be >= 1");
    for (double k : k_set) {
        if (!(k >= 0.0) || k == -1.0)
            throw config_error("random_set_sweep: k must be >= 0");
        if (opts.mode == numeric_mode::exact && !is_small_integer(k))
            throw config_error("random_set_sweep: exact mode needs integer k");
    }
    return detail::ordered_parallel(trials, opts.jobs, [&](std::size_t t) {
        if (opts.mode == numeric_mode::exact)
            return detail::random_set_trial<rational>(draw_random_set(seed, t, max_size, exact_grid), k_set, tol);
        return detail::random_set_trial<double>(draw_random_set(seed, t, max_size), k_set, tol);
    });
}

/// Checks the integrated prime-reciprocal identity on `count` random
/// subintervals [a, b] of [lo, hi], endpoints uniform and independent per
/// interval. Each report carries x = b. Reproducible from the seed.
inline std::vector<verification_report> eq25_interval_sweep(prime_table const& table, std::uint64_t seed, std::size_t count,
                                                            double lo, double hi, double tol, sweep_options const& opts = {})
{
    if (!(lo >= 2.0) || !(lo <= hi) || !std::isfinite(hi))
        throw config_error("eq25_interval_sweep: need 2 <= lo <= hi");
    if (hi > static_cast<double>(table.limit()))
        throw config_error("eq25_interval_sweep: hi exceeds sieve limit");
    if (opts.mode == numeric_mode::exact)
        throw config_error("eq25_interval_sweep: float mode only");
    return detail::ordered_parallel(count, opts.jobs, [&](std::size_t i) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(std::uint64_t(i) >> 32)};
        std::mt19937_64                        rng(seq);
        std::uniform_real_distribution<double> dist(lo, hi);
        double a = dist(rng);
        double b = dist(rng);
        if (b < a)
            std::swap(a, b);
        try {
            return std::vector{check_eq25_integrated(table, a, b, tol)};
        } catch (std::exception const& e) {
            return std::vector{make_error_report(identity_id::eq25_int, b, std::nullopt, tol, e.what())};
        }
    });
}

} // namespace stepsum
