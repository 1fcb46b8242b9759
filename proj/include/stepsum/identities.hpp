#pragma once

/// \file identities.hpp
/// Summatory identities evaluated through step-function integration.
///
/// Every routine here reaches its answer by integrating a kernel against a
/// summatory step function (partial summation), never by summing the target
/// terms directly. The direct sums live in primes.hpp and in the tests.

#include <stepsum/jump_series.hpp>
#include <stepsum/kernel.hpp>
#include <stepsum/numeric.hpp>
#include <stepsum/primes.hpp>

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace stepsum {

namespace detail {

/// x^m at accumulator width times a wide value; m may be negative.
template <scalar T>
wide_t<T> scale_by_power(wide_t<T> v, T const& x, double m)
{
    if constexpr (is_exact_v<T>) {
        if (!is_small_integer(m))
            throw mode_error("exact mode needs an integer exponent");
        return v * ipow<T>(x, static_cast<long>(m));
    } else {
        if (!is_small_integer(m))
            return v * std::pow(x, m);
        long const e = static_cast<long>(m);
        for (long i = 0; i < e; ++i)
            v = v * x;
        for (long i = 0; i > e; --i)
            v = v / x;
        return v;
    }
}

template <scalar T>
void require_at_least(T const& x, T const& bound, char const* who)
{
    if constexpr (!is_exact_v<T>) {
        if (!std::isfinite(x))
            throw domain_error(std::string(who) + ": non-finite x");
    }
    if (x < bound)
        throw domain_error(std::string(who) + ": x=" + format_scalar(x) + " below " + format_scalar(bound));
}

template <scalar T>
void require_nonempty(jump_series<T> const& s, char const* who)
{
    if (s.empty())
        throw domain_error(std::string(who) + ": empty series");
}

template <scalar T>
jump_series<T> harmonic_series(T const& x)
{
    std::int64_t const   n = floor_to_int(x);
    std::vector<atom<T>> atoms;
    atoms.reserve(n > 0 ? static_cast<std::size_t>(n) : 0);
    for (std::int64_t i = 1; i <= n; ++i) {
        T const v(static_cast<double>(i));
        atoms.push_back({v, T(1) / v});
    }
    return jump_series<T>(std::move(atoms));
}

} // namespace detail

/// Pulse count N = x F(x) - integral_{q_min}^x F(y) dy for a series with
/// atoms (q, 1/q); the count of atoms <= x.
template <scalar T>
T count_via_eq6(jump_series<T> const& series, T const& x)
{
    detail::require_nonempty(series, "count_via_eq6");
    T const& q_min = series.domain_min();
    detail::require_at_least(x, q_min, "count_via_eq6");
    wide_t<T> boundary = series.eval_wide(x) * x;
    wide_t<T> integral = integrate_kernel_times_step_wide(series, kernel_id::power(0), q_min, x);
    return narrow<T>(boundary - integral);
}

/// Power sum: x^(k+1) F(x) - (k+1) integral_{q_min}^x y^k F(y) dy over a series
/// with atoms (q, 1/q) gives the sum of q^k over atoms <= x.
template <scalar T>
T power_sum_via_eq10(jump_series<T> const& series, T const& x, double k)
{
    detail::require_nonempty(series, "power_sum_via_eq10");
    if (k == -1.0)
        throw domain_error("power_sum_via_eq10: k = -1 makes the boundary factor vanish");
    T const& q_min = series.domain_min();
    detail::require_at_least(x, q_min, "power_sum_via_eq10");
    wide_t<T> boundary = detail::scale_by_power<T>(series.eval_wide(x), x, k + 1.0);
    wide_t<T> integral = integrate_kernel_times_step_wide(series, kernel_id::power(k), q_min, x);
    return narrow<T>(boundary - integral * from_double<T>(k + 1.0));
}

/// Reciprocal power sum over a g-series (atoms (q, q)):
/// G(x)/x^(k+1) + (k+1) integral_{q_min}^x G(y)/y^(k+2) dy = sum of q^-k.
template <scalar T>
T reciprocal_power_sum_via_eq13(jump_series<T> const& g_series, T const& x, double k)
{
    detail::require_nonempty(g_series, "reciprocal_power_sum_via_eq13");
    if (!(k >= 0.0))
        throw domain_error("reciprocal_power_sum_via_eq13: k must be >= 0");
    T const& q_min = g_series.domain_min();
    detail::require_at_least(x, q_min, "reciprocal_power_sum_via_eq13");
    wide_t<T> boundary = detail::scale_by_power<T>(g_series.eval_wide(x), x, -(k + 1.0));
    wide_t<T> integral = integrate_kernel_times_step_wide(g_series, kernel_id::power(-(k + 2.0)), q_min, x);
    return narrow<T>(boundary + integral * from_double<T>(k + 1.0));
}

// ---------------------------------------------------------------------------
// Natural numbers

namespace detail {

/// (n + n^2) / 2, the cumulative sum of 1..n.
template <scalar T>
T triangular(std::int64_t n)
{
    T const v(static_cast<double>(n));
    return (v + v * v) / T(2);
}

} // namespace detail

/// 1 + 1/2 + ... + 1/n by plain left-to-right summation.
inline double harmonic_direct_naive(std::int64_t n)
{
    double sum = 0.0;
    for (std::int64_t i = 1; i <= n; ++i)
        sum += 1.0 / static_cast<double>(i);
    return sum;
}

/// 1 + 1/2 + ... + 1/n: exact in rational mode, Kahan-compensated in float
/// mode (the reference for float-mode harmonic checks).
template <scalar T>
T harmonic_direct(std::int64_t n)
{
    if constexpr (is_exact_v<T>) {
        rational acc(0);
        for (std::int64_t i = 1; i <= n; ++i)
            acc += rational(1, static_cast<unsigned long>(i));
        return acc;
    } else {
        double sum = 0.0;
        double c   = 0.0;
        for (std::int64_t i = 1; i <= n; ++i) {
            double const y = 1.0 / static_cast<double>(i) - c;
            double const t = sum + y;
            c              = (t - sum) - y;
            sum            = t;
        }
        return sum;
    }
}

/// Harmonic number via integers only:
/// H(x) = (N + N^2)/(2 x^2) + integral_1^x (floor(y) + floor(y)^2)/y^3 dy,
/// N = floor(x), integrated in closed form per unit segment.
template <scalar T>
T harmonic_via_eq15(T const& x)
{
    detail::require_at_least(x, T(1), "harmonic_via_eq15");
    std::int64_t const n_max  = floor_to_int(x);
    kernel_id const    kernel = kernel_id::power(-3);
    wide_t<T>          integral{};
    for (std::int64_t n = 1; n < n_max; ++n) {
        T const lo(static_cast<double>(n));
        T const hi(static_cast<double>(n + 1));
        integral += wide_product<T>(detail::triangular<T>(n), antiderivative_difference<T>(kernel, lo, hi));
    }
    T const top(static_cast<double>(n_max));
    integral += wide_product<T>(detail::triangular<T>(n_max), antiderivative_difference<T>(kernel, top, x));
    // (N + N^2) / 2 is G(x) of the naturals; the boundary term is G(x) x^-2.
    wide_t<T> boundary = detail::scale_by_power<T>(wide_t<T>(detail::triangular<T>(n_max)), x, -2.0);
    return narrow<T>(boundary + integral * T(2));
}

/// harmonic_via_eq15 at x = 1, 2, ..., n_max, sharing one running integral.
template <scalar T>
std::vector<T> harmonic_via_eq15_prefix(std::int64_t n_max)
{
    if (n_max < 1)
        throw domain_error("harmonic_via_eq15_prefix: n_max must be >= 1");
    kernel_id const kernel = kernel_id::power(-3);
    std::vector<T>  out;
    out.reserve(static_cast<std::size_t>(n_max));
    wide_t<T> integral{};
    for (std::int64_t n = 1; n <= n_max; ++n) {
        if (n > 1) {
            T const lo(static_cast<double>(n - 1));
            T const hi(static_cast<double>(n));
            integral += wide_product<T>(detail::triangular<T>(n - 1), antiderivative_difference<T>(kernel, lo, hi));
        }
        T const   x(static_cast<double>(n));
        wide_t<T> boundary = detail::scale_by_power<T>(wide_t<T>(detail::triangular<T>(n)), x, -2.0);
        out.push_back(narrow<T>(boundary + integral * T(2)));
    }
    return out;
}

/// x H_n(x) - integral_1^x H_n(y) dy = floor(x).
template <scalar T>
T nmax_via_identity(T const& x)
{
    detail::require_at_least(x, T(1), "nmax_via_identity");
    return count_via_eq6(detail::harmonic_series(x), x);
}

/// x^2 H_n(x) - 2 integral_1^x y H_n(y) dy = (floor(x) + floor(x)^2) / 2.
template <scalar T>
T triangular_via_identity(T const& x)
{
    detail::require_at_least(x, T(1), "triangular_via_identity");
    return power_sum_via_eq10(detail::harmonic_series(x), x, 1.0);
}

// ---------------------------------------------------------------------------
// Primes

/// pi(x) = x H_p(x) - integral_2^x H_p(y) dy.
template <scalar T>
T pi_via_eq17(prime_table const& table, T const& x)
{
    detail::require_at_least(x, T(2), "pi_via_eq17");
    return count_via_eq6(prime_series(table, x, prime_weight::reciprocal), x);
}

/// Sum of primes <= x as x^2 H_p(x) - 2 integral_2^x y H_p(y) dy.
template <scalar T>
T prime_sum_via_identity(prime_table const& table, T const& x)
{
    detail::require_at_least(x, T(2), "prime_sum_via_identity");
    return power_sum_via_eq10(prime_series(table, x, prime_weight::reciprocal), x, 1.0);
}

/// H_p(x) from the cumulative prime sum S(x):
/// S(x)/x^2 + 2 integral_2^x S(y)/y^3 dy.
template <scalar T>
T hp_via_eq18(prime_table const& table, T const& x)
{
    detail::require_at_least(x, T(2), "hp_via_eq18");
    return reciprocal_power_sum_via_eq13(prime_series(table, x, prime_weight::value), x, 1.0);
}

/// H_p(x) = pi(x)/x + integral_2^x pi(y)/y^2 dy.
template <scalar T>
T hp_from_pi(prime_table const& table, T const& x)
{
    detail::require_at_least(x, T(2), "hp_from_pi");
    auto const pi_series = prime_series(table, x, prime_weight::unit);
    wide_t<T>  boundary  = detail::scale_by_power<T>(pi_series.eval_wide(x), x, -1.0);
    wide_t<T>  integral  = integrate_kernel_times_step_wide(pi_series, kernel_id::power(-2), T(2), x);
    return narrow<T>(boundary + integral);
}

// ---------------------------------------------------------------------------

struct integer_recovery {
    std::int64_t value    = 0;
    double       residual = 0.0; ///< |raw - value|
    bool         ok       = false;
};

/// Rounds half-to-even and accepts when the residual is within `tol`.
inline integer_recovery recover_integer(double raw, double tol = 1e-9)
{
    integer_recovery r;
    if (!std::isfinite(raw))
        return r;
    double const rounded = std::nearbyint(raw); // default rounding mode is to-nearest-even
    r.value    = static_cast<std::int64_t>(rounded);
    r.residual = std::fabs(raw - rounded);
    r.ok       = r.residual <= tol;
    return r;
}

} // namespace stepsum
