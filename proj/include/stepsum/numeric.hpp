#pragma once

/// \file numeric.hpp
/// Scalar types shared by every module.
///
/// Two numeric modes exist. Float mode runs on `double`; sums that feed an
/// identity are carried in `double_double` (an unevaluated hi + lo pair built
/// from error-free transformations) so that cancellation between a boundary
/// term and an integral does not eat the result. Exact mode runs on GMP
/// rationals (`mpq_class`), where every operation is exact.

#include <gmpxx.h>

#include <cmath>
#include <concepts>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

namespace stepsum {

using rational = mpq_class;

template <typename T>
concept scalar = std::same_as<T, double> || std::same_as<T, rational>;

template <typename T>
inline constexpr bool is_exact_v = std::same_as<T, rational>;

/// Thrown when an argument lies outside an operation's mathematical domain.
struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

/// Thrown when a query exceeds the range covered by a precomputed table.
struct range_error : std::out_of_range {
    using std::out_of_range::out_of_range;
};

/// Thrown when an exact-mode request needs a transcendental value.
struct mode_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// double_double

/// hi + lo with |lo| <= ulp(hi)/2. Only the handful of operations the
/// integrators need are provided.
struct double_double {
    double hi = 0.0;
    double lo = 0.0;

    constexpr double_double() = default;
    constexpr double_double(double v) : hi(v), lo(0.0) {} // NOLINT(google-explicit-constructor)
    constexpr double_double(double h, double l) : hi(h), lo(l) {}

    [[nodiscard]] double value() const { return hi + lo; }

    static double_double two_sum(double a, double b)
    {
        double s  = a + b;
        double bb = s - a;
        double e  = (a - (s - bb)) + (b - bb);
        return {s, e};
    }

    static double_double fast_two_sum(double a, double b)
    {
        double s = a + b;
        return {s, b - (s - a)};
    }

    static double_double two_prod(double a, double b)
    {
        double p = a * b;
        return {p, std::fma(a, b, -p)};
    }

    double_double& operator+=(double_double const& o)
    {
        auto s = two_sum(hi, o.hi);
        auto t = two_sum(lo, o.lo);
        s.lo += t.hi;
        s = fast_two_sum(s.hi, s.lo);
        s.lo += t.lo;
        *this = fast_two_sum(s.hi, s.lo);
        return *this;
    }

    double_double& operator-=(double_double const& o) { return *this += double_double{-o.hi, -o.lo}; }

    double_double operator-() const { return {-hi, -lo}; }

    friend double_double operator+(double_double a, double_double const& b) { return a += b; }
    friend double_double operator-(double_double a, double_double const& b) { return a -= b; }

    friend double_double operator*(double_double const& a, double b)
    {
        auto p = two_prod(a.hi, b);
        p.lo += a.lo * b;
        return fast_two_sum(p.hi, p.lo);
    }
    friend double_double operator*(double b, double_double const& a) { return a * b; }

    friend double_double operator/(double_double const& a, double b)
    {
        double q1 = a.hi / b;
        auto   r  = a - two_prod(q1, b);
        double q2 = r.hi / b;
        return fast_two_sum(q1, q2);
    }

    friend bool operator==(double_double const&, double_double const&) = default;
};

/// Accumulator type used for sums feeding an identity.
template <scalar T>
using wide_t = std::conditional_t<is_exact_v<T>, rational, double_double>;

template <scalar T>
T narrow(wide_t<T> const& w)
{
    if constexpr (is_exact_v<T>)
        return w;
    else
        return w.value();
}

/// a * b carried at accumulator width (exact product for doubles via fma).
template <scalar T>
wide_t<T> wide_product(T const& a, T const& b)
{
    if constexpr (is_exact_v<T>)
        return rational(a * b);
    else
        return double_double::two_prod(a, b);
}

template <scalar T>
double to_double(T const& v)
{
    if constexpr (is_exact_v<T>)
        return v.get_d();
    else
        return v;
}

/// Integer power with a nonnegative or negative integer exponent. Exact for
/// rationals; for doubles the repeated products stay within a few ulps.
template <scalar T>
T ipow(T const& base, long exponent)
{
    if constexpr (is_exact_v<T>) {
        // num and den are coprime, so their powers are too: no gcd needed.
        if (exponent < 0 && base == 0)
            throw domain_error("ipow: zero base with negative exponent");
        unsigned long const e = static_cast<unsigned long>(exponent < 0 ? -exponent : exponent);
        mpz_class           num;
        mpz_class           den;
        mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), e);
        mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), e);
        if (exponent < 0) {
            std::swap(num, den);
            if (den < 0) {
                num = -num;
                den = -den;
            }
        }
        rational r;
        mpz_swap(mpq_numref(r.get_mpq_t()), num.get_mpz_t());
        mpz_swap(mpq_denref(r.get_mpq_t()), den.get_mpz_t());
        return r;
    }
    if (exponent < 0) {
        if (base == 0)
            throw domain_error("ipow: zero base with negative exponent");
        T inv = T(1) / base;
        return ipow<T>(inv, -exponent);
    }
    T result(1);
    T b = base;
    for (unsigned long e = static_cast<unsigned long>(exponent); e != 0; e >>= 1) {
        if (e & 1U)
            result *= b;
        if (e > 1)
            b *= b;
    }
    return result;
}

/// Sums rationals pairwise so operand sizes stay balanced; far cheaper than
/// a left fold when the denominators are pairwise coprime. Consumes `terms`.
inline rational pairwise_sum(std::vector<rational>& terms)
{
    if (terms.empty())
        return rational(0);
    while (terms.size() > 1) {
        std::size_t const half = (terms.size() + 1) / 2;
        for (std::size_t i = 0; i + half < terms.size(); ++i)
            terms[i] += terms[i + half];
        terms.resize(half);
    }
    return terms.front();
}

/// True when `k` is an integer small enough to drive ipow and the factored
/// antiderivative differences.
inline bool is_small_integer(double k)
{
    return std::isfinite(k) && std::floor(k) == k && std::fabs(k) <= 64.0;
}

/// Floor of a scalar as a signed 64-bit integer.
template <scalar T>
std::int64_t floor_to_int(T const& v)
{
    if constexpr (is_exact_v<T>) {
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
        if (!q.fits_slong_p())
            throw range_error("floor_to_int: value does not fit in 64 bits");
        return q.get_si();
    } else {
        if (!std::isfinite(v) || std::fabs(v) > 9.0e18)
            throw range_error("floor_to_int: value does not fit in 64 bits");
        return static_cast<std::int64_t>(std::floor(v));
    }
}

/// Converts a finite double to an exact rational (every double is a dyadic
/// rational, so this is lossless).
inline rational exact_from_double(double v)
{
    if (!std::isfinite(v))
        throw domain_error("exact_from_double: non-finite value");
    rational r(v);
    r.canonicalize();
    return r;
}

template <scalar T>
T from_double(double v)
{
    if constexpr (is_exact_v<T>)
        return exact_from_double(v);
    else
        return v;
}

/// Parses a decimal ("7.5", "-3", "1e3", "2.5e-1") or fraction ("15/2")
/// literal into an exact rational.
inline rational parse_rational(std::string_view text)
{
    std::string s(text);
    if (s.empty())
        throw std::invalid_argument("parse_rational: empty input");
    if (s.find('/') != std::string::npos) {
        rational r;
        if (r.set_str(s, 10) != 0 || r.get_den() == 0)
            throw std::invalid_argument("parse_rational: bad fraction '" + s + "'");
        r.canonicalize();
        return r;
    }
    long exp10 = 0;
    auto epos  = s.find_first_of("eE");
    if (epos != std::string::npos) {
        std::size_t used = 0;
        std::string tail = s.substr(epos + 1);
        try {
            exp10 = std::stol(tail, &used);
        } catch (std::exception const&) {
            throw std::invalid_argument("parse_rational: bad exponent in '" + s + "'");
        }
        if (used != tail.size())
            throw std::invalid_argument("parse_rational: bad exponent in '" + s + "'");
        s.resize(epos);
    }
    bool negative = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        negative = s[0] == '-';
        s.erase(0, 1);
    }
    std::string digits;
    bool        seen_dot = false;
    for (char c : s) {
        if (c == '.') {
            if (seen_dot)
                throw std::invalid_argument("parse_rational: bad number '" + std::string(text) + "'");
            seen_dot = true;
        } else if (c >= '0' && c <= '9') {
            digits.push_back(c);
            if (seen_dot)
                --exp10;
        } else {
            throw std::invalid_argument("parse_rational: bad number '" + std::string(text) + "'");
        }
    }
    if (digits.empty())
        throw std::invalid_argument("parse_rational: bad number '" + std::string(text) + "'");
    mpz_class num(digits, 10);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
    rational r = exp10 < 0 ? rational(num, scale) : rational(num * scale);
    r.canonicalize();
    return negative ? rational(-r) : r;
}

/// "num/den" for rationals (just "num" when the denominator is 1), 17
/// significant digits for doubles.
template <scalar T>
std::string format_scalar(T const& v)
{
    if constexpr (is_exact_v<T>) {
        return v.get_den() == 1 ? v.get_num().get_str() : v.get_str();
    } else {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }
}

} // namespace stepsum
