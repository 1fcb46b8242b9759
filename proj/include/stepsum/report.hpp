#pragma once

/// \file report.hpp
/// Identity tags and the per-sample verification record.

#include <stepsum/numeric.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace stepsum {

enum class identity_id {
    eq6,        ///< pulse count
    eq10,       ///< power sum
    eq13,       ///< reciprocal power sum
    eq15,       ///< harmonic number from integers
    nmax,       ///< floor recovery from H_n
    triangular, ///< arithmetic progression from H_n
    eq17,       ///< pi from H_p
    prime_sum,  ///< sum of primes from H_p
    eq18,       ///< H_p from the prime sum
    hp_from_pi, ///< H_p from pi
    eq20,       ///< pi from li and R
    eq24,       ///< Mertens' formula for H_p
    eq25_int,   ///< integrated derivative of Mertens' formula
};

inline constexpr std::array<std::pair<identity_id, std::string_view>, 13> identity_names = {{
    {identity_id::eq6, "EQ6"},
    {identity_id::eq10, "EQ10"},
    {identity_id::eq13, "EQ13"},
    {identity_id::eq15, "EQ15"},
    {identity_id::nmax, "NMAX"},
    {identity_id::triangular, "TRIANGULAR"},
    {identity_id::eq17, "EQ17"},
    {identity_id::prime_sum, "PRIME_SUM"},
    {identity_id::eq18, "EQ18"},
    {identity_id::hp_from_pi, "HP_FROM_PI"},
    {identity_id::eq20, "EQ20"},
    {identity_id::eq24, "EQ24"},
    {identity_id::eq25_int, "EQ25_INT"},
}};

inline std::string_view to_string(identity_id id)
{
    for (auto const& [k, name] : identity_names)
        if (k == id)
            return name;
    return "?";
}

inline std::optional<identity_id> parse_identity(std::string_view name)
{
    for (auto const& [k, n] : identity_names)
        if (n == name)
            return k;
    return std::nullopt;
}

/// Whether the identity's oracle needs a prime table.
inline bool needs_primes(identity_id id)
{
    switch (id) {
    case identity_id::eq15:
    case identity_id::nmax:
    case identity_id::triangular: return false;
    default: return true;
    }
}

/// Whether the identity can be evaluated in exact rational mode.
inline bool exact_capable(identity_id id)
{
    switch (id) {
    case identity_id::eq20:
    case identity_id::eq24:
    case identity_id::eq25_int: return false;
    default: return true;
    }
}

/// lhs is the identity side, rhs the direct oracle.
/// abs_err = |lhs - rhs|, rel_err = abs_err / max(|rhs|, 1),
/// pass iff abs_err <= tol or rel_err <= tol.
struct verification_report {
    identity_id           identity = identity_id::eq6;
    double                x        = 0.0;
    std::optional<double> k;
    double                lhs     = 0.0;
    double                rhs     = 0.0;
    double                abs_err = 0.0;
    double                rel_err = 0.0;
    double                tol     = 0.0;
    bool                  pass    = false;
    std::string           error; ///< set when the sample could not be evaluated

    friend bool operator==(verification_report const& a, verification_report const& b)
    {
        auto same = [](double u, double v) { return u == v || (std::isnan(u) && std::isnan(v)); };
        return a.identity == b.identity && same(a.x, b.x) && a.k == b.k && same(a.lhs, b.lhs) && same(a.rhs, b.rhs)
               && same(a.abs_err, b.abs_err) && same(a.rel_err, b.rel_err) && a.tol == b.tol && a.pass == b.pass
               && a.error == b.error;
    }
};

inline verification_report make_report(identity_id id, double x, std::optional<double> k, double lhs, double rhs, double tol)
{
    verification_report r;
    r.identity = id;
    r.x        = x;
    r.k        = k;
    r.lhs      = lhs;
    r.rhs      = rhs;
    r.abs_err = std::fabs(lhs - rhs);
    r.rel_err = r.abs_err / std::max(std::fabs(rhs), 1.0);
    r.tol     = tol;
    r.pass    = r.abs_err <= tol || r.rel_err <= tol;
    return r;
}

/// Exact comparison: the pass decision uses the rational difference, the
/// double fields are for display.
inline verification_report make_report_exact(identity_id id, double x, std::optional<double> k, rational const& lhs,
                                             rational const& rhs, double tol)
{
    rational const diff  = abs(rational(lhs - rhs));
    rational const scale = std::max(rational(abs(rhs)), rational(1));
    rational const t     = exact_from_double(tol);
    verification_report r;
    r.identity = id;
    r.x        = x;
    r.k        = k;
    r.lhs      = lhs.get_d();
    r.rhs      = rhs.get_d();
    r.abs_err = diff.get_d();
    r.rel_err = rational(diff / scale).get_d();
    r.tol     = tol;
    r.pass    = diff <= t || diff <= t * scale;
    return r;
}

inline verification_report make_error_report(identity_id id, double x, std::optional<double> k, double tol, std::string what)
{
    double const nan = std::nan("");
    verification_report r{id, x, k, nan, nan, nan, nan, tol, false, std::move(what)};
    return r;
}

} // namespace stepsum
