#pragma once

/// \file kernel.hpp
/// Catalog of integrand kernels with known antiderivatives.

#include <stepsum/numeric.hpp>
#include <stepsum/quadrature.hpp>

#include <cmath>
#include <string>

namespace stepsum {

enum class kernel_tag {
    power,        ///< y^k
    inv_y_log_sq, ///< 1 / (y log^2 y), antiderivative -1/log y
    inv_y_log,    ///< 1 / (y log y), antiderivative log log y
    inv_log,      ///< 1 / log y, no elementary antiderivative
    y_over_log,   ///< y / log y, no elementary antiderivative
};

struct kernel_id {
    kernel_tag tag      = kernel_tag::power;
    double     exponent = 0.0; ///< k, meaningful for kernel_tag::power only

    static constexpr kernel_id power(double k) { return {kernel_tag::power, k}; }
    static constexpr kernel_id inv_y_log_sq() { return {kernel_tag::inv_y_log_sq, 0.0}; }
    static constexpr kernel_id inv_y_log() { return {kernel_tag::inv_y_log, 0.0}; }
    static constexpr kernel_id inv_log() { return {kernel_tag::inv_log, 0.0}; }
    static constexpr kernel_id y_over_log() { return {kernel_tag::y_over_log, 0.0}; }

    /// Kernels involving log y need y > 1.
    [[nodiscard]] constexpr bool needs_log() const { return tag != kernel_tag::power; }

    /// Whether an elementary antiderivative exists.
    [[nodiscard]] constexpr bool has_closed_form() const
    {
        return tag == kernel_tag::power || tag == kernel_tag::inv_y_log_sq || tag == kernel_tag::inv_y_log;
    }

    /// Whether the kernel can be evaluated and integrated in exact mode.
    [[nodiscard]] bool exact_capable() const { return tag == kernel_tag::power && is_small_integer(exponent) && exponent != -1.0; }

    friend bool operator==(kernel_id const&, kernel_id const&) = default;
};

inline std::string to_string(kernel_id const& k)
{
    switch (k.tag) {
    case kernel_tag::power: return "y^" + format_scalar(k.exponent);
    case kernel_tag::inv_y_log_sq: return "1/(y log^2 y)";
    case kernel_tag::inv_y_log: return "1/(y log y)";
    case kernel_tag::inv_log: return "1/log y";
    case kernel_tag::y_over_log: return "y/log y";
    }
    return "?";
}

namespace detail {

inline void require_exact_capable(kernel_id const& k)
{
    if (!k.exact_capable())
        throw mode_error("kernel " + to_string(k) + " is not available in exact mode");
}

/// hi^m - lo^m for integer m >= 1, factored as (hi - lo) * sum hi^j lo^(m-1-j)
/// so nearby arguments do not cancel.
template <scalar T>
T power_difference(T const& lo, T const& hi, long m)
{
    T sum(0);
    T hp(1);
    for (long j = 0; j < m; ++j) {
        sum += hp * ipow<T>(lo, m - 1 - j);
        hp *= hi;
    }
    return (hi - lo) * sum;
}

} // namespace detail

/// kernel(y). Log kernels require y > 1.
template <scalar T>
T kernel_value(kernel_id const& k, T const& y)
{
    if constexpr (is_exact_v<T>) {
        detail::require_exact_capable(k);
        return ipow<T>(y, static_cast<long>(k.exponent));
    } else {
        if (k.needs_log() && !(y > 1.0))
            throw domain_error("kernel " + to_string(k) + " undefined at y <= 1");
        switch (k.tag) {
        case kernel_tag::power:
            return is_small_integer(k.exponent) ? ipow<double>(y, static_cast<long>(k.exponent)) : std::pow(y, k.exponent);
        case kernel_tag::inv_y_log_sq: {
            double l = std::log(y);
            return 1.0 / (y * l * l);
        }
        case kernel_tag::inv_y_log: return 1.0 / (y * std::log(y));
        case kernel_tag::inv_log: return 1.0 / std::log(y);
        case kernel_tag::y_over_log: return y / std::log(y);
        }
        return 0.0;
    }
}

/// Integral of the kernel over [lo, hi] for the closed-form kernels, written
/// in difference form so adjacent breakpoints keep full relative accuracy.
/// Requires 0 < lo <= hi (and lo > 1 for log kernels).
template <scalar T>
T antiderivative_difference(kernel_id const& k, T const& lo, T const& hi)
{
    if (lo == hi)
        return T(0);
    if constexpr (is_exact_v<T>) {
        detail::require_exact_capable(k);
        // No cancellation to guard against in exact arithmetic.
        long const m = static_cast<long>(k.exponent) + 1; // m != 0
        return (ipow<T>(hi, m) - ipow<T>(lo, m)) / T(m);
    } else {
        double const d = hi - lo;
        switch (k.tag) {
        case kernel_tag::power: {
            double const kk = k.exponent;
            if (kk == -1.0)
                return std::log1p(d / lo);
            if (is_small_integer(kk)) {
                long const m = static_cast<long>(kk) + 1;
                if (m > 0)
                    return detail::power_difference<double>(lo, hi, m) / static_cast<double>(m);
                long const n = -m;
                return detail::power_difference<double>(lo, hi, n) / (static_cast<double>(n) * ipow<double>(hi, n) * ipow<double>(lo, n));
            }
            double const m = kk + 1.0;
            return std::pow(lo, m) * std::expm1(m * std::log1p(d / lo)) / m;
        }
        case kernel_tag::inv_y_log_sq: {
            // 1/log lo - 1/log hi = (log hi - log lo) / (log lo log hi)
            double const ll = std::log(lo);
            double const lh = std::log(hi);
            return std::log1p(d / lo) / (ll * lh);
        }
        case kernel_tag::inv_y_log: {
            // log log hi - log log lo = log1p((log hi - log lo) / log lo)
            return std::log1p(std::log1p(d / lo) / std::log(lo));
        }
        case kernel_tag::inv_log:
        case kernel_tag::y_over_log: break;
        }
        throw domain_error("kernel " + to_string(k) + " has no closed-form antiderivative");
    }
}

/// Integral of the kernel over [lo, hi]: closed form where the catalog has
/// one, otherwise adaptive quadrature.
inline double kernel_integral(kernel_id const& k, double lo, double hi, quadrature_options const& q = {})
{
    if (k.needs_log() && !(lo > 1.0))
        throw domain_error("kernel " + to_string(k) + " requires a lower limit > 1");
    if (k.has_closed_form())
        return antiderivative_difference<double>(k, lo, hi);
    return integrate_adaptive([&](double y) { return kernel_value<double>(k, y); }, lo, hi, q).value;
}

} // namespace stepsum
