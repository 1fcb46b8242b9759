#pragma once

/// \file analytic.hpp
/// The logarithmic integral offset at 2, the remainder R(x) of
/// sum_{p<=x} log p / p against log x, and the two identities built on R:
/// pi(x) through li and dR, and Mertens' formula for H_p(x).
///
/// All of this runs in float mode.

#include <stepsum/jump_series.hpp>
#include <stepsum/kernel.hpp>
#include <stepsum/numeric.hpp>
#include <stepsum/primes.hpp>
#include <stepsum/quadrature.hpp>
#include <stepsum/report.hpp>

#include <cmath>
#include <string>

namespace stepsum {

struct li_value {
    double x             = 2.0;
    double value         = 0.0; ///< integral_2^x dt / log t
    double abs_err_bound = 0.0;
};

/// integral_2^x dt / log t. The principal-value li is never formed, so the
/// singularity at t = 1 is out of reach.
inline li_value li2(double x, quadrature_options const& q = {})
{
    if (!(x >= 2.0) || !std::isfinite(x))
        throw domain_error("li2: x must be finite and >= 2");
    auto const r = integrate_adaptive([](double t) { return 1.0 / std::log(t); }, 2.0, x, q);
    return {x, r.value, r.abs_err};
}

/// integral_a^b dt / log t for 1 < a <= b.
inline li_value log_integral_between(double a, double b, quadrature_options const& q = {})
{
    if (!(a > 1.0) || !(a <= b) || !std::isfinite(b))
        throw domain_error("log_integral_between: need 1 < a <= b");
    auto const r = integrate_adaptive([](double t) { return 1.0 / std::log(t); }, a, b, q);
    return {b, r.value, r.abs_err};
}

/// R as a step (atoms (p, log p / p) for p <= x) plus the smooth -log term.
inline step_plus_smooth<double> r_measure(prime_table const& table, double x)
{
    if (!(x >= 2.0))
        throw domain_error("r_measure: x must be >= 2");
    return {prime_series(table, x, prime_weight::log_ratio), smooth_term::neg_log};
}

/// R(x) = sum_{p<=x} log p / p - log x.
inline double r_function(prime_table const& table, double x)
{
    if (!(x >= 2.0))
        throw domain_error("r_function: x must be >= 2");
    return r_measure(table, x).value(x);
}

/// pi(x) = li2(x) + integral_2^x (y / log y) dR(y) + 1.
///
/// The p = 2 atom of dR sits at the lower limit and is left out: its unit
/// contribution is the +1 fixed by pi(2) = 1.
inline double pi_via_eq20(prime_table const& table, double x, quadrature_options const& q = {})
{
    if (!(x >= 2.0))
        throw domain_error("pi_via_eq20: x must be >= 2");
    auto const    measure = r_measure(table, x);
    double_double total(li2(x, q).value);
    total += stieltjes_integrate_wide(kernel_id::y_over_log(), measure, 2.0, x, lower_end::open, q);
    total += double_double(1.0);
    return total.value();
}

/// H_p(x) = log log x + 1 - log log 2 + integral_2^x R(y) / (y log^2 y) dy + R(x) / log x.
///
/// The integral splits exactly: the step part of R against 1/(y log^2 y)
/// in closed form per segment, and -log y against the same kernel gives
/// -(log log x - log log 2).
inline double hp_via_mertens_eq24(prime_table const& table, double x)
{
    if (!(x >= 2.0))
        throw domain_error("hp_via_mertens_eq24: x must be >= 2");
    auto const    measure = r_measure(table, x);
    double const  loglog  = antiderivative_difference<double>(kernel_id::inv_y_log(), 2.0, x);
    double_double integral =
        integrate_kernel_times_step_wide(measure.step, kernel_id::inv_y_log_sq(), 2.0, x) - double_double(loglog);
    double_double r_over_log = (measure.step.eval_wide(x) - double_double(std::log(x))) / std::log(x);

    double_double total(loglog);
    total += double_double(1.0);
    total += integral;
    total += r_over_log;
    return total.value();
}

/// Checks H_p(b) - H_p(a) = (log log b - log log a) + integral_(a,b] dR(y) / log y.
/// The left side is the direct reciprocal sum; the right side integrates
/// 1/log y against dR. The lower limit is open: a prime at a belongs to
/// H_p(a) and cancels on the left. a == b is accepted and yields 0 = 0.
inline verification_report check_eq25_integrated(prime_table const& table, double a, double b, double tol = 1e-10,
                                                  quadrature_options const& q = {})
{
    if (!(a >= 2.0) || !(a <= b) || !std::isfinite(b))
        throw domain_error("check_eq25_integrated: need 2 <= a <= b");
    if (b > static_cast<double>(table.limit()))
        throw range_error("check_eq25_integrated: b exceeds sieve limit");
    double const lhs = hp_direct(table, b) - hp_direct(table, a);

    auto const    measure = r_measure(table, b);
    double_double rhs(antiderivative_difference<double>(kernel_id::inv_y_log(), a, b));
    rhs += stieltjes_integrate_wide(kernel_id::inv_log(), measure, a, b, lower_end::open, q);
    return make_report(identity_id::eq25_int, b, std::nullopt, lhs, rhs.value(), tol);
}

} // namespace stepsum
