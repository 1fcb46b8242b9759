#pragma once

/// \file quadrature.hpp
/// Globally adaptive composite Gauss-Legendre quadrature.
///
/// Each panel is integrated with the 15-point rule and with the same rule on
/// its two halves; the difference is the panel's error estimate and the
/// two-half sum is the panel's value. The panel with the largest estimate is
/// bisected until the summed estimate falls under the absolute tolerance.
/// A panel whose estimate is at the rounding level of its own magnitude
/// cannot be improved by bisection and is retired with a zero truncation
/// estimate; its rounding contribution is reported separately.

#include <stepsum/numeric.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

namespace stepsum {

/// Panel cap exhausted before the tolerance was met.
struct quadrature_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct quadrature_options {
    double      abs_tol    = 1e-12;
    std::size_t max_panels = 1'000'000;
};

struct quadrature_result {
    double      value        = 0.0;
    double      abs_err      = 0.0; ///< summed truncation estimate, <= abs_tol on success
    double      roundoff_err = 0.0; ///< summed rounding floor of retired panels
    std::size_t panels       = 0;
};

namespace detail {

// Nonnegative abscissae of the 15-point Gauss-Legendre rule and their weights.
inline constexpr std::array<double, 8> gl15_nodes = {
    0.0,
    0.201194093997434522301,
    0.394151347077563369897,
    0.570972172608538847537,
    0.724417731360170047416,
    0.848206583410427216201,
    0.937273392400705904308,
    0.987992518020485428490,
};
inline constexpr std::array<double, 8> gl15_weights = {
    0.202578241925561272881,
    0.198431485327111576456,
    0.186161000015562211027,
    0.166269205816993933553,
    0.139570677926154314448,
    0.107159220467171935012,
    0.0703660474881081247093,
    0.0307532419961172683546,
};

struct gl_sum {
    double value;
    double magnitude; // integral of |f| under the same rule
};

template <typename F>
gl_sum gauss_legendre_15(F const& f, double a, double b)
{
    double const half = 0.5 * (b - a);
    double const mid  = 0.5 * (a + b);
    double       fc   = f(mid);
    double       sum  = gl15_weights[0] * fc;
    double       mag  = gl15_weights[0] * std::fabs(fc);
    for (std::size_t i = 1; i < gl15_nodes.size(); ++i) {
        double dx = half * gl15_nodes[i];
        double f1 = f(mid - dx);
        double f2 = f(mid + dx);
        sum += gl15_weights[i] * (f1 + f2);
        mag += gl15_weights[i] * (std::fabs(f1) + std::fabs(f2));
    }
    return {sum * half, mag * std::fabs(half)};
}

struct panel {
    double a;
    double b;
    double value;
    double err;
    double roundoff;

    bool operator<(panel const& o) const { return err < o.err; }
};

template <typename F>
panel make_panel(F const& f, double a, double b)
{
    double const m      = 0.5 * (a + b);
    auto const   coarse = gauss_legendre_15(f, a, b);
    auto const   left   = gauss_legendre_15(f, a, m);
    auto const   right  = gauss_legendre_15(f, m, b);
    double const fine   = left.value + right.value;
    double       err    = std::fabs(coarse.value - fine);
    double const floor  = 50.0 * std::numeric_limits<double>::epsilon() * (left.magnitude + right.magnitude);
    double       round  = 0.0;
    if (err <= floor || m <= a || m >= b) {
        round = err;
        err   = 0.0;
    }
    return {a, b, fine, err, round};
}

} // namespace detail

/// Integrates `f` over [a, b] (a <= b) to absolute tolerance `opts.abs_tol`.
template <typename F>
    requires std::invocable<F const&, double>
quadrature_result integrate_adaptive(F const& f, double a, double b, quadrature_options const& opts = {})
{
    if (!(a <= b) || !std::isfinite(a) || !std::isfinite(b))
        throw domain_error("integrate_adaptive: need finite a <= b");
    quadrature_result out;
    if (a == b)
        return out;

    std::priority_queue<detail::panel> active;
    std::vector<detail::panel>         done;
    double                             total_err = 0.0;

    auto push = [&](detail::panel p) {
        if (p.err > 0.0) {
            total_err += p.err;
            active.push(p);
        } else {
            done.push_back(p);
        }
    };
    push(detail::make_panel(f, a, b));
    std::size_t panels = 1;

    auto recount = [&] {
        total_err = 0.0;
        auto copy = active;
        while (!copy.empty()) {
            total_err += copy.top().err;
            copy.pop();
        }
    };

    while (!active.empty()) {
        // The running total is maintained by subtraction; confirm before stopping.
        if (total_err <= opts.abs_tol) {
            recount();
            if (total_err <= opts.abs_tol)
                break;
        }
        if (panels >= opts.max_panels)
            throw quadrature_error("integrate_adaptive: panel cap exhausted before reaching tolerance");
        detail::panel worst = active.top();
        active.pop();
        total_err -= worst.err;
        double const m = 0.5 * (worst.a + worst.b);
        push(detail::make_panel(f, worst.a, m));
        push(detail::make_panel(f, m, worst.b));
        ++panels;
    }

    while (!active.empty()) {
        done.push_back(active.top());
        active.pop();
    }
    std::sort(done.begin(), done.end(), [](auto const& l, auto const& r) { return l.a < r.a; });

    double_double sum;
    double        err = 0.0;
    double        rnd = 0.0;
    for (auto const& p : done) {
        sum += double_double(p.value);
        err += p.err;
        rnd += p.roundoff;
    }
    out.value        = sum.value();
    out.abs_err      = err;
    out.roundoff_err = rnd;
    out.panels       = done.size();
    return out;
}

} // namespace stepsum
