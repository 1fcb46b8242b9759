#pragma once

/// \file jump_series.hpp
/// Step functions built from weighted atoms, and integration against them.
///
/// A jump_series is F(x) = sum of weights at locations <= x. Evaluation is
/// inclusive at a location (the step takes its new value at the jump), and
/// F vanishes left of the first location. Integrals of kernel * F are exact
/// sums over constancy segments; integrals of a kernel against dF (the
/// Stieltjes form) sample the kernel at the atoms.

#include <stepsum/kernel.hpp>
#include <stepsum/numeric.hpp>
#include <stepsum/quadrature.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace stepsum {

template <scalar T>
struct atom {
    T location;
    T weight;

    friend bool operator==(atom const&, atom const&) = default;
};

template <scalar T>
class jump_series {
public:
    jump_series() = default;

    /// Sorts, merges equal locations by summing weights and drops atoms
    /// whose merged weight is zero. Throws domain_error on a nonpositive or
    /// non-finite location, or a non-finite weight.
    explicit jump_series(std::vector<atom<T>> points)
    {
        for (auto const& p : points) {
            if constexpr (!is_exact_v<T>) {
                if (!std::isfinite(p.location) || !std::isfinite(p.weight))
                    throw domain_error("jump_series: non-finite atom");
            }
            if (!(p.location > 0))
                throw domain_error("jump_series: atom location must be positive, got " + format_scalar(p.location));
        }
        std::stable_sort(points.begin(), points.end(), [](auto const& l, auto const& r) { return l.location < r.location; });

        atoms_.reserve(points.size());
        for (std::size_t i = 0; i < points.size();) {
            std::size_t j = i;
            wide_t<T>   w{};
            for (; j < points.size() && points[j].location == points[i].location; ++j)
                w += wide_t<T>(points[j].weight);
            T merged = narrow<T>(w);
            if (merged != 0)
                atoms_.push_back({points[i].location, merged});
            i = j;
        }

        if constexpr (is_exact_v<T>) {
            common_den_ = 1;
            for (auto const& a : atoms_)
                mpz_lcm(common_den_.get_mpz_t(), common_den_.get_mpz_t(), a.weight.get_den_mpz_t());
        } else {
            cumulative_.reserve(atoms_.size());
            double_double running;
            for (auto const& a : atoms_) {
                running += double_double(a.weight);
                cumulative_.push_back(running);
            }
        }
    }

    [[nodiscard]] bool        empty() const { return atoms_.empty(); }
    [[nodiscard]] std::size_t size() const { return atoms_.size(); }

    [[nodiscard]] std::span<atom<T> const> atoms() const { return atoms_; }

    /// Smallest location. Requires a nonempty series.
    [[nodiscard]] T const& domain_min() const
    {
        if (atoms_.empty())
            throw domain_error("jump_series: empty series has no domain_min");
        return atoms_.front().location;
    }

    /// Number of atoms with location <= x.
    [[nodiscard]] std::size_t count_at_or_below(T const& x) const
    {
        return static_cast<std::size_t>(
            std::upper_bound(atoms_.begin(), atoms_.end(), x, [](T const& v, atom<T> const& a) { return v < a.location; })
            - atoms_.begin());
    }

    /// Number of atoms with location < x.
    [[nodiscard]] std::size_t count_below(T const& x) const
    {
        return static_cast<std::size_t>(
            std::lower_bound(atoms_.begin(), atoms_.end(), x, [](atom<T> const& a, T const& v) { return a.location < v; })
            - atoms_.begin());
    }

    /// F after the first `n` atoms. O(1) in float mode, O(n) in exact mode.
    [[nodiscard]] wide_t<T> partial_sum(std::size_t n) const
    {
        if constexpr (is_exact_v<T>) {
            rational r(scaled_prefix(n), common_den_);
            r.canonicalize();
            return r;
        } else {
            return n == 0 ? double_double{} : cumulative_[n - 1];
        }
    }

    /// Exact mode keeps F as an integer over one shared denominator, the lcm
    /// of the weight denominators, so running sums never need a gcd.
    [[nodiscard]] mpz_class const& common_denominator() const
        requires is_exact_v<T>
    {
        return common_den_;
    }

    /// weight(i) * common_denominator(), an integer.
    [[nodiscard]] mpz_class scaled_weight(std::size_t i) const
        requires is_exact_v<T>
    {
        mpz_class q;
        mpz_divexact(q.get_mpz_t(), common_den_.get_mpz_t(), atoms_[i].weight.get_den_mpz_t());
        return q * atoms_[i].weight.get_num();
    }

    /// F after the first `n` atoms, times common_denominator().
    [[nodiscard]] mpz_class scaled_prefix(std::size_t n) const
        requires is_exact_v<T>
    {
        mpz_class acc = 0;
        for (std::size_t i = 0; i < n; ++i)
            acc += scaled_weight(i);
        return acc;
    }

    [[nodiscard]] wide_t<T> eval_wide(T const& x) const { return partial_sum(count_at_or_below(x)); }

    /// F(x), inclusive at atom locations; 0 left of domain_min.
    [[nodiscard]] T eval(T const& x) const { return narrow<T>(eval_wide(x)); }

private:
    struct no_den {};
    std::vector<atom<T>>                                     atoms_;
    std::vector<double_double>                               cumulative_; // float mode only
    std::conditional_t<is_exact_v<T>, mpz_class, no_den>     common_den_{};
};

template <scalar T>
jump_series<T> build_jump_series(std::vector<atom<T>> points)
{
    return jump_series<T>(std::move(points));
}

template <scalar T>
T eval(jump_series<T> const& series, T const& x)
{
    return series.eval(x);
}

namespace detail {

template <scalar T>
T segment_integral(kernel_id const& k, T const& lo, T const& hi, quadrature_options const& q)
{
    if constexpr (is_exact_v<T>) {
        return antiderivative_difference<T>(k, lo, hi);
    } else {
        if (k.has_closed_form())
            return antiderivative_difference<T>(k, lo, hi);
        return integrate_adaptive([&](double y) { return kernel_value<double>(k, y); }, lo, hi, q).value;
    }
}

template <scalar T>
void check_range(kernel_id const& k, T const& a, T const& b, char const* who)
{
    if constexpr (!is_exact_v<T>) {
        if (!std::isfinite(a) || !std::isfinite(b))
            throw domain_error(std::string(who) + ": non-finite limit");
    } else {
        require_exact_capable(k);
    }
    if (a > b)
        throw domain_error(std::string(who) + ": lower limit exceeds upper limit");
    if (k.needs_log() && !(a > 1))
        throw domain_error(std::string(who) + ": kernel " + to_string(k) + " needs a lower limit > 1");
}

} // namespace detail

/// Integral over [a, b] of kernel(y) * F(y) dy, accumulated at wide width.
template <scalar T>
wide_t<T> integrate_kernel_times_step_wide(jump_series<T> const& series, kernel_id const& kernel, T const& a, T const& b,
                                           quadrature_options const& q = {})
{
    detail::check_range(kernel, a, b, "integrate_kernel_times_step");
    wide_t<T> acc{};
    if (series.empty() || a == b)
        return acc;

    auto const  atoms = series.atoms();
    std::size_t next  = series.count_at_or_below(a);
    T           lo    = a;
    if constexpr (is_exact_v<T>) {
        // Segment j contributes level_j * (P(hi_j) - P(lo_j)) with P(y) = y^m / m.
        // Levels are integers over common_denominator(); the P values are
        // brought over one denominator too, so the loop is integer-only and
        // the single gcd happens at the end.
        long const m = static_cast<long>(kernel.exponent) + 1;
        std::vector<T> breaks;
        std::size_t const first = next;
        for (std::size_t i = next; i < atoms.size() && atoms[i].location < b; ++i)
            breaks.push_back(atoms[i].location);
        breaks.push_back(b);
        if (first > 0)
            breaks.insert(breaks.begin(), a);

        std::vector<T> prim;
        prim.reserve(breaks.size());
        mpz_class den = 1;
        for (auto const& y : breaks) {
            prim.push_back(ipow<T>(y, m) / T(m));
            mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), prim.back().get_den_mpz_t());
        }
        auto scaled_prim = [&](std::size_t j) {
            mpz_class f;
            mpz_divexact(f.get_mpz_t(), den.get_mpz_t(), prim[j].get_den_mpz_t());
            return mpz_class(f * prim[j].get_num());
        };

        mpz_class total = 0;
        mpz_class level = series.scaled_prefix(first);
        std::size_t atom_index = first;
        if (first == 0) // F = 0 up to the first atom; start there
            level += series.scaled_weight(atom_index++);
        mpz_class p_lo = scaled_prim(0);
        for (std::size_t j = 1; j < breaks.size(); ++j) {
            mpz_class p_hi = scaled_prim(j);
            total += level * (p_hi - p_lo);
            if (j + 1 < breaks.size())
                level += series.scaled_weight(atom_index++);
            p_lo = std::move(p_hi);
        }
        rational out(total, mpz_class(den * series.common_denominator()));
        out.canonicalize();
        return out;
    } else {
        double_double level = series.partial_sum(next);
        for (;;) {
            bool const has_jump = next < atoms.size() && atoms[next].location < b;
            T const&   hi       = has_jump ? atoms[next].location : b;
            if (next > 0 && lo < hi)
                acc += level * detail::segment_integral<T>(kernel, lo, hi, q);
            if (!has_jump)
                break;
            lo    = hi;
            level = series.partial_sum(++next);
        }
        return acc;
    }
}

/// Integral over [a, b] of kernel(y) * F(y) dy. Exact per segment for the
/// closed-form kernels; per-segment adaptive quadrature otherwise.
template <scalar T>
T integrate_kernel_times_step(jump_series<T> const& series, kernel_id const& kernel, T const& a, T const& b,
                              quadrature_options const& q = {})
{
    return narrow<T>(integrate_kernel_times_step_wide(series, kernel, a, b, q));
}

// ---------------------------------------------------------------------------
// Step plus smooth

enum class smooth_term {
    none,
    neg_log, ///< x -> -log x, density -1/x on [domain_min, inf)
};

template <scalar T>
struct step_plus_smooth {
    jump_series<T> step;
    smooth_term    smooth = smooth_term::none;

    /// step(x) + smooth(x). The smooth part is only added from domain_min on,
    /// matching where its density lives.
    [[nodiscard]] T value(T const& x) const
    {
        T v = step.eval(x);
        if (smooth == smooth_term::neg_log) {
            if constexpr (is_exact_v<T>)
                throw mode_error("step_plus_smooth: log term needs float mode");
            else
                v -= std::log(x);
        }
        return v;
    }
};

enum class lower_end {
    closed, ///< atoms at the lower limit contribute
    open,   ///< atoms at the lower limit are excluded
};

namespace detail {

/// Integral of kernel(y) * (-1/y) over [lo, hi].
inline double neg_log_density_integral(kernel_id const& k, double lo, double hi, quadrature_options const& q)
{
    switch (k.tag) {
    case kernel_tag::power: return -antiderivative_difference<double>(kernel_id::power(k.exponent - 1.0), lo, hi);
    case kernel_tag::inv_log: return -antiderivative_difference<double>(kernel_id::inv_y_log(), lo, hi);
    case kernel_tag::y_over_log: return -kernel_integral(kernel_id::inv_log(), lo, hi, q);
    case kernel_tag::inv_y_log:
    case kernel_tag::inv_y_log_sq: break;
    }
    return -integrate_adaptive([&](double y) { return kernel_value<double>(k, y) / y; }, lo, hi, q).value;
}

} // namespace detail

/// Sum over atoms in [a, b] of kernel(location) * weight, plus the integral
/// of kernel against the smooth density over [a, b].
template <scalar T>
wide_t<T> stieltjes_integrate_wide(kernel_id const& kernel, step_plus_smooth<T> const& measure, T const& a, T const& b,
                                   lower_end lower = lower_end::closed, quadrature_options const& q = {})
{
    detail::check_range(kernel, a, b, "stieltjes_integrate");
    auto const& step = measure.step;
    wide_t<T>   acc{};
    if (step.empty())
        return acc;

    auto const  atoms = step.atoms();
    std::size_t first = lower == lower_end::closed ? step.count_below(a) : step.count_at_or_below(a);
    std::size_t last  = step.count_at_or_below(b);
    for (std::size_t i = first; i < last; ++i)
        acc += wide_product<T>(kernel_value<T>(kernel, atoms[i].location), atoms[i].weight);

    if (measure.smooth == smooth_term::neg_log) {
        if constexpr (is_exact_v<T>) {
            throw mode_error("stieltjes_integrate: log density needs float mode");
        } else {
            double const lo = std::max(a, step.domain_min());
            if (lo < b)
                acc += double_double(detail::neg_log_density_integral(kernel, lo, b, q));
        }
    }
    return acc;
}

template <scalar T>
T stieltjes_integrate(kernel_id const& kernel, step_plus_smooth<T> const& measure, T const& a, T const& b,
                      lower_end lower = lower_end::closed, quadrature_options const& q = {})
{
    return narrow<T>(stieltjes_integrate_wide(kernel, measure, a, b, lower, q));
}

} // namespace stepsum
