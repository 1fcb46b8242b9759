#include "support.hpp"

#include <stepsum/jump_series.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace {

using namespace stepsum;
using stepsum::testing::Q;
using stepsum::testing::seeded;
using stepsum::testing::uniform;

jump_series<rational> harmonic_atoms(long n)
{
    std::vector<atom<rational>> a;
    for (long i = 1; i <= n; ++i)
        a.push_back({Q(i, 1), Q(1, i)});
    return jump_series<rational>(a);
}

jump_series<rational> reciprocal_primes_to_7()
{
    std::vector<atom<rational>> a;
    for (long p : {2, 3, 5, 7})
        a.push_back({Q(p, 1), Q(1, p)});
    return jump_series<rational>(a);
}

/// Random distinct reals in (1, 1000) with reciprocal weights.
template <scalar T>
jump_series<T> random_reciprocal_series(std::mt19937_64& rng, std::size_t n)
{
    std::vector<atom<T>> a;
    for (std::size_t i = 0; i < n; ++i) {
        T const q = from_double<T>(uniform(rng, 1.0, 1000.0));
        a.push_back({q, T(1) / q});
    }
    return jump_series<T>(a);
}

// ---------------------------------------------------------------------------
// construction and evaluation

TEST(BuildJumpSeries, EmptyInputGivesZeroFunction)
{
    auto const s = build_jump_series<rational>({});
    EXPECT_TRUE(s.empty());
    for (auto x : {Q(-5, 1), Q(0, 1), Q(3, 2), Q(1000, 1)})
        EXPECT_EQ(eval(s, x), 0);
    EXPECT_THROW((void)s.domain_min(), domain_error);
}

TEST(BuildJumpSeries, MergesDuplicateLocations)
{
    auto const s = build_jump_series<double>({{2.0, 0.5}, {2.0, 0.25}});
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s.atoms()[0], (atom<double>{2.0, 0.75}));
}

TEST(BuildJumpSeries, SortsUnsortedInput)
{
    auto const s = build_jump_series<rational>({{Q(3, 1), Q(1, 3)}, {Q(2, 1), Q(1, 2)}});
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s.atoms()[0].location, 2);
    EXPECT_EQ(s.atoms()[1].location, 3);
    EXPECT_EQ(eval(s, Q(3, 1)), Q(5, 6));
    EXPECT_EQ(s.domain_min(), 2);
}

TEST(BuildJumpSeries, DropsAtomsWhoseWeightsCancel)
{
    auto const s = build_jump_series<rational>({{Q(2, 1), Q(1, 3)}, {Q(5, 1), Q(1, 1)}, {Q(2, 1), Q(-1, 3)}});
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s.domain_min(), 5);
}

TEST(BuildJumpSeries, RejectsBadAtoms)
{
    double const inf = std::numeric_limits<double>::infinity();
    EXPECT_THROW(build_jump_series<double>({{0.0, 1.0}}), domain_error);
    EXPECT_THROW(build_jump_series<double>({{-1.0, 1.0}}), domain_error);
    EXPECT_THROW(build_jump_series<double>({{inf, 1.0}}), domain_error);
    EXPECT_THROW(build_jump_series<double>({{2.0, std::nan("")}}), domain_error);
    EXPECT_THROW(build_jump_series<rational>({{Q(0, 1), Q(1, 1)}}), domain_error);
}

TEST(Eval, ZeroLeftOfDomainMin)
{
    EXPECT_EQ(eval(harmonic_atoms(4), Q(1, 2)), 0);
}

TEST(Eval, HarmonicAtomsAtFour)
{
    EXPECT_EQ(eval(harmonic_atoms(4), Q(4, 1)), Q(25, 12));
}

TEST(Eval, ReciprocalPrimesAtSeven)
{
    EXPECT_EQ(eval(reciprocal_primes_to_7(), Q(7, 1)), Q(247, 210));
    EXPECT_EQ(eval(reciprocal_primes_to_7(), Q(13, 2)), Q(1, 2) + Q(1, 3) + Q(1, 5));
}

TEST(Eval, RightInclusiveAtEveryAtom)
{
    auto rng = seeded(21);
    for (int trial = 0; trial < 50; ++trial) {
        auto const s = random_reciprocal_series<double>(rng, 100);
        for (auto const& a : s.atoms()) {
            double const before = std::nextafter(a.location, 0.0);
            double const jump   = s.eval(a.location) - s.eval(before);
            EXPECT_NEAR(jump, a.weight, 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, s.eval(a.location)));
            EXPECT_EQ(s.count_at_or_below(a.location), s.count_below(a.location) + 1);
        }
    }
}

TEST(Eval, RightInclusiveExact)
{
    auto rng = seeded(22);
    auto const s = random_reciprocal_series<rational>(rng, 100);
    for (auto const& a : s.atoms()) {
        rational const before = exact_from_double(std::nextafter(a.location.get_d(), 0.0));
        EXPECT_EQ(s.eval(a.location) - s.eval(before), a.weight);
    }
}

// ---------------------------------------------------------------------------
// integrate_kernel_times_step

TEST(IntegrateKernelTimesStep, EmptySeriesGivesZero)
{
    jump_series<double> const empty;
    EXPECT_EQ(integrate_kernel_times_step(empty, kernel_id::power(2), 2.0, 10.0), 0.0);
    EXPECT_EQ(integrate_kernel_times_step(empty, kernel_id::inv_log(), 2.0, 10.0), 0.0);
}

TEST(IntegrateKernelTimesStep, SingleAtomConstant)
{
    auto const s = build_jump_series<rational>({{Q(3, 1), Q(1, 3)}});
    EXPECT_EQ(integrate_kernel_times_step(s, kernel_id::power(0), Q(3, 1), Q(5, 1)), Q(2, 3));
    // starting left of the atom changes nothing: F is 0 there
    EXPECT_EQ(integrate_kernel_times_step(s, kernel_id::power(0), Q(1, 1), Q(5, 1)), Q(2, 3));
}

TEST(IntegrateKernelTimesStep, HarmonicSegments)
{
    EXPECT_EQ(integrate_kernel_times_step(harmonic_atoms(4), kernel_id::power(0), Q(1, 1), Q(4, 1)), Q(13, 3));
    EXPECT_DOUBLE_EQ(integrate_kernel_times_step(jump_series<double>({{1, 1}, {2, 0.5}, {3, 1.0 / 3}, {4, 0.25}}),
                                                 kernel_id::power(0), 1.0, 4.0),
                     13.0 / 3.0);
}

TEST(IntegrateKernelTimesStep, RangeErrors)
{
    auto const s = build_jump_series<double>({{3.0, 1.0}});
    EXPECT_THROW(integrate_kernel_times_step(s, kernel_id::power(0), 5.0, 3.0), domain_error);
    EXPECT_THROW(integrate_kernel_times_step(s, kernel_id::inv_log(), 1.0, 3.0), domain_error);
    EXPECT_THROW(integrate_kernel_times_step(s, kernel_id::inv_y_log(), 0.5, 3.0), domain_error);
    auto const e = build_jump_series<rational>({{Q(3, 1), Q(1, 1)}});
    EXPECT_THROW(integrate_kernel_times_step(e, kernel_id::inv_log(), Q(2, 1), Q(3, 1)), mode_error);
}

TEST(IntegrateKernelTimesStep, InverseLogByQuadrature)
{
    // F = 1 on [3, 10]: integral_3^10 dt/log t
    auto const s   = build_jump_series<double>({{3.0, 1.0}});
    double const v = integrate_kernel_times_step(s, kernel_id::inv_log(), 2.0, 10.0);
    double const ref = integrate_adaptive([](double t) { return 1.0 / std::log(t); }, 3.0, 10.0).value;
    EXPECT_NEAR(v, ref, 1e-12);
}

TEST(IntegrateKernelTimesStep, AdditivityExact)
{
    auto rng = seeded(23);
    for (int trial = 0; trial < 50; ++trial) {
        auto const s = random_reciprocal_series<rational>(rng, 40);
        double      p[3] = {uniform(rng, 0.5, 1000.0), uniform(rng, 0.5, 1000.0), uniform(rng, 0.5, 1000.0)};
        std::sort(p, p + 3);
        rational const a = exact_from_double(p[0]), b = exact_from_double(p[1]), c = exact_from_double(p[2]);
        for (int k : {-3, 0, 2}) {
            auto const kid = kernel_id::power(k);
            EXPECT_EQ(integrate_kernel_times_step(s, kid, a, c),
                      integrate_kernel_times_step(s, kid, a, b) + integrate_kernel_times_step(s, kid, b, c));
        }
    }
}

TEST(IntegrateKernelTimesStep, AdditivityFloat)
{
    auto rng = seeded(24);
    for (int trial = 0; trial < 200; ++trial) {
        auto const s = random_reciprocal_series<double>(rng, 60);
        double      p[3] = {uniform(rng, 1.5, 1000.0), uniform(rng, 1.5, 1000.0), uniform(rng, 1.5, 1000.0)};
        std::sort(p, p + 3);
        for (auto kid : {kernel_id::power(-3), kernel_id::power(0), kernel_id::power(2), kernel_id::power(0.5),
                         kernel_id::inv_y_log(), kernel_id::inv_y_log_sq(), kernel_id::inv_log()}) {
            double const whole = integrate_kernel_times_step(s, kid, p[0], p[2]);
            double const parts = integrate_kernel_times_step(s, kid, p[0], p[1]) + integrate_kernel_times_step(s, kid, p[1], p[2]);
            double const scale = std::max(std::fabs(whole), std::numeric_limits<double>::min());
            // quadrature kernels carry their absolute tolerance as well
            double const slack = kid.has_closed_form() ? 0.0 : 2e-12;
            EXPECT_LE(std::fabs(whole - parts), 1e-12 * scale + slack) << to_string(kid);
        }
    }
}

// ---------------------------------------------------------------------------
// stieltjes_integrate

TEST(StieltjesIntegrate, UnitAtomsCount)
{
    step_plus_smooth<rational> const m{build_jump_series<rational>({{Q(2, 1), Q(1, 1)}, {Q(3, 1), Q(1, 1)}, {Q(5, 1), Q(1, 1)}})};
    EXPECT_EQ(stieltjes_integrate(kernel_id::power(0), m, Q(2, 1), Q(5, 1)), 3);
}

TEST(StieltjesIntegrate, ReciprocalAtomsSampledByY)
{
    step_plus_smooth<rational> const m{build_jump_series<rational>({{Q(2, 1), Q(1, 2)}, {Q(3, 1), Q(1, 3)}, {Q(5, 1), Q(1, 5)}})};
    EXPECT_EQ(stieltjes_integrate(kernel_id::power(1), m, Q(2, 1), Q(5, 1)), 3);
    // open lower end leaves the atom at 2 out
    EXPECT_EQ(stieltjes_integrate(kernel_id::power(1), m, Q(2, 1), Q(5, 1), lower_end::open), 2);
}

TEST(StieltjesIntegrate, InverseLogAgainstRemainderMeasure)
{
    std::vector<atom<double>> a;
    for (double p : {2.0, 3.0, 5.0, 7.0})
        a.push_back({p, std::log(p) / p});
    step_plus_smooth<double> const m{jump_series<double>(a), smooth_term::neg_log};
    // 247/210 - (log log 10 - log log 2), 25 digits
    EXPECT_NEAR(stieltjes_integrate(kernel_id::inv_log(), m, 2.0, 10.0), -0.02435488963914393633946173, 1e-13);
}

TEST(StieltjesIntegrate, RangeErrors)
{
    step_plus_smooth<double> const m{build_jump_series<double>({{2.0, 1.0}})};
    EXPECT_THROW(stieltjes_integrate(kernel_id::power(0), m, 3.0, 2.0), domain_error);
    EXPECT_THROW(stieltjes_integrate(kernel_id::inv_log(), m, 1.0, 3.0), domain_error);
}

TEST(StieltjesIntegrate, CountingLawExactOverRandomSets)
{
    auto rng = seeded(25);
    std::uniform_int_distribution<std::size_t> size(1, 200);
    for (int trial = 0; trial < 1000; ++trial) {
        auto const                       s = random_reciprocal_series<rational>(rng, size(rng));
        step_plus_smooth<rational> const m{s};
        rational const x = exact_from_double(uniform(rng, 1.0, 1000.0));
        auto const     n = stieltjes_integrate(kernel_id::power(1), m, s.domain_min(), std::max(x, s.domain_min()));
        EXPECT_EQ(n, rational(static_cast<long>(s.count_at_or_below(std::max(x, s.domain_min())))));
    }
}

TEST(StieltjesIntegrate, SamplingLawForEveryCatalogKernel)
{
    auto rng = seeded(26);
    for (int trial = 0; trial < 500; ++trial) {
        double const q = uniform(rng, 1.01, 1000.0);
        double const w = uniform(rng, -5.0, 5.0);
        double const a = uniform(rng, 1.001, q);
        double const b = uniform(rng, q, 2000.0);
        step_plus_smooth<double> const m{build_jump_series<double>({{q, w}})};
        for (auto kid : {kernel_id::power(-3), kernel_id::power(-1), kernel_id::power(0), kernel_id::power(2.5),
                         kernel_id::inv_y_log_sq(), kernel_id::inv_y_log(), kernel_id::inv_log(), kernel_id::y_over_log()}) {
            double const expect = kernel_value<double>(kid, q) * w;
            EXPECT_NEAR(stieltjes_integrate(kid, m, a, b), expect, 1e-14 * std::fabs(expect)) << to_string(kid);
            EXPECT_EQ(stieltjes_integrate(kid, m, q, q), expect);
        }
    }
}

TEST(StepPlusSmooth, ValueAddsNegLog)
{
    step_plus_smooth<double> const m{build_jump_series<double>({{2.0, 1.0}}), smooth_term::neg_log};
    EXPECT_DOUBLE_EQ(m.value(3.0), 1.0 - std::log(3.0));
    step_plus_smooth<rational> const e{build_jump_series<rational>({{Q(2, 1), Q(1, 1)}}), smooth_term::neg_log};
    EXPECT_THROW((void)e.value(Q(3, 1)), mode_error);
}

} // namespace
