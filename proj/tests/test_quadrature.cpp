#include <stepsum/quadrature.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace {

using namespace stepsum;

TEST(Quadrature, PolynomialsUpToDegree29AreExactOnOnePanel)
{
    auto const r = integrate_adaptive([](double x) { return std::pow(x, 29); }, 0.0, 1.0);
    EXPECT_NEAR(r.value, 1.0 / 30.0, 1e-16);
    EXPECT_EQ(r.panels, 1u);
}

TEST(Quadrature, SmoothIntegrands)
{
    EXPECT_NEAR(integrate_adaptive([](double x) { return std::sin(x); }, 0.0, std::numbers::pi).value, 2.0, 1e-14);
    EXPECT_NEAR(integrate_adaptive([](double x) { return std::exp(x); }, 0.0, 10.0).value, std::expm1(10.0), 1e-10);
}

TEST(Quadrature, InverseLogAgainstHighPrecisionValue)
{
    // integral_2^10 dt/log t to 25 digits
    auto const r = integrate_adaptive([](double t) { return 1.0 / std::log(t); }, 2.0, 10.0);
    EXPECT_NEAR(r.value, 5.120435724669805152678393, 1e-13);
    EXPECT_LE(r.abs_err, 1e-12);
}

TEST(Quadrature, EmptyAndReversedIntervals)
{
    auto f = [](double x) { return x * x; };
    EXPECT_EQ(integrate_adaptive(f, 3.0, 3.0).value, 0.0);
    EXPECT_THROW(integrate_adaptive(f, 1.0, 0.0), domain_error);
}

TEST(Quadrature, RefinesNearAKink)
{
    // The error estimate assumes smoothness, so a kink gets a looser bound.
    auto const r = integrate_adaptive([](double x) { return std::fabs(x - 0.3); }, 0.0, 1.0);
    EXPECT_NEAR(r.value, 0.5 * (0.09 + 0.49), 1e-10);
    EXPECT_GT(r.panels, 1u);
}

TEST(Quadrature, PanelCapRaises)
{
    quadrature_options opts;
    opts.max_panels = 4;
    EXPECT_THROW(integrate_adaptive([](double x) { return std::sqrt(std::fabs(x - 0.3)); }, 0.0, 1.0, opts),
                 quadrature_error);
}

TEST(Quadrature, NonFiniteLimitsRejected)
{
    EXPECT_THROW(integrate_adaptive([](double x) { return x; }, 0.0, INFINITY), domain_error);
}

} // namespace
