#include "accelosc/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

using namespace accelosc;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double half_pi = std::numbers::pi / 2.0;

// Test integrands with closed-form antiderivatives.
struct Analytic
{
    int kind = 0;
    double p1 = 1.0;
    double p2 = 0.0;

    double operator()(double x) const
    {
        switch (kind) {
        case 0:
            return p1 / ((x - p2) * (x - p2) + p1 * p1);
        case 1:
            return std::exp(-p1 * x);
        case 2:
            return std::cos(p1 * x + p2);
        default:
            return x * x * x - p1 * x + p2;
        }
    }

    double antiderivative(double x) const
    {
        switch (kind) {
        case 0:
            return std::atan((x - p2) / p1);
        case 1:
            return -std::exp(-p1 * x) / p1;
        case 2:
            return std::sin(p1 * x + p2) / p1;
        default:
            return 0.25 * x * x * x * x - 0.5 * p1 * x * x + p2 * x;
        }
    }

    double exact(double lo, double hi) const { return antiderivative(hi) - antiderivative(lo); }
};

Analytic random_analytic(std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> kind(0, 3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Analytic f;
    f.kind = kind(rng);
    switch (f.kind) {
    case 0:
        f.p1 = std::pow(10.0, -3.0 + 3.0 * unit(rng));
        f.p2 = -2.0 + 4.0 * unit(rng);
        break;
    case 1:
        f.p1 = 0.1 + 3.0 * unit(rng);
        break;
    case 2:
        f.p1 = 0.5 + 20.0 * unit(rng);
        f.p2 = 6.0 * unit(rng);
        break;
    default:
        f.p1 = 4.0 * unit(rng);
        f.p2 = -1.0 + 2.0 * unit(rng);
    }
    return f;
}

} // namespace

TEST(Integrate, LorentzianHalfLine)
{
    const auto f = [](double z) { return 1.0 / (z * z + 1.0); };
    const auto r = integrate(f, 0.0, inf);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value / half_pi, 1.0, 1e-10);
    EXPECT_LE(r.error_estimate, 1e-10 * r.value);
}

TEST(Integrate, ExponentialHalfLine)
{
    const auto r = integrate([](double z) { return std::exp(-z); }, 0.0, inf);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value, 1.0, 1e-10);
}

TEST(Integrate, NarrowLorentzianWithPeakHints)
{
    const double A = 1e-12;
    const auto f = [A](double z) { return A / (z * z + A * A); };
    QuadratureSpec spec;
    const auto r = integrate(f, 0.0, inf, spec.with_peak(0.0, A));
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value / half_pi, 1.0, 1e-10);
    EXPECT_LT(r.evaluations, 100000);
}

TEST(Integrate, LorentzianScaleInvariance)
{
    for (double le = -12.0; le <= 12.0; le += 0.5) {
        const double A = std::pow(10.0, le);
        const auto f = [A](double z) { return A / (z * z + A * A); };
        const auto r = integrate(f, 0.0, inf, QuadratureSpec{}.with_peak(0.0, A));
        EXPECT_TRUE(r.converged) << "A = " << A;
        EXPECT_NEAR(r.value / half_pi, 1.0, 1e-10) << "A = " << A;
    }
}

TEST(Integrate, InteriorPeak)
{
    const double A = 1e-7;
    const double c = 1.0;
    const auto f = [=](double u) { return A / ((u - c) * (u - c) + A * A); };
    const auto r = integrate(f, 0.0, 3.0, QuadratureSpec{}.with_peak(c, A));
    const double exact = std::atan(2.0 / A) + std::atan(1.0 / A);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value / exact, 1.0, 1e-10);
}

TEST(Integrate, Deterministic)
{
    const auto f = [](double x) { return std::sin(x) * std::exp(-0.1 * x); };
    const auto r1 = integrate(f, 0.0, inf);
    const auto r2 = integrate(f, 0.0, inf);
    EXPECT_EQ(r1.value, r2.value);
    EXPECT_EQ(r1.error_estimate, r2.error_estimate);
    EXPECT_EQ(r1.evaluations, r2.evaluations);
}

TEST(Integrate, NonConvergenceIsReported)
{
    // 1/sqrt(x) singularity with a tiny depth budget cannot reach 1e-14
    QuadratureSpec spec;
    spec.rel_tol = 1e-14;
    spec.max_depth = 10;
    const auto r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, spec);
    EXPECT_FALSE(r.converged);
    EXPECT_GT(r.error_estimate, 1e-14 * std::abs(r.value));
    EXPECT_NEAR(r.value, 2.0, 1e-2);
}

TEST(Integrate, NanIsAnEvaluationError)
{
    const auto f = [](double x) { return x > 0.5 ? std::nan("") : 1.0; };
    try {
        integrate(f, 0.0, 1.0);
        FAIL() << "expected EvaluationError";
    } catch (const EvaluationError& e) {
        EXPECT_GT(e.abscissa(), 0.5);
        EXPECT_LT(e.abscissa(), 1.0);
    }
}

TEST(Integrate, RejectsBadArguments)
{
    const auto f = [](double) { return 1.0; };
    EXPECT_THROW(integrate(f, 1.0, 0.0), DomainError);
    EXPECT_THROW(integrate(f, -inf, 0.0), DomainError);
    QuadratureSpec spec;
    spec.rel_tol = 0.0;
    EXPECT_THROW(integrate(f, 0.0, 1.0, spec), DomainError);
    spec = {};
    spec.max_depth = 5;
    EXPECT_THROW(integrate(f, 0.0, 1.0, spec), DomainError);
    spec = {};
    spec.peak_center = 0.5;
    EXPECT_THROW(integrate(f, 0.0, 1.0, spec), DomainError);
}

TEST(IntegrateProperty, Additivity)
{
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (int i = 0; i < 1000; ++i) {
        const Analytic f = random_analytic(rng);
        const double a = -3.0 + 2.0 * unit(rng);
        const double c = a + 0.5 + 4.0 * unit(rng);
        const double b = a + (c - a) * (0.05 + 0.9 * unit(rng));
        const auto whole = integrate(f, a, c);
        const auto left = integrate(f, a, b);
        const auto right = integrate(f, b, c);
        const double slack = whole.error_estimate + left.error_estimate + right.error_estimate
                             + 16.0 * eps * (std::abs(whole.value) + std::abs(left.value) + std::abs(right.value));
        ASSERT_LE(std::abs(whole.value - left.value - right.value), slack)
            << "case " << i << " kind " << f.kind;
    }
}

TEST(IntegrateProperty, TighterToleranceNeverWorse)
{
    std::mt19937_64 rng(67890);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (int i = 0; i < 1000; ++i) {
        const Analytic f = random_analytic(rng);
        const double a = -3.0 + 2.0 * unit(rng);
        const double b = a + 0.5 + 4.0 * unit(rng);
        const double exact = f.exact(a, b);
        QuadratureSpec loose;
        loose.rel_tol = 1e-5;
        QuadratureSpec tight;
        tight.rel_tol = 1e-11;
        const double e_loose = std::abs(integrate(f, a, b, loose).value - exact);
        const double e_tight = std::abs(integrate(f, a, b, tight).value - exact);
        ASSERT_LE(e_tight, e_loose + 64.0 * eps * std::max(std::abs(exact), 1.0))
            << "case " << i << " kind " << f.kind;
    }
}
