#include "accelosc/commutator.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace accelosc;

namespace {

// Composite Simpson after u = 1 + h tan(phi), which flattens a Lorentzian of
// half width h centred on u = 1. Independent of the adaptive engine.
template <typename F>
double tan_simpson(const F& f, double lo, double hi, double h, int panels)
{
    const double p0 = std::atan((lo - 1.0) / h);
    const double p1 = std::atan((hi - 1.0) / h);
    const double step = (p1 - p0) / panels;
    const auto g = [&](double phi) {
        const double t = std::tan(phi);
        return f(1.0 + h * t) * h * (1.0 + t * t);
    };
    double sum = g(p0) + g(p1);
    for (int i = 1; i < panels; ++i) {
        sum += g(p0 + i * step) * (i % 2 ? 4.0 : 2.0);
    }
    return sum * step / 3.0;
}

} // namespace

TEST(Integrand, PeakHeightAtResonance)
{
    const double g = 1e-4;
    EXPECT_NEAR(integrand(1.0, 0.0, g), 4.0 / (std::numbers::pi * g), 1e-12 / g);
}

TEST(Integrand, OffResonanceValue)
{
    // (4/pi) g 16 / (9 + g^2 64) at g = 1e-6, from a 40-digit evaluation
    EXPECT_NEAR(integrand(2.0, 0.0, 1e-6) / 2.26353696840197e-6, 1.0, 1e-13);
}

TEST(Integrand, MatchesDirectFormula)
{
    for (double s : {0.0, 0.3, 1.0, 4.0}) {
        for (double u : {0.01, 0.5, 0.999, 1.0, 1.7, 30.0}) {
            const double g = 1e-3;
            const double F = 1.0 + (s / u) * (s / u);
            const double coth = s == 0.0 ? 1.0 : 1.0 / std::tanh(std::numbers::pi * u / s);
            const double direct = 4.0 / std::numbers::pi * g * std::pow(u, 4) * F * coth
                                  / (std::pow(u * u - 1.0, 2) + g * g * std::pow(u, 6) * F * F);
            EXPECT_NEAR(integrand(u, s, g) / direct, 1.0, 1e-13) << s << " " << u;
            EXPECT_GE(integrand(u, s, g), 0.0);
        }
    }
}

TEST(Integrand, RejectsBadInputs)
{
    EXPECT_THROW(integrand(0.0, 1.0, 1e-3), DomainError);
    EXPECT_THROW(integrand(1.0, 1.0, 1.5), DomainError);
    EXPECT_THROW(integrand(1.0, -1.0, 1e-3), DomainError);
}

TEST(ClosedForm, Values)
{
    EXPECT_EQ(commutator_closed_form(0.0), 1.0);
    EXPECT_NEAR(commutator_closed_form(1.0), 1.0037418731973212882, 1e-15);
    EXPECT_NEAR(commutator_closed_form(10.0), 3.287136001903376979, 1e-14);
}

TEST(NormalizedCommutator, AlwaysOne)
{
    for (double s : {0.0, 1.0, 100.0, 1e-3, 1e3}) {
        EXPECT_EQ(normalized_commutator(s), 1.0);
    }
}

TEST(PaperHalfResonance, ReproducesClosedForm)
{
    const auto r = commutator_numeric({1.0, 1e-6}, PaperHalfResonance{});
    ASSERT_TRUE(r.quadrature.has_value());
    EXPECT_TRUE(r.converged());
    EXPECT_NEAR(r.value, 1.0037418731973212882, 1e-8);
}

TEST(PaperHalfResonance, IdentityOverParameterGrid)
{
    for (double s : {0.0, 0.1, 0.5, 1.0, 3.0, 10.0, 30.0, 100.0}) {
        for (double g : {1e-8, 1e-6, 1e-5, 1e-3}) {
            const auto r = commutator_numeric({s, g}, PaperHalfResonance{});
            EXPECT_TRUE(r.converged());
            EXPECT_NEAR(r.value / commutator_closed_form(s), 1.0, 10.0 * 1e-10)
                << "s = " << s << " g = " << g;
        }
    }
}

TEST(PaperHalfResonance, IndependentOfG)
{
    const double ref = commutator_numeric({2.0, 1e-4}, PaperHalfResonance{}).value;
    EXPECT_NEAR(commutator_numeric({2.0, 5e-5}, PaperHalfResonance{}).value / ref, 1.0, 1e-10);
    EXPECT_NEAR(commutator_numeric({2.0, 1e-8}, PaperHalfResonance{}).value / ref, 1.0, 1e-10);
}

TEST(SymmetricResonance, CarriesTwiceTheHalfResonanceWeight)
{
    const DimensionlessParams p{0.0, 1e-6};
    const auto r = commutator_numeric(p, SymmetricResonance{1e-2});
    EXPECT_TRUE(r.converged());
    EXPECT_NEAR(r.value, 2.0, 0.02);

    const auto f = [&](double u) { return integrand(u, p.s, p.g); };
    const double oracle =
        tan_simpson(f, std::sqrt(1.0 - 1e-2), std::sqrt(1.0 + 1e-2), 0.5 * p.g, 400000);
    EXPECT_NEAR(r.value / oracle, 1.0, 1e-7);
}

TEST(SymmetricResonance, ThermalCase)
{
    const DimensionlessParams p{1.0, 1e-5};
    const auto r = commutator_numeric(p, SymmetricResonance{0.05});
    const auto f = [&](double u) { return integrand(u, p.s, p.g); };
    const double A = p.g * (1.0 + p.s * p.s);
    const double oracle = tan_simpson(f, std::sqrt(0.95), std::sqrt(1.05), 0.5 * A, 400000);
    EXPECT_NEAR(r.value / oracle, 1.0, 1e-7);
    // roughly 2 coth(pi) once the window holds the whole peak
    EXPECT_NEAR(r.value / (2.0 * coth_factor(1.0)), 1.0, 2e-2);
}

TEST(SymmetricResonance, MonotoneInWindow)
{
    double prev = 0.0;
    for (double W : {1e-5, 1e-4, 1e-3, 1e-2, 0.1, 0.5, 0.9}) {
        const double v = commutator_numeric({0.5, 1e-4}, SymmetricResonance{W}).value;
        EXPECT_GE(v, prev) << "W = " << W;
        prev = v;
    }
}

TEST(SymmetricResonance, RejectsWideWindow)
{
    EXPECT_THROW(commutator_numeric({0.0, 1e-6}, SymmetricResonance{1.0}), DomainError);
    EXPECT_THROW(commutator_numeric({0.0, 1e-6}, SymmetricResonance{0.0}), DomainError);
}

TEST(FullAxis, ExceedsResonanceWeight)
{
    const auto sym = commutator_numeric({0.0, 1e-6}, SymmetricResonance{1e-2});
    const auto full = commutator_numeric({0.0, 1e-6}, FullAxis{1e3});
    EXPECT_TRUE(full.converged());
    EXPECT_GT(full.value, sym.value);
    EXPECT_THROW(commutator_numeric({0.0, 1e-6}, FullAxis{1.0}), DomainError);
}

TEST(NumericParams, GuardG)
{
    EXPECT_THROW(commutator_numeric({0.0, 2e-2}, PaperHalfResonance{}), DomainError);
    EXPECT_THROW(commutator_numeric({0.0, 0.0}, PaperHalfResonance{}), DomainError);
    EXPECT_THROW(commutator_numeric({-1.0, 1e-3}, PaperHalfResonance{}), DomainError);
}

TEST(Variances, GroundState)
{
    EXPECT_NEAR(variance_x({0.0, 1e-6}, PaperHalfResonance{}).value, 1.0, 1e-10);
    EXPECT_NEAR(variance_p({0.0, 1e-6}, PaperHalfResonance{}).value, 1.0, 1e-10);
    EXPECT_NEAR(uncertainty_product({0.0, 1e-6}, PaperHalfResonance{}).product, 1.0, 1e-10);
}

TEST(Variances, ThermalValues)
{
    EXPECT_NEAR(variance_x({1.0, 1e-6}, PaperHalfResonance{}).value, 1.0037418731973212882, 1e-9);
    EXPECT_NEAR(variance_p({2.0, 1e-6}, PaperHalfResonance{}).value, 1.09033141072736823, 1e-9);
    const auto u = uncertainty_product({10.0, 1e-6}, PaperHalfResonance{});
    EXPECT_NEAR(u.product, 3.287136001903376979, 1e-8);
    EXPECT_NEAR(u.dx2.value * u.dp2.value, std::pow(coth_factor(10.0), 2), 1e-7);
}

TEST(Variances, HalvingGLeavesHalfResonanceValueUnchanged)
{
    const double a = variance_x({1.5, 1e-4}, PaperHalfResonance{}).value;
    const double b = variance_x({1.5, 5e-5}, PaperHalfResonance{}).value;
    EXPECT_NEAR(a / b, 1.0, 1e-10);
}

TEST(Variances, SaturateCommutatorUnderHalfResonanceWindow)
{
    for (double s : {0.0, 0.5, 1.0, 2.0, 10.0}) {
        const DimensionlessParams p{s, 1e-6};
        const double product = uncertainty_product(p, PaperHalfResonance{}).product;
        const double comm = commutator_numeric(p, PaperHalfResonance{}).value;
        EXPECT_NEAR(product / comm, 1.0, 1e-9) << s;
    }
}

TEST(Variances, SymmetricWindowAgreesWithOracle)
{
    const DimensionlessParams p{0.5, 1e-5};
    const double A = p.g * (1.0 + p.s * p.s);
    for (auto m : {SpectralMoment::Position, SpectralMoment::Velocity}) {
        const auto f = [&](double u) { return spectral_integrand(m, u, p.s, p.g); };
        const double oracle = tan_simpson(f, std::sqrt(0.99), std::sqrt(1.01), 0.5 * A, 400000);
        const double v = m == SpectralMoment::Position
                             ? variance_x(p, SymmetricResonance{1e-2}).value
                             : variance_p(p, SymmetricResonance{1e-2}).value;
        EXPECT_NEAR(v / oracle, 1.0, 1e-7);
    }
}

TEST(Window, ToString)
{
    EXPECT_EQ(to_string(WindowSpec{PaperHalfResonance{}}), "paper");
    EXPECT_EQ(to_string(WindowSpec{SymmetricResonance{0.01}}), "sym:0.01");
    EXPECT_EQ(to_string(WindowSpec{FullAxis{1000.0}}), "full:1000");
}

TEST(InertialLimit, AllWindowsLoseSDependence)
{
    // at s = 0 the thermal factor is exactly 1 in every window
    const DimensionlessParams p{0.0, 1e-5};
    EXPECT_NEAR(commutator_numeric(p, PaperHalfResonance{}).value, 1.0, 1e-10);
    const double sym = commutator_numeric(p, SymmetricResonance{0.1}).value;
    const auto f = [&](double u) { return integrand(u, 0.0, p.g); };
    EXPECT_NEAR(sym / tan_simpson(f, std::sqrt(0.9), std::sqrt(1.1), 0.5 * p.g, 400000), 1.0, 1e-7);
}
