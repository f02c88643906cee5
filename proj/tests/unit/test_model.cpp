#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qbath/model.hpp"

using namespace qbath;

namespace {

ModelParams params(double omega0, double eta, double omega_c = 100.0) {
    ModelParams p;
    p.omega0 = omega0;
    p.eta = eta;
    p.omega_c = omega_c;
    return p;
}

} // namespace

TEST(SpectralDensity, LinearBelowCutoff) {
    EXPECT_DOUBLE_EQ(spectral_density_J(1.0, params(1.0, 0.5)), 0.5);
    EXPECT_DOUBLE_EQ(spectral_density_J(0.0, params(1.0, 0.7)), 0.0);
    EXPECT_DOUBLE_EQ(spectral_density_J(200.0, params(1.0, 0.5)), 0.0);
}

TEST(SpectralDensity, NegativeFrequencyRejected) {
    EXPECT_THROW(spectral_density_J(-1.0, params(1.0, 0.5)), DomainError);
}

TEST(GInverse, Examples) {
    EXPECT_EQ(g_inverse(0.0, params(1.0, 0.3)), std::complex<double>(-1.0, 0.0));
    const auto g = g_inverse(1.0, params(1.0, 0.5));
    EXPECT_DOUBLE_EQ(g.real(), 0.0);
    EXPECT_DOUBLE_EQ(g.imag(), 0.5);
    EXPECT_EQ(g_inverse(2.0, params(0.0, 1.0)), std::complex<double>(4.0, 2.0));
}

TEST(SpectralFunction, Examples) {
    EXPECT_DOUBLE_EQ(spectral_function_s(1.0, params(1.0, 0.5)), 4.0);
    EXPECT_EQ(spectral_function_s(0.0, params(1.0, 0.5)), 0.0);
    EXPECT_DOUBLE_EQ(spectral_function_s(1.0, params(0.0, 1.0)), 1.0);
    EXPECT_THROW(spectral_function_s(0.0, params(0.0, 1.0)), DomainError);
}

TEST(SpectralFunction, MatchesImaginaryPartOfGreenFunction) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> w(0.01, 20.0), o(0.0, 5.0), e(0.01, 5.0);
    for (int i = 0; i < 500; ++i) {
        const auto p = params(o(rng), e(rng));
        const double x = w(rng);
        const double ref = -2.0 * (1.0 / g_inverse(x, p)).imag();
        EXPECT_NEAR(spectral_function_s(x, p), ref, 1e-12 * std::abs(ref)) << x;
    }
}

TEST(SpectralFunction, IsOdd) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> w(0.01, 20.0), o(0.0, 5.0), e(0.01, 5.0);
    for (int i = 0; i < 200; ++i) {
        const auto p = params(o(rng), e(rng));
        const double x = w(rng);
        EXPECT_EQ(spectral_function_s(-x, p), -spectral_function_s(x, p));
    }
}

TEST(ModelParams, UnderdampedPredicateGuardsDampedFrequency) {
    EXPECT_TRUE(params(1.0, 1.9).underdamped());
    EXPECT_FALSE(params(1.0, 2.0).underdamped());
    EXPECT_DOUBLE_EQ(params(1.0, 1.0).damped_frequency(), std::sqrt(0.75));
    EXPECT_THROW(params(1.0, 3.0).damped_frequency(), DomainError);
}

TEST(ModelParams, ReducedAccuracyFlag) {
    EXPECT_TRUE(params(1.0, 2.0, 15.0).reduced_accuracy());
    EXPECT_FALSE(params(1.0, 2.0, 25.0).reduced_accuracy());
}

TEST(ModelParams, ValidationRejectsBadValues) {
    EXPECT_THROW(params(-1.0, 0.0).validate(), DomainError);
    EXPECT_THROW(params(1.0, -0.1).validate(), DomainError);
    EXPECT_THROW(params(1.0, 0.1, 0.0).validate(), DomainError);
    EXPECT_NO_THROW(params(0.0, 0.0).validate());
}

TEST(InverseTemperature, FiniteAndInfinite) {
    EXPECT_THROW(InverseTemperature::finite(0.0), DomainError);
    EXPECT_THROW(InverseTemperature::finite(-2.0), DomainError);
    EXPECT_THROW(InverseTemperature::infinite().value(), DomainError);
    EXPECT_EQ(InverseTemperature::infinite().coth_half(0.3), 1.0);
    EXPECT_DOUBLE_EQ(InverseTemperature::finite(2.0).value(), 2.0);
}

TEST(InverseTemperature, CothHalfAcrossTheSeriesSwitch) {
    const auto b = InverseTemperature::finite(1.0);
    for (double x : {1e-6, 1e-4, 9.99e-4, 1.001e-3, 0.1, 1.0, 10.0, 100.0}) {
        const double ref = std::cosh(0.5 * x) / std::sinh(0.5 * x);
        EXPECT_NEAR(b.coth_half(x), ref, 1e-13 * ref) << x;
    }
}
