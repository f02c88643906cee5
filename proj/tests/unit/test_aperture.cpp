#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "qbath/aperture.hpp"
#include "qbath/quadrature.hpp"

using namespace qbath;

TEST(Aperture, TwoSlitLayout) {
    const auto ap = Aperture::two_slit(2.0, 0.1);
    ASSERT_EQ(ap.size(), 2u);
    EXPECT_DOUBLE_EQ(ap.components()[0].center, -1.0);
    EXPECT_DOUBLE_EQ(ap(1.0), 1.0 + std::exp(-200.0));
    EXPECT_THROW(Aperture::two_slit(0.0, 0.1), DomainError);
    EXPECT_THROW(Aperture({{1.0, 0.0, 0.0}}), DomainError);
    EXPECT_THROW(Aperture({}), DomainError);
}

TEST(Aperture, FourierTransformMatchesQuadrature) {
    const Aperture ap({{1.0, -0.4, 0.2}, {0.7, 0.6, 0.35}});
    for (double a : {-7.0, -1.3, 0.0, 0.8, 5.5}) {
        auto f = [&](double q) {
            return ap(q) * std::polar(1.0, -q * a) / (2.0 * std::numbers::pi);
        };
        const auto num = quad::integrate<std::complex<double>>(f, -8.0, 8.0).value;
        EXPECT_NEAR(std::abs(ap.fourier(a) - num), 0.0, 1e-10) << a;
    }
}

TEST(Aperture, PairWeightMatchesQuadrature) {
    const Aperture ap({{1.0, -0.4, 0.2}, {0.7, 0.6, 0.35}});
    for (double var : {0.25, 2.0, std::numeric_limits<double>::infinity()}) {
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k) {
                auto f = [&](double q) {
                    const double rho = std::isinf(var) ? 1.0
                                                       : std::exp(-0.5 * q * q / var) /
                                                             std::sqrt(2.0 * std::numbers::pi * var);
                    return ap.component(j, q) * ap.component(k, q) * rho;
                };
                const double num = quad::integrate<double>(f, -8.0, 8.0).value;
                EXPECT_NEAR(ap.pair_weight(j, k, var), num, 1e-10 * num + 1e-14);
            }
    }
}

TEST(Aperture, TraceIsSumOfPairs) {
    const auto ap = Aperture::two_slit(1.0, 0.05);
    double s = 0.0;
    for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t k = 0; k < 2; ++k) s += ap.pair_weight(j, k, 0.5);
    EXPECT_DOUBLE_EQ(ap.trace(0.5), s);
    EXPECT_GT(ap.trace(0.5), 0.0);
}
