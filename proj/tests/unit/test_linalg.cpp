#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "qbath/linalg.hpp"

using namespace qbath;
using namespace qbath::linalg;

namespace {

RMatrix random_symmetric(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    RMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) a(i, j) = a(j, i) = g(rng);
    return a;
}

double residual(const RMatrix& a, const SymEigen& e) {
    const std::size_t n = a.rows();
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) {
            double s = -e.values[k] * e.vectors(i, k);
            for (std::size_t j = 0; j < n; ++j) s += a(i, j) * e.vectors(j, k);
            worst = std::max(worst, std::abs(s));
        }
    return worst;
}

} // namespace

TEST(Jacobi, TwoByTwoByHand) {
    RMatrix a(2, 2);
    a(0, 0) = 2;
    a(0, 1) = a(1, 0) = 1;
    a(1, 1) = 2;
    const auto e = jacobi_eigen(a);
    EXPECT_NEAR(e.values[0], 1.0, 1e-14);
    EXPECT_NEAR(e.values[1], 3.0, 1e-14);
}

TEST(SymmetricEigen, HouseholderQLMatchesJacobi) {
    for (unsigned seed : {1u, 2u, 3u}) {
        for (std::size_t n : {1u, 2u, 3u, 7u, 40u}) {
            const RMatrix a = random_symmetric(n, seed);
            const auto j = jacobi_eigen(a);
            const auto h = symmetric_eigen(a, VectorScope::full);
            for (std::size_t k = 0; k < n; ++k) EXPECT_NEAR(h.values[k], j.values[k], 1e-11) << n;
            EXPECT_LT(residual(a, h), 1e-11);
            EXPECT_LT(residual(a, j), 1e-11);
            const auto f = symmetric_eigen(a, VectorScope::first_row);
            for (std::size_t k = 0; k < n; ++k) {
                EXPECT_NEAR(f.values[k], j.values[k], 1e-11);
                EXPECT_NEAR(std::abs(f.first_row[k]), std::abs(j.vectors(0, k)), 1e-9);
            }
        }
    }
}

TEST(SymmetricEigen, VectorsAreOrthonormal) {
    const RMatrix a = random_symmetric(30, 9);
    const auto h = symmetric_eigen(a, VectorScope::full);
    for (std::size_t p = 0; p < 30; ++p)
        for (std::size_t q = 0; q < 30; ++q) {
            double s = 0.0;
            for (std::size_t i = 0; i < 30; ++i) s += h.vectors(i, p) * h.vectors(i, q);
            EXPECT_NEAR(s, p == q ? 1.0 : 0.0, 1e-12);
        }
}

TEST(SymmetricEigen, DiagonalInputIsSorted) {
    RMatrix a(4, 4);
    a(0, 0) = 3;
    a(1, 1) = -1;
    a(2, 2) = 2;
    a(3, 3) = 0.5;
    const auto h = symmetric_eigen(a);
    EXPECT_TRUE(std::is_sorted(h.values.begin(), h.values.end()));
    EXPECT_DOUBLE_EQ(h.values.front(), -1.0);
}

TEST(Expm, MatchesTaylorSeriesOracle) {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> g;
    for (double scale : {0.1, 1.0, 6.0}) {
        CMatrix a(5, 5);
        for (auto& x : a.data()) x = scale * cplx(g(rng), g(rng)) / 3.0;
        // oracle: Taylor series on a/2^s, then squaring, in long double
        const int s = 12;
        std::vector<std::complex<long double>> m(25), term(25), sum(25);
        for (std::size_t i = 0; i < 25; ++i) m[i] = std::complex<long double>(a.data()[i]) / (long double)(1 << s);
        for (std::size_t i = 0; i < 5; ++i) term[i * 5 + i] = sum[i * 5 + i] = 1.0L;
        auto mul = [](const auto& x, const auto& y) {
            std::vector<std::complex<long double>> z(25);
            for (int i = 0; i < 5; ++i)
                for (int k = 0; k < 5; ++k)
                    for (int j = 0; j < 5; ++j) z[i * 5 + j] += x[i * 5 + k] * y[k * 5 + j];
            return z;
        };
        for (int k = 1; k < 30; ++k) {
            term = mul(term, m);
            for (auto& t : term) t /= (long double)k;
            for (std::size_t i = 0; i < 25; ++i) sum[i] += term[i];
        }
        for (int k = 0; k < s; ++k) sum = mul(sum, sum);
        const CMatrix e = expm(a);
        double nrm = 0.0;
        for (auto& x : sum) nrm = std::max(nrm, (double)std::abs(x));
        for (std::size_t i = 0; i < 25; ++i)
            EXPECT_NEAR(std::abs(e.data()[i] - std::complex<double>(sum[i])), 0.0, 1e-12 * nrm) << scale;
    }
}

TEST(Expm, AntiHermitianGivesUnitary) {
    CMatrix h(6, 6);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            const cplx z = i == j ? cplx(g(rng)) : cplx(g(rng), g(rng));
            h(i, j) = z;
            h(j, i) = std::conj(z);
        }
    const CMatrix u = expm(h * cplx(0.0, 1.0));
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) {
            cplx s{};
            for (std::size_t k = 0; k < 6; ++k) s += std::conj(u(k, i)) * u(k, j);
            EXPECT_NEAR(std::abs(s - (i == j ? cplx(1.0) : cplx(0.0))), 0.0, 1e-12);
        }
}

TEST(LuSolve, SolvesRandomSystem) {
    std::mt19937_64 rng(6);
    std::normal_distribution<double> g;
    CMatrix a(4, 4), x(4, 1);
    for (auto& v : a.data()) v = cplx(g(rng), g(rng));
    for (auto& v : x.data()) v = cplx(g(rng), g(rng));
    const CMatrix b = a * x;
    const CMatrix y = lu_solve(a, b);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(y(i, 0) - x(i, 0)), 0.0, 1e-12);
}
